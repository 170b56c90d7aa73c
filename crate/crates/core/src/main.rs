fn main() {
    std::process::exit(prepcode::cli::run(std::env::args_os()));
}
