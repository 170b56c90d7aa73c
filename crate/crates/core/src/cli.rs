//! The `prepcode` command line.
//!
//! Exit codes: 0 when the operation succeeded and every check passed, 1 when
//! a check failed or no isomorphism / equivalence exists, 2 on usage, input
//! or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::code::{parse_code, render_code, write_code, Code};
use crate::construct::{build_nr_via_octacode, reduce, PreparataSpec};
use crate::error::{input, Result};
use crate::graphs::{build_mdg, to_dimacs};
use crate::isometry::{
    apply_automorphism, find_equivalence, verify_isometry, weak_isometry, CodewordBijection, Outcome, SpaceAutomorphism,
};
use crate::verify::{
    blocks_of_weight, check_corollary1, check_counting_extended, check_counting_punctured, check_design,
    check_structure, critical_scan, max_constant_weight, CheckReport, Mode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "prepcode", version, about = "Preparata code construction and verification")]
struct Cli {
    /// Worker threads (default: all available).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomised operations.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the extended Preparata code of length 16 (or a membership stub for 64).
    Construct {
        #[arg(long)]
        n: usize,
        /// Primitive polynomial of the field as an integer (0x.., 0b.. or decimal).
        #[arg(long)]
        primpoly: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the length-16 code as the Gray image of the octacode.
    Octacode {
        #[arg(long)]
        out: PathBuf,
    },
    /// Delete one coordinate.
    Puncture {
        #[arg(long = "in")]
        input: PathBuf,
        /// 1-based coordinate, default n.
        #[arg(long)]
        coord: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print n, M, d and the weight distribution.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the structural check suite.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "extended")]
        suite: Mode,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check that the weight-k codewords form a t-design.
    Design {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Export the minimal distance graph in DIMACS format.
    Mdg {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find a weak isometry (MDG isomorphism) from code a onto code b.
    Wiso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Check whether a codeword bijection preserves all distances.
    Isocheck {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Find a coordinate permutation plus translation carrying code a onto code b.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        auto_out: Option<PathBuf>,
    },
    /// Maximum size of a constant-weight code.
    Cwmax {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        d: usize,
    },
    /// Exact scan of the critical-codeword bounds.
    Scan {
        #[arg(long, default_value_t = 6)]
        imin: i64,
        #[arg(long, default_value_t = 10_000)]
        imax: i64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Apply a random space automorphism (from --seed) to a code.
    Permute {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        auto_out: Option<PathBuf>,
    },
}

/// Report of a suite run.
#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub suite: String,
    pub inputs: Vec<InputDigest>,
    pub notes: Vec<String>,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
    pub timing_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl SuiteReport {
    fn new(suite: &str, inputs: Vec<InputDigest>) -> SuiteReport {
        SuiteReport {
            tool: "prepcode",
            version: env!("CARGO_PKG_VERSION"),
            suite: suite.to_string(),
            inputs,
            notes: Vec::new(),
            checks: Vec::new(),
            pass: true,
            timing_ms: 0.0,
        }
    }

    fn push(&mut self, r: CheckReport) {
        self.pass &= r.pass;
        self.checks.push(r);
    }
}

/// The file's bytes and their SHA-256 digest.
fn load(path: &Path) -> Result<(Vec<u8>, InputDigest)> {
    let bytes = fs::read(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok((bytes, InputDigest { path: path.display().to_string(), sha256: digest }))
}

fn load_code(path: &Path) -> Result<(Code, InputDigest)> {
    let (bytes, digest) = load(path)?;
    let text = String::from_utf8(bytes).map_err(|_| crate::Error::Parse { line: 0, msg: "not UTF-8".into() })?;
    Ok((parse_code(&text)?, digest))
}

/// Translates to a reduced code if necessary, noting it in the report.
fn reduced(c: Code, notes: &mut Vec<String>) -> Code {
    if c.is_reduced() {
        c
    } else {
        notes.push(format!("input translated by {} to contain the zero word", c.words()[0].to_hex()));
        reduce(&c)
    }
}

fn write_json(path: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_int(s: &str) -> Result<u32> {
    let (digits, radix) = if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        (h, 16)
    } else if let Some(b) = s.strip_prefix("0b").or_else(|| s.strip_prefix("0B")) {
        (b, 2)
    } else {
        (s, 10)
    };
    u32::from_str_radix(digits, radix).or_else(|_| input(format!("cannot parse {s:?} as an integer")))
}

fn code_summary(c: &Code) -> Value {
    json!({
        "n": c.n(),
        "M": c.len(),
        "d": c.distance(),
        "reduced": c.is_reduced(),
        "weight_distribution": c.weight_distribution(),
    })
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Construct { n, primpoly, out } => {
            let spec = match &primpoly {
                Some(p) => {
                    let m_field = match n {
                        16 => 3,
                        64 => 5,
                        _ => return input(format!("--n must be 16 or 64 (got {n})")),
                    };
                    PreparataSpec::with_modulus(m_field, parse_int(p)?)?
                }
                None => PreparataSpec::for_length(n)?,
            };
            if n == 64 {
                let stub = json!({
                    "format": "prepcode membership v1",
                    "n": spec.n(),
                    "m_field": spec.m_field(),
                    "modulus": format!("{:#x}", spec.field().modulus()),
                    "log2_cardinality": spec.log2_cardinality(),
                    "layout": "coordinate e+1 is element e of X, coordinate 2^m+e+1 is element e of Y",
                    "conditions": [
                        "|X| even and |Y| even",
                        "sum X = sum Y",
                        "sum_{x in X} x^3 + (sum X)^3 = sum_{y in Y} y^3",
                    ],
                });
                write_json(Some(&out), &stub)?;
                println!("{}", serde_json::to_string(&stub)?);
                return Ok(EXIT_OK);
            }
            let c = spec.enumerate()?;
            write_code(&c, &out)?;
            println!("{}", code_summary(&c));
            Ok(EXIT_OK)
        }
        Command::Octacode { out } => {
            let c = build_nr_via_octacode()?;
            write_code(&c, &out)?;
            println!("{}", code_summary(&c));
            Ok(EXIT_OK)
        }
        Command::Puncture { input: path, coord, out } => {
            let (c, _) = load_code(&path)?;
            let p = c.puncture(coord.unwrap_or(c.n()))?;
            write_code(&p, &out)?;
            println!("{}", code_summary(&p));
            Ok(EXIT_OK)
        }
        Command::Stats { input: path } => {
            let (c, _) = load_code(&path)?;
            println!("{}", serde_json::to_string_pretty(&code_summary(&c))?);
            Ok(EXIT_OK)
        }
        Command::Verify { input: path, suite, report } => {
            let start = Instant::now();
            let (c, digest) = load_code(&path)?;
            let mut r = SuiteReport::new(suite.name(), vec![digest]);
            let c = reduced(c, &mut r.notes);
            match suite {
                Mode::Punctured => {
                    r.push(check_design(&blocks_of_weight(&c, 5), c.n(), 2, 5)?);
                    r.push(check_corollary1(&c)?);
                    r.push(check_structure(&c, Mode::Punctured)?);
                    r.push(check_counting_punctured(&c)?);
                }
                Mode::Extended => {
                    r.push(check_design(&blocks_of_weight(&c, 6), c.n(), 3, 6)?);
                    r.push(check_structure(&c, Mode::Extended)?);
                    r.push(check_counting_extended(&c)?);
                }
            }
            r.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            write_json(report.as_deref(), &r)?;
            if report.is_some() {
                for ch in &r.checks {
                    println!("{} {}", if ch.pass { "PASS" } else { "FAIL" }, ch.check);
                }
            }
            Ok(pass_code(r.pass))
        }
        Command::Design { input: path, t, k, report } => {
            let start = Instant::now();
            let (c, digest) = load_code(&path)?;
            let mut r = SuiteReport::new("design", vec![digest]);
            let c = reduced(c, &mut r.notes);
            r.push(check_design(&blocks_of_weight(&c, k), c.n(), t, k)?);
            r.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            write_json(report.as_deref(), &r)?;
            Ok(pass_code(r.pass))
        }
        Command::Mdg { input: path, out } => {
            let (c, _) = load_code(&path)?;
            let mdg = build_mdg(&c)?;
            fs::write(&out, to_dimacs(&mdg))?;
            println!(
                "{}",
                json!({
                    "vertices": mdg.graph.vertex_count(),
                    "edges": mdg.graph.edge_count(),
                    "d": mdg.d,
                    "regular_degree": mdg.graph.regular_degree(),
                })
            );
            Ok(EXIT_OK)
        }
        Command::Wiso { a, b, map_out } => {
            let (c1, _) = load_code(&a)?;
            let (c2, _) = load_code(&b)?;
            match weak_isometry(&c1, &c2)? {
                Outcome::Found(j) => {
                    if let Some(p) = map_out {
                        fs::write(p, j.to_json() + "\n")?;
                    }
                    let iso = verify_isometry(&j);
                    println!("{}", json!({ "found": true, "pairs": j.len(), "isometry": iso.isometry }));
                    Ok(EXIT_OK)
                }
                Outcome::Absent { reason } => {
                    println!("{}", json!({ "found": false, "reason": reason }));
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Isocheck { a, b, map } => {
            let (c1, _) = load_code(&a)?;
            let (c2, _) = load_code(&b)?;
            let (bytes, _) = load(&map)?;
            let text = String::from_utf8_lossy(&bytes);
            let j = CodewordBijection::from_json(&text, c1.n(), c2.n())?;
            j.check_codes(&c1, &c2)?;
            let check = verify_isometry(&j);
            println!("{}", serde_json::to_string_pretty(&check)?);
            Ok(pass_code(check.isometry))
        }
        Command::Equiv { a, b, auto_out } => {
            let (c1, _) = load_code(&a)?;
            let (c2, _) = load_code(&b)?;
            match find_equivalence(&c1, &c2)? {
                Outcome::Found(f) => {
                    if let Some(p) = auto_out {
                        fs::write(p, f.to_json() + "\n")?;
                    }
                    let perm: Vec<usize> = f.perm().iter().map(|p| p + 1).collect();
                    println!("{}", json!({ "found": true, "perm": perm, "t": f.translation().to_hex() }));
                    Ok(EXIT_OK)
                }
                Outcome::Absent { reason } => {
                    println!("{}", json!({ "found": false, "reason": reason }));
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Cwmax { n, w, d } => {
            let (size, _) = max_constant_weight(n, w, d)?;
            println!("{size}");
            Ok(EXIT_OK)
        }
        Command::Scan { imin, imax, report } => {
            let r = critical_scan(imin, imax)?;
            write_json(report.as_deref(), &r)?;
            Ok(pass_code(r.pass))
        }
        Command::Permute { input: path, out, auto_out } => {
            let (c, _) = load_code(&path)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let f = SpaceAutomorphism::random(c.n(), &mut rng)?;
            let img = apply_automorphism(&f, &c)?;
            fs::write(&out, render_code(&img))?;
            if let Some(p) = auto_out {
                fs::write(p, f.to_json() + "\n")?;
            }
            println!("{}", code_summary(&img));
            Ok(EXIT_OK)
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // a pool may already exist when `run` is called more than once in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
