//! Acceptance suite. Runs as a plain binary (no libtest harness) so the
//! PASS/FAIL lines always reach the terminal; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use prepcode::code::{read_code, write_code, BinaryWord, Code};
use prepcode::construct::{build_nr_via_octacode, reduce, PreparataSpec};
use prepcode::isometry::{
    apply_automorphism, find_equivalence, verify_isometry, weak_isometry, CodewordBijection, SpaceAutomorphism,
};
use prepcode::verify::{
    blocks_of_weight, check_corollary1, check_counting_extended, check_counting_punctured, check_design,
    check_structure, critical_scan, max_constant_weight, scan_row, CheckReport, Mode,
};

const BIN: &str = env!("CARGO_BIN_EXE_prepcode");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Fixtures) -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn passed(r: &CheckReport) -> Result<(), String> {
    ensure(r.pass, format!("{} failed: {} violations, first {:?}", r.check, r.violations, r.counterexamples.first()))
}

fn prepcode(args: &[&str]) -> i32 {
    Command::new(BIN).args(args).output().expect("run prepcode").status.code().unwrap_or(-1)
}

fn dist(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

struct Fixtures {
    dir: tempfile::TempDir,
    extended: Code,
    punctured: Code,
}

impl Fixtures {
    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }
}

fn c1(fx: &Fixtures) -> Outcome {
    let start = Instant::now();
    let code = prepcode(&["construct", "--n", "16", "--out", &fx.path("p16.code")]);
    ensure(code == 0, format!("construct exited {code}"))?;
    let c = read_code(fx.path("p16.code")).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5))?;
    ensure((c.n(), c.len(), c.distance()) == (16, 256, Some(6)), "parameters")?;
    ensure(c.is_reduced(), "not reduced")?;
    let wd = c.weight_distribution().to_map();
    ensure(wd == dist(&[(0, 1), (6, 112), (8, 30), (10, 112), (16, 1)]), format!("weights {wd:?}"))?;
    ensure(c == fx.extended, "differs from the library construction")?;
    Ok(format!("(16,256,6) {wd:?} in {:?}", start.elapsed()))
}

fn c2(fx: &Fixtures) -> Outcome {
    let start = Instant::now();
    for pos in 1..=16 {
        let p = fx.extended.puncture(pos).map_err(|e| e.to_string())?;
        ensure((p.n(), p.len(), p.distance()) == (15, 256, Some(5)), format!("coordinate {pos}"))?;
        ensure(p.weight_distribution().count(5) == 42, format!("coordinate {pos}: weight-5 count"))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("16 punctures are (15,256,5) with 42 words of weight 5, {:?}", start.elapsed()))
}

fn lambda(r: &CheckReport) -> Result<(Value, Value), String> {
    let l = r.lambda.as_ref().ok_or("no lambda")?;
    Ok((l["empirical"].clone(), l["matches"].clone()))
}

fn c3(fx: &Fixtures) -> Outcome {
    let r = check_design(&blocks_of_weight(&fx.punctured, 5), 15, 2, 5).map_err(|e| e.to_string())?;
    passed(&r)?;
    let (emp, matches) = lambda(&r)?;
    ensure(emp == 4, format!("lambda {emp}"))?;
    ensure(r.counts.as_ref().unwrap()["subsets"] == 105, "pair count")?;
    ensure(matches.as_array().unwrap().contains(&Value::from("(n-3)/3")), "(n-3)/3 does not match")?;
    Ok(format!("2-(15,5,4) over 105 pairs, matching {matches}"))
}

fn c4(fx: &Fixtures) -> Outcome {
    let r = check_design(&blocks_of_weight(&fx.extended, 6), 16, 3, 6).map_err(|e| e.to_string())?;
    passed(&r)?;
    let (emp, _) = lambda(&r)?;
    ensure(emp == 4, format!("lambda {emp}"))?;
    ensure(r.counts.as_ref().unwrap()["subsets"] == 560, "triple count")?;
    Ok("3-(16,6,4) over 560 triples".into())
}

fn c5(fx: &Fixtures) -> Outcome {
    let r = check_corollary1(&fx.punctured).map_err(|e| e.to_string())?;
    passed(&r)?;
    ensure(r.counts.as_ref().unwrap()["pairs"] == 105, "pair count")?;
    Ok("105 pairs, one common-zero coordinate each".into())
}

fn c6(fx: &Fixtures) -> Outcome {
    let start = Instant::now();
    let mut tuples = 0;
    for (c, mode) in [(&fx.punctured, Mode::Punctured), (&fx.extended, Mode::Extended)] {
        let r = check_structure(c, mode).map_err(|e| e.to_string())?;
        passed(&r)?;
        let counts = r.counts.as_ref().unwrap();
        ensure(counts["codewords"] == 256, format!("{}: codewords audited", mode.name()))?;
        tuples += counts["tuples_checked"].as_u64().unwrap();
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("2 x 256 codewords, {tuples} tuples, no counterexamples, {:?}", start.elapsed()))
}

fn tight(r: &CheckReport, weight: usize, upper: u64) -> Outcome {
    passed(r)?;
    let b = &r.bounds.as_ref().ok_or("no bounds")?[weight.to_string()];
    ensure(b["upper"] == upper, format!("upper bound {}", b["upper"]))?;
    ensure(b["max_value"] == upper, format!("max value {}", b["max_value"]))?;
    ensure(b["attaining_upper"] == b["codewords"], "not every minimum-weight word attains the bound")?;
    Ok(format!("all weights hold, weight {weight} attains {upper} for {} words", b["codewords"]))
}

fn c7(fx: &Fixtures) -> Outcome {
    let r = check_counting_punctured(&fx.punctured).map_err(|e| e.to_string())?;
    ensure(
        r.bounds.as_ref().unwrap().as_object().unwrap().keys().all(|k| k.parse::<usize>().unwrap() >= 5),
        "weights below 5 audited",
    )?;
    tight(&r, 5, 30)
}

fn c8(fx: &Fixtures) -> Outcome {
    let r = check_counting_extended(&fx.extended).map_err(|e| e.to_string())?;
    tight(&r, 6, 60)
}

fn c9(_: &Fixtures) -> Outcome {
    let mut out = Vec::new();
    for (n, w, want) in [(10, 5, 6), (11, 6, 11)] {
        let start = Instant::now();
        let (size, witness) = max_constant_weight(n, w, 6).map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(60))?;
        ensure(size == want && witness.len() == want, format!("cwmax({n},{w},6) = {size}"))?;
        ensure(witness.iter().all(|x| x.weight() == w), "witness weight")?;
        let wc = Code::new(n, witness).map_err(|e| e.to_string())?;
        ensure(wc.distance().is_some_and(|d| d >= 6), "witness distance")?;
        out.push(format!("cwmax({n},{w},6)={size}"));
    }
    Ok(out.join(", "))
}

fn c10(_: &Fixtures) -> Outcome {
    let r = critical_scan(6, 10_000).map_err(|e| e.to_string())?;
    passed(&r)?;
    let l: Vec<i128> = (6..=9).map(|i| scan_row(i).lower_bound).collect();
    ensure(l[2] == 12 && l[3] == 21 && l[0] >= 1 && l[1] >= 1, format!("L(6..9) = {l:?}"))?;
    for i in 6..=10_000 {
        let row = scan_row(i);
        ensure(row.b_holds == (i >= 10), format!("(b) at i={i}"))?;
        ensure(!row.c_holds, format!("(c) holds at i={i}"))?;
    }
    Ok(format!("L(6..9) = {l:?}, (b) holds exactly for 10..=10000, (c) fails throughout"))
}

fn fixtures_for(c: &Code, rng: &mut ChaCha8Rng) -> Vec<(SpaceAutomorphism, Code)> {
    (0..20)
        .map(|_| {
            let f = SpaceAutomorphism::random(c.n(), rng).unwrap();
            let img = apply_automorphism(&f, c).unwrap();
            (f, img)
        })
        .collect()
}

fn c11(fx: &Fixtures) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in [&fx.punctured, &fx.extended] {
        for (k, (_, img)) in fixtures_for(c, &mut rng).iter().enumerate() {
            let j = weak_isometry(c, img).map_err(|e| e.to_string())?.found();
            let j = j.ok_or(format!("n={} fixture {k}: no weak isometry", c.n()))?;
            ensure(verify_isometry(&j).isometry, format!("n={} fixture {k}: not an isometry", c.n()))?;
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("40/40 weak isometries verified as isometries, {:?}", start.elapsed()))
}

fn c12(fx: &Fixtures) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in [&fx.punctured, &fx.extended] {
        for (k, (_, img)) in fixtures_for(c, &mut rng).iter().enumerate() {
            let f = find_equivalence(c, img).map_err(|e| e.to_string())?.found();
            let f = f.ok_or(format!("n={} fixture {k}: no equivalence", c.n()))?;
            ensure(&apply_automorphism(&f, c).unwrap() == img, format!("n={} fixture {k}: image differs", c.n()))?;
        }
    }
    let oc = build_nr_via_octacode().map_err(|e| e.to_string())?;
    let f = find_equivalence(&fx.extended, &oc).map_err(|e| e.to_string())?.found().ok_or("octacode: none")?;
    ensure(apply_automorphism(&f, &fx.extended).unwrap() == oc, "octacode image differs")?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("40/40 fixtures and the octacode image recovered, {:?}", start.elapsed()))
}

fn c13(fx: &Fixtures) -> Outcome {
    // swap a weight-6 word with a weight-8 word and leave everything else fixed
    let c = &fx.extended;
    let (a, b) = (c.words_of_weight(6)[0], c.words_of_weight(8)[0]);
    let pairs = c
        .words()
        .iter()
        .map(|&x| {
            (
                x,
                if x == a {
                    b
                } else if x == b {
                    a
                } else {
                    x
                },
            )
        })
        .collect();
    let check = verify_isometry(&CodewordBijection::new(pairs).map_err(|e| e.to_string())?);
    let v = check.violation.as_ref().ok_or("weight swap accepted")?;
    ensure(!check.isometry && v.distance != v.image_distance, "witness does not change a distance")?;

    let half = Code::new(16, c.words()[..128].to_vec()).map_err(|e| e.to_string())?;
    ensure(!weak_isometry(c, &half).map_err(|e| e.to_string())?.is_found(), "unequal sizes matched")?;

    // removing one weight-5 word keeps d = 5 but breaks the design
    let broken =
        Code::new(15, fx.punctured.words().iter().copied().filter(|w| *w != fx.punctured.words_of_weight(5)[0]))
            .map_err(|e| e.to_string())?;
    let (pass_f, fail_f, bad_f) = (fx.path("p15.code"), fx.path("broken.code"), fx.path("garbage.code"));
    write_code(&fx.punctured, &pass_f).map_err(|e| e.to_string())?;
    write_code(&broken, &fail_f).map_err(|e| e.to_string())?;
    std::fs::write(&bad_f, "this is not a code\n").unwrap();
    let missing = fx.path("missing.code");
    let matrix: [(&[&str], i32); 8] = [
        (&["verify", "--in", &pass_f, "--suite", "punctured", "--report", &fx.path("r1.json")], 0),
        (&["verify", "--in", &fail_f, "--suite", "punctured", "--report", &fx.path("r2.json")], 1),
        (&["verify", "--in", &bad_f, "--suite", "punctured"], 2),
        (&["verify", "--in", &missing], 2),
        (&["wiso", "--a", &pass_f, "--b", &pass_f], 0),
        (&["wiso", "--a", &pass_f, "--b", &fail_f], 1),
        (&["equiv", "--a", &pass_f, "--b", &fail_f], 1),
        (&["verify", "--in", &pass_f, "--suite", "sideways"], 2),
    ];
    for (args, want) in matrix {
        let got = prepcode(args);
        ensure(got == want, format!("{args:?} exited {got}, expected {want}"))?;
    }
    Ok(format!(
        "swap witness {} <-> {} (distance {} -> {}), 8 exit codes as expected",
        v.x, v.y, v.distance, v.image_distance
    ))
}

fn c14(_: &Fixtures) -> Outcome {
    let start = Instant::now();
    let spec = PreparataSpec::for_length(64).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let members: Vec<BinaryWord> = (0..1000).map(|_| spec.random_member(&mut rng)).collect();
    for w in &members {
        ensure(spec.is_member(w).unwrap(), format!("member {} rejected", w.to_hex()))?;
    }
    for _ in 0..1000 {
        let w = spec.random_even_non_member(&mut rng);
        ensure(w.weight() % 2 == 0, "odd non-member")?;
        ensure(!spec.is_member(&w).unwrap(), format!("non-member {} accepted", w.to_hex()))?;
    }
    let mut min = usize::MAX;
    for (i, x) in members.iter().enumerate() {
        for y in &members[i + 1..] {
            if x != y {
                min = min.min((x.bits() ^ y.bits()).count_ones() as usize);
            }
        }
    }
    ensure(min >= 6, format!("two members at distance {min}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("1000 members accepted, 1000 non-members rejected, min pairwise distance {min}, {:?}", start.elapsed()))
}

fn main() {
    let extended = PreparataSpec::new(3).and_then(|s| s.enumerate()).expect("construction");
    let punctured = reduce(&extended.puncture(16).expect("puncture"));
    let fx = Fixtures { dir: tempfile::tempdir().expect("tempdir"), extended, punctured };
    assert!(Path::new(BIN).exists());

    let criteria: [Criterion; 14] = [
        ("construction", c1),
        ("puncturing", c2),
        ("2-design of weight-5 words", c3),
        ("3-design of weight-6 words", c4),
        ("unique common zero per pair", c5),
        ("structure audit", c6),
        ("counting bounds at n=15", c7),
        ("counting bounds at n=16", c8),
        ("constant-weight maxima", c9),
        ("critical scan", c10),
        ("weak isometries are isometries", c11),
        ("equivalence recovery", c12),
        ("negative controls", c13),
        ("membership at n=64", c14),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f(&fx) {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
