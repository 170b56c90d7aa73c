use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::json;

use super::{subsets, CheckReport};
use crate::code::Code;
use crate::error::{input, Result};

fn ratio(num: i64, den: i64) -> String {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(num, den).max(1);
    let (p, q) = (num / g, den / g);
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

/// Validates 1-based blocks and packs them as masks (bit c-1 for coordinate c).
fn block_masks(blocks: &[Vec<usize>], n: usize, k: Option<usize>) -> Result<Vec<u64>> {
    if n == 0 || n > 64 {
        return input(format!("point count {n} outside 1..=64"));
    }
    blocks
        .iter()
        .map(|b| {
            let mut m = 0u64;
            for &c in b {
                if c == 0 || c > n {
                    return input(format!("block {b:?} has point {c} outside 1..={n}"));
                }
                m |= 1 << (c - 1);
            }
            if m.count_ones() as usize != b.len() {
                return input(format!("block {b:?} repeats a point"));
            }
            if let Some(k) = k {
                if b.len() != k {
                    return input(format!("block {b:?} has size {}, expected {k}", b.len()));
                }
            }
            Ok(m)
        })
        .collect()
}

fn points(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Closed-form λ values to compare against, keyed by their expression.
fn expected_lambdas(n: usize, t: usize, k: usize) -> BTreeMap<String, String> {
    let n = n as i64;
    match (t, k) {
        (2, 5) => BTreeMap::from([("(n-3)/3".to_string(), ratio(n - 3, 3)), ("(n-3)/4".to_string(), ratio(n - 3, 4))]),
        (3, 6) => BTreeMap::from([("(n-4)/3".to_string(), ratio(n - 4, 3))]),
        _ => BTreeMap::new(),
    }
}

/// Counts, for every `t`-subset of `1..=n`, the blocks containing it; passes
/// iff the count is one constant λ.
pub fn check_design(blocks: &[Vec<usize>], n: usize, t: usize, k: usize) -> Result<CheckReport> {
    let start = Instant::now();
    if t > k || k > n {
        return input(format!("need t <= k <= n, got t={t}, k={k}, n={n}"));
    }
    let masks = block_masks(blocks, n, Some(k))?;
    let counts: Vec<(u64, usize)> =
        subsets(n, t).into_iter().map(|s| (s, masks.iter().filter(|&&b| b & s == s).count())).collect();
    let mut report = CheckReport::new("design").param("n", n).param("t", t).param("k", k).param("blocks", blocks.len());
    let reference = counts[0].1;
    for &(s, c) in &counts {
        if c != reference {
            report.violation(json!({ "subset": points(s), "count": c, "first_count": reference }));
        }
    }
    let min = counts.iter().map(|c| c.1).min().unwrap_or(0);
    let max = counts.iter().map(|c| c.1).max().unwrap_or(0);
    let empirical = report.pass.then_some(reference);
    let expected = expected_lambdas(n, t, k);
    let matches: Vec<&String> =
        expected.iter().filter(|(_, v)| empirical.is_some_and(|l| **v == l.to_string())).map(|(e, _)| e).collect();
    report.lambda = Some(json!({
        "empirical": empirical,
        "min": min,
        "max": max,
        "expected": expected,
        "matches": matches,
    }));
    report.counts = Some(json!({ "subsets": counts.len() }));
    Ok(report.timed(start))
}

/// For every pair (r, s) of `1..=n`, the coordinates outside {r, s} that are
/// zero in every block through both r and s; passes iff there is exactly one
/// such coordinate for every pair.
pub fn corollary1_on_blocks(blocks: &[Vec<usize>], n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let masks = block_masks(blocks, n, None)?;
    let all = crate::code::word_mask(n);
    let mut report = CheckReport::new("corollary1").param("n", n).param("blocks", blocks.len());
    let mut through_hist: BTreeMap<String, usize> = BTreeMap::new();
    let pairs = subsets(n, 2);
    for &rs in &pairs {
        let through: Vec<u64> = masks.iter().copied().filter(|&b| b & rs == rs).collect();
        *through_hist.entry(through.len().to_string()).or_default() += 1;
        let covered = through.iter().fold(rs, |u, &b| u | b);
        let zeros = all & !covered;
        if zeros.count_ones() != 1 {
            let rs_pts = points(rs);
            report.violation(json!({
                "r": rs_pts[0],
                "s": rs_pts[1],
                "blocks_through": through.iter().map(|&b| points(b)).collect::<Vec<_>>(),
                "common_zeros": points(zeros),
            }));
        }
    }
    report.counts = Some(json!({ "pairs": pairs.len(), "blocks_through_pair": through_hist }));
    Ok(report.timed(start))
}

/// [`corollary1_on_blocks`] on the supports of the minimum-weight codewords
/// of a reduced code.
pub fn check_corollary1(c: &Code) -> Result<CheckReport> {
    if !c.is_reduced() {
        return input("code is not reduced (missing the zero word)");
    }
    let d = c.require_distance()?;
    let blocks: Vec<Vec<usize>> = c.words_of_weight(d).iter().map(|w| w.support()).collect();
    if blocks.is_empty() {
        return input(format!("no codewords of minimum weight {d}"));
    }
    Ok(corollary1_on_blocks(&blocks, c.n())?.param("min_weight", d))
}

/// Supports of the weight-`k` codewords, as 1-based blocks.
pub fn blocks_of_weight(c: &Code, k: usize) -> Vec<Vec<usize>> {
    c.words_of_weight(k).iter().map(|w| w.support()).collect()
}
