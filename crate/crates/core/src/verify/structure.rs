use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{binom, neighbor_profile, subsets, CheckReport, Mode, NeighborProfile, MAX_WITNESSES};
use crate::code::{BinaryWord, Code};
use crate::error::{input, Result};

fn coords_of(mask: u64, n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| n - b).collect();
    out.sort_unstable();
    out
}

fn require(c: &Code, mode: Mode) -> Result<()> {
    let d = c.require_distance()?;
    if d != mode.distance() {
        return input(format!("{} suite needs d = {}, code has d = {d}", mode.name(), mode.distance()));
    }
    if !c.is_reduced() {
        return input("code is not reduced (missing the zero word)");
    }
    Ok(())
}

/// Bounded witness collector used by the per-codeword workers.
#[derive(Default)]
struct Findings {
    witnesses: Vec<Value>,
    count: usize,
}

impl Findings {
    fn push(&mut self, w: impl FnOnce() -> Value) {
        self.count += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w());
        }
    }
}

/// Pairwise audit of the d-neighbours of `x`: two distinct neighbours `u`,
/// `v` with zeros on a common tuple of `mode.tuple_size()` coordinates of
/// supp(x) may not share a further zero inside supp(x), nor a one outside it.
/// Returns the witnesses (capped) and the number of offending pairs.
pub fn audit_disjointness(x: &BinaryWord, neighbors: &[BinaryWord], mode: Mode) -> (Vec<Value>, usize) {
    let n = x.len();
    let t = mode.tuple_size() as u32;
    let xs = x.bits();
    let mut f = Findings::default();
    for (a, u) in neighbors.iter().enumerate() {
        for v in &neighbors[a + 1..] {
            let zeros = xs & !u.bits() & !v.bits();
            let ones = u.bits() & v.bits() & !xs;
            let (z, o) = (zeros.count_ones(), ones.count_ones());
            if z >= t && z + o > t {
                f.push(|| {
                    json!({
                        "kind": "disjointness",
                        "x": x.to_hex(),
                        "u": u.to_hex(),
                        "v": v.to_hex(),
                        "shared_zeros_in_support": coords_of(zeros, n),
                        "shared_ones_outside": coords_of(ones, n),
                    })
                });
            }
        }
    }
    (f.witnesses, f.count)
}

/// Split of each downward neighbour: members of D(i, i-k) have
/// exactly (d+k)/2 zeros inside supp(x) and (d-k)/2 ones outside.
fn audit_split(p: &NeighborProfile, mode: Mode, f: &mut Findings) -> usize {
    let d = mode.distance();
    let xs = p.x.bits();
    let mut checked = 0;
    for k in mode.down_steps() {
        for y in p.down(k) {
            checked += 1;
            let zeros_in = (xs & !y.bits()).count_ones() as usize;
            let ones_out = (y.bits() & !xs).count_ones() as usize;
            if zeros_in != (d + k) / 2 || ones_out != (d - k) / 2 {
                f.push(|| {
                    json!({
                        "kind": "split",
                        "x": p.x.to_hex(),
                        "y": y.to_hex(),
                        "k": k,
                        "zeros_inside": zeros_in,
                        "ones_outside": ones_out,
                        "expected": [(d + k) / 2, (d - k) / 2],
                    })
                });
            }
        }
    }
    checked
}

/// Per-tuple inequality i-t-1 <= |A| + 2|B| + 3|C| <= i-t for every tuple
/// of t coordinates of supp(x).
fn audit_tuples(p: &NeighborProfile, mode: Mode, f: &mut Findings) -> usize {
    let i = p.weight();
    let t = mode.tuple_size();
    if i < t {
        return 0;
    }
    let n = p.x.len();
    let support: Vec<u32> = (0..n as u32).filter(|&b| p.x.bits() >> b & 1 == 1).collect();
    let downs: Vec<&[BinaryWord]> = mode.down_steps().iter().map(|&k| p.down(k)).collect();
    let tuples = subsets(support.len(), t);
    for &sel in &tuples {
        let mask = (0..support.len()).filter(|j| sel >> j & 1 == 1).fold(0u64, |m, j| m | 1 << support[j]);
        let s: usize = downs
            .iter()
            .enumerate()
            .map(|(w, set)| (w + 1) * set.iter().filter(|y| y.bits() & mask == 0).count())
            .sum();
        if s + t + 1 < i || s + t > i {
            f.push(|| {
                json!({
                    "kind": "tuple_inequality",
                    "x": p.x.to_hex(),
                    "coords": coords_of(mask, n),
                    "value": s,
                    "bounds": [i as i64 - t as i64 - 1, i as i64 - t as i64],
                })
            });
        }
    }
    tuples.len()
}

/// Exhaustive structural audit over every codeword: the inside/outside split
/// of downward neighbours, pairwise disjointness over all d-neighbours and
/// the per-tuple inequalities.
pub fn check_structure(c: &Code, mode: Mode) -> Result<CheckReport> {
    let start = Instant::now();
    require(c, mode)?;
    let per_word: Vec<Result<(Findings, [usize; 3])>> = c
        .words()
        .par_iter()
        .map(|x| {
            let p = neighbor_profile(c, x)?;
            let mut f = Findings::default();
            let split = audit_split(&p, mode, &mut f);
            let neighbors: Vec<BinaryWord> = p.neighbors().copied().collect();
            let (w, count) = audit_disjointness(x, &neighbors, mode);
            f.count += count;
            f.witnesses.extend(w);
            f.witnesses.truncate(MAX_WITNESSES);
            let pairs = neighbors.len() * neighbors.len().saturating_sub(1) / 2;
            let tuples = audit_tuples(&p, mode, &mut f);
            Ok((f, [split, pairs, tuples]))
        })
        .collect();
    let mut report = CheckReport::new("structure")
        .param("mode", mode.name())
        .param("n", c.n())
        .param("M", c.len())
        .param("d", mode.distance());
    let mut totals = [0usize; 3];
    for r in per_word {
        let (f, counts) = r?;
        report.absorb(f.witnesses, f.count);
        for (t, c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    report.counts = Some(json!({
        "codewords": c.len(),
        "split_checked": totals[0],
        "neighbor_pairs_checked": totals[1],
        "tuples_checked": totals[2],
    }));
    Ok(report.timed(start))
}

/// Coefficient of |D(i, i-k)| in the summed counting inequality:
/// C((d+k)/2, t) * ((d+k)/2 - t).
fn multiplier(mode: Mode, k: usize) -> u64 {
    let zeros = ((mode.distance() + k) / 2) as u64;
    let t = mode.tuple_size() as u64;
    binom(zeros, t) * (zeros - t)
}

fn check_counting(c: &Code, mode: Mode) -> Result<CheckReport> {
    let start = Instant::now();
    require(c, mode)?;
    let t = mode.tuple_size() as u64;
    let steps = mode.down_steps();
    let mults: Vec<u64> = steps.iter().map(|&k| multiplier(mode, k)).collect();
    let values: Vec<(usize, u64)> = c
        .words()
        .par_iter()
        .filter(|x| !x.is_zero())
        .map(|x| {
            let p = neighbor_profile(c, x)?;
            let v = steps.iter().zip(&mults).map(|(&k, &m)| m * p.down(k).len() as u64).sum();
            Ok((p.weight(), v))
        })
        .collect::<Result<_>>()?;
    let name = match mode {
        Mode::Punctured => "counting_punctured",
        Mode::Extended => "counting_extended",
    };
    let mut report = CheckReport::new(name)
        .param("mode", mode.name())
        .param("n", c.n())
        .param("M", c.len())
        .param("coefficients", mults.clone())
        .param("skipped_zero_weight", 1);
    let mut per_weight: BTreeMap<usize, (u64, u64, u64, u64, usize, usize)> = BTreeMap::new();
    let nonzero: Vec<&BinaryWord> = c.words().iter().filter(|x| !x.is_zero()).collect();
    for (x, &(i, v)) in nonzero.iter().zip(&values) {
        let ci = binom(i as u64, t);
        let lower = (i as u64).saturating_sub(t + 1) * ci;
        let upper = (i as u64).saturating_sub(t) * ci;
        let e = per_weight.entry(i).or_insert((lower, upper, u64::MAX, 0, 0, 0));
        e.2 = e.2.min(v);
        e.3 = e.3.max(v);
        e.4 += 1;
        if v == upper {
            e.5 += 1;
        }
        if v < lower || v > upper {
            report.violation(json!({
                "x": x.to_hex(),
                "weight": i,
                "value": v,
                "lower": lower,
                "upper": upper,
            }));
        }
    }
    let bounds: serde_json::Map<String, Value> = per_weight
        .into_iter()
        .map(|(i, (lo, up, min, max, count, tight))| {
            (
                i.to_string(),
                json!({
                    "lower": lo,
                    "upper": up,
                    "min_value": min,
                    "max_value": max,
                    "min_slack_lower": min - lo.min(min),
                    "min_slack_upper": up - max.min(up),
                    "codewords": count,
                    "attaining_upper": tight,
                }),
            )
        })
        .collect();
    report.bounds = Some(Value::Object(bounds));
    Ok(report.timed(start))
}

/// (i-3) C(i,2) <= 3|D(i,i-1)| + 12|D(i,i-3)| + 30|D(i,i-5)| <= (i-2) C(i,2)
/// for every nonzero codeword of a reduced code with d = 5.
pub fn check_counting_punctured(c: &Code) -> Result<CheckReport> {
    check_counting(c, Mode::Punctured)
}

/// C(i,3) (i-4) <= 4|D(i,i-2)| + 20|D(i,i-4)| + 60|D(i,i-6)| <= C(i,3) (i-3)
/// for every nonzero codeword of a reduced code with d = 6.
pub fn check_counting_extended(c: &Code) -> Result<CheckReport> {
    check_counting(c, Mode::Extended)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        BinaryWord::from_bit_str(s).unwrap()
    }

    #[test]
    fn multipliers() {
        let p: Vec<u64> = Mode::Punctured.down_steps().iter().map(|&k| multiplier(Mode::Punctured, k)).collect();
        let e: Vec<u64> = Mode::Extended.down_steps().iter().map(|&k| multiplier(Mode::Extended, k)).collect();
        assert_eq!(p, vec![3, 12, 30]);
        assert_eq!(e, vec![4, 20, 60]);
    }

    #[test]
    fn synthetic_disjointness_violation() {
        let x = w("1111100000");
        let u = w("0001111000");
        let v = w("0001100110");
        // x+u and x+v are weight-5 words at distance 4
        assert_eq!(x.xor(&u).unwrap().distance_unchecked(&x.xor(&v).unwrap()), 4);
        let (wit, count) = audit_disjointness(&x, &[u, v], Mode::Punctured);
        assert_eq!(count, 1);
        assert_eq!(wit[0]["shared_zeros_in_support"], json!([1, 2, 3]));
        let ok = w("0010100110");
        assert_eq!(audit_disjointness(&x, &[u, ok], Mode::Punctured).1, 0);
    }

    #[test]
    fn wrong_distance_is_input_error() {
        let c = Code::new(4, [w("0000"), w("1111")]).unwrap();
        assert!(check_structure(&c, Mode::Punctured).is_err());
        assert!(check_counting_extended(&c).is_err());
    }
}
