use std::collections::BTreeMap;

use rayon::prelude::*;

use super::Mode;
use crate::code::{BinaryWord, Code, DISTANCE_CAP};
use crate::construct::PreparataSpec;
use crate::error::{input, Result};

/// Anything that can answer "is this word a codeword?".
pub trait MembershipOracle: Sync {
    fn length(&self) -> usize;
    fn is_codeword(&self, w: &BinaryWord) -> bool;
}

impl MembershipOracle for Code {
    fn length(&self) -> usize {
        self.n()
    }

    fn is_codeword(&self, w: &BinaryWord) -> bool {
        self.contains(w)
    }
}

impl MembershipOracle for PreparataSpec {
    fn length(&self) -> usize {
        self.n()
    }

    fn is_codeword(&self, w: &BinaryWord) -> bool {
        self.is_member(w).unwrap_or(false)
    }
}

/// The d-neighbourhood of a codeword `x`, split by weight:
/// `sets[j]` is D(i, j), the codewords of weight `j` at distance `d` from `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborProfile {
    pub x: BinaryWord,
    pub d: usize,
    pub sets: BTreeMap<usize, Vec<BinaryWord>>,
}

impl NeighborProfile {
    fn from_neighbors(x: BinaryWord, d: usize, neighbors: impl IntoIterator<Item = BinaryWord>) -> NeighborProfile {
        let mut sets: BTreeMap<usize, Vec<BinaryWord>> = BTreeMap::new();
        for y in neighbors {
            sets.entry(y.weight()).or_default().push(y);
        }
        for v in sets.values_mut() {
            v.sort_unstable();
        }
        NeighborProfile { x, d, sets }
    }

    /// Weight i of `x`.
    pub fn weight(&self) -> usize {
        self.x.weight()
    }

    /// D(i, j); empty when no neighbour has weight `j`.
    pub fn d_set(&self, j: usize) -> &[BinaryWord] {
        self.sets.get(&j).map_or(&[], Vec::as_slice)
    }

    /// D(i, i - k), empty if `k > i`.
    pub fn down(&self, k: usize) -> &[BinaryWord] {
        self.weight().checked_sub(k).map_or(&[], |j| self.d_set(j))
    }

    /// Total number of d-neighbours, i.e. the MDG degree of `x`.
    pub fn degree(&self) -> usize {
        self.sets.values().map(Vec::len).sum()
    }

    pub fn neighbors(&self) -> impl Iterator<Item = &BinaryWord> {
        self.sets.values().flatten()
    }

    /// The sets A, B, C for the coordinate tuple `coords` (1-based, inside
    /// supp(x), of the mode's tuple size): the members of the three downward
    /// sets with zeros at every coordinate of the tuple.
    pub fn abc(&self, mode: Mode, coords: &[usize]) -> Result<[Vec<BinaryWord>; 3]> {
        if coords.len() != mode.tuple_size() {
            return input(format!(
                "{} mode needs {} coordinates, got {}",
                mode.name(),
                mode.tuple_size(),
                coords.len()
            ));
        }
        let n = self.x.len();
        let mut mask = 0u64;
        for &c in coords {
            if c == 0 || c > n || !self.x.get(c) {
                return input(format!("coordinate {c} is not in supp(x)"));
            }
            mask |= 1 << (n - c);
        }
        if mask.count_ones() as usize != coords.len() {
            return input("repeated coordinate");
        }
        let pick = |k: usize| self.down(k).iter().copied().filter(|y| y.bits() & mask == 0).collect();
        let [a, b, c] = mode.down_steps();
        Ok([pick(a), pick(b), pick(c)])
    }
}

/// Exact neighbour profile of codeword `x`: a full scan of the code when it
/// has at most 10^4 words, generate-and-test through membership otherwise.
pub fn neighbor_profile(c: &Code, x: &BinaryWord) -> Result<NeighborProfile> {
    if !c.contains(x) {
        return input(format!("{} is not a codeword", x.to_hex()));
    }
    let d = c.require_distance()?;
    if c.len() > DISTANCE_CAP {
        return neighbor_profile_with_oracle(c, x, d);
    }
    Ok(NeighborProfile::from_neighbors(*x, d, c.words().iter().copied().filter(|y| x.distance_unchecked(y) == d)))
}

/// Neighbour profile through a membership oracle: every word at distance
/// `d` from `x` is generated and tested. The inside/outside split of each
/// candidate is forced by its weight, so no split is filtered out.
pub fn neighbor_profile_with_oracle<O: MembershipOracle + ?Sized>(
    oracle: &O,
    x: &BinaryWord,
    d: usize,
) -> Result<NeighborProfile> {
    let n = oracle.length();
    if x.len() != n {
        return input(format!("word length {} differs from n = {n}", x.len()));
    }
    if !oracle.is_codeword(x) {
        return input(format!("{} is not a codeword", x.to_hex()));
    }
    if d == 0 || d > n {
        return input(format!("distance {d} outside 1..={n}"));
    }
    // Fix the lowest flipped bit position in parallel, enumerate the rest.
    let found: Vec<BinaryWord> = (0..=n - d)
        .into_par_iter()
        .flat_map_iter(|low| {
            let mut out = Vec::new();
            let mut idx: Vec<usize> = (low + 1..low + d).collect();
            loop {
                let e = idx.iter().fold(1u64 << low, |m, &i| m | 1 << i);
                let y = BinaryWord::new(n, x.bits() ^ e).expect("flip within n bits");
                if oracle.is_codeword(&y) {
                    out.push(y);
                }
                let k = idx.len();
                let mut j = k;
                while j > 0 && idx[j - 1] == n - k + j - 1 {
                    j -= 1;
                }
                if j == 0 {
                    break;
                }
                idx[j - 1] += 1;
                for q in j..k {
                    idx[q] = idx[q - 1] + 1;
                }
            }
            out
        })
        .collect();
    Ok(NeighborProfile::from_neighbors(*x, d, found))
}
