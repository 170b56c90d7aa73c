//! Weak isometries, isometries and equivalences between codes.
//!
//! A weak isometry is a bijection preserving "distance equals d" in both
//! directions, i.e. an isomorphism of minimal distance graphs. An isometry
//! preserves every distance. An equivalence is a map `x -> pi(x) XOR t` of
//! the whole space carrying one code onto the other.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{BinaryWord, Code};
use crate::error::{input, Error, Result};
use crate::graphs::{build_mdg, canonical_form, find_isomorphism, isomorphism_from_forms, Coloring, Graph};

/// Result of a search that may legitimately come back empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Absent { reason: String },
}

impl<T> Outcome<T> {
    fn absent(reason: impl Into<String>) -> Outcome<T> {
        Outcome::Absent { reason: reason.into() }
    }

    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            Outcome::Absent { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

/// A bijection between two codes, stored as pairs sorted by domain word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordBijection {
    pairs: Vec<(BinaryWord, BinaryWord)>,
}

impl CodewordBijection {
    /// Validates that the pairs form a bijection between two word sets of
    /// uniform lengths.
    pub fn new(mut pairs: Vec<(BinaryWord, BinaryWord)>) -> Result<CodewordBijection> {
        if pairs.is_empty() {
            return input("empty bijection");
        }
        let (n1, n2) = (pairs[0].0.len(), pairs[0].1.len());
        if pairs.iter().any(|(a, b)| a.len() != n1 || b.len() != n2) {
            return input("bijection mixes word lengths");
        }
        pairs.sort_unstable();
        if let Some(p) = pairs.windows(2).find(|p| p[0].0 == p[1].0) {
            return input(format!("word {} mapped twice", p[0].0.to_hex()));
        }
        let mut images: Vec<BinaryWord> = pairs.iter().map(|p| p.1).collect();
        images.sort_unstable();
        if let Some(p) = images.windows(2).find(|p| p[0] == p[1]) {
            return input(format!("word {} is the image of two words", p[0].to_hex()));
        }
        Ok(CodewordBijection { pairs })
    }

    pub fn identity(c: &Code) -> CodewordBijection {
        CodewordBijection { pairs: c.words().iter().map(|&w| (w, w)).collect() }
    }

    pub fn pairs(&self) -> &[(BinaryWord, BinaryWord)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, x: &BinaryWord) -> Option<BinaryWord> {
        self.pairs.binary_search_by(|p| p.0.cmp(x)).ok().map(|i| self.pairs[i].1)
    }

    pub fn domain(&self) -> Result<Code> {
        Code::new(self.pairs[0].0.len(), self.pairs.iter().map(|p| p.0))
    }

    pub fn range(&self) -> Result<Code> {
        Code::new(self.pairs[0].1.len(), self.pairs.iter().map(|p| p.1))
    }

    /// Checks that the map goes from exactly `c1` onto exactly `c2`.
    pub fn check_codes(&self, c1: &Code, c2: &Code) -> Result<()> {
        if self.domain()? != *c1 {
            return input("bijection domain differs from the first code");
        }
        if self.range()? != *c2 {
            return input("bijection range differs from the second code");
        }
        Ok(())
    }

    /// JSON list of `[hexword, hexword]` pairs.
    pub fn to_json(&self) -> String {
        let list: Vec<[String; 2]> = self.pairs.iter().map(|(a, b)| [a.to_hex(), b.to_hex()]).collect();
        serde_json::to_string_pretty(&list).expect("string pairs serialise")
    }

    pub fn from_json(text: &str, n1: usize, n2: usize) -> Result<CodewordBijection> {
        let list: Vec<[String; 2]> = serde_json::from_str(text)?;
        let pairs = list
            .iter()
            .map(|[a, b]| Ok((BinaryWord::from_hex(a, n1)?, BinaryWord::from_hex(b, n2)?)))
            .collect::<Result<Vec<_>>>()?;
        CodewordBijection::new(pairs)
    }
}

/// First pair whose distance changes under a bijection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryViolation {
    pub x: String,
    pub y: String,
    pub distance: usize,
    pub image_x: String,
    pub image_y: String,
    pub image_distance: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryCheck {
    pub isometry: bool,
    pub pairs_checked: usize,
    pub violation: Option<IsometryViolation>,
}

/// Compares all M(M-1)/2 distances before and after the map; stops at the
/// first pair (in domain order) whose distance changes.
pub fn verify_isometry(j: &CodewordBijection) -> IsometryCheck {
    let p = j.pairs();
    let mut checked = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            checked += 1;
            let before = p[a].0.distance_unchecked(&p[b].0);
            let after = p[a].1.distance_unchecked(&p[b].1);
            if before != after {
                return IsometryCheck {
                    isometry: false,
                    pairs_checked: checked,
                    violation: Some(IsometryViolation {
                        x: p[a].0.to_hex(),
                        y: p[b].0.to_hex(),
                        distance: before,
                        image_x: p[a].1.to_hex(),
                        image_y: p[b].1.to_hex(),
                        image_distance: after,
                    }),
                };
            }
        }
    }
    IsometryCheck { isometry: true, pairs_checked: checked, violation: None }
}

/// Weak isometry from `c1` onto `c2` via minimal distance graph isomorphism.
/// Any returned map has been re-checked to preserve d-adjacency both ways.
pub fn weak_isometry(c1: &Code, c2: &Code) -> Result<Outcome<CodewordBijection>> {
    if c1.len() != c2.len() {
        return Ok(Outcome::absent(format!("cardinalities differ: {} vs {}", c1.len(), c2.len())));
    }
    let (d1, d2) = (c1.require_distance()?, c2.require_distance()?);
    if d1 != d2 {
        return Ok(Outcome::absent(format!("minimum distances differ: {d1} vs {d2}")));
    }
    let (g1, g2) = (build_mdg(c1)?, build_mdg(c2)?);
    let Some(iso) = find_isomorphism(&g1.graph, &g2.graph)? else {
        return Ok(Outcome::absent("minimal distance graphs are not isomorphic"));
    };
    let pairs: Vec<(BinaryWord, BinaryWord)> =
        g1.words.iter().enumerate().map(|(v, &w)| (w, g2.words[iso.map[v]])).collect();
    let j = CodewordBijection::new(pairs)?;
    let p = j.pairs();
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            let before = p[a].0.distance_unchecked(&p[b].0) == d1;
            let after = p[a].1.distance_unchecked(&p[b].1) == d1;
            if before != after {
                return Err(Error::Structure(format!(
                    "graph isomorphism does not preserve d-adjacency at ({}, {})",
                    p[a].0.to_hex(),
                    p[b].0.to_hex()
                )));
            }
        }
    }
    Ok(Outcome::Found(j))
}

/// `x -> pi(x) XOR t`, where `pi` sends coordinate `i` to `perm[i]` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceAutomorphism {
    perm: Vec<usize>,
    t: BinaryWord,
}

#[derive(Serialize, Deserialize)]
struct AutomorphismJson {
    perm: Vec<usize>,
    t: String,
}

impl SpaceAutomorphism {
    pub fn new(perm: Vec<usize>, t: BinaryWord) -> Result<SpaceAutomorphism> {
        let n = perm.len();
        if t.len() != n {
            return input(format!("translation length {} differs from permutation length {n}", t.len()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return input(format!("{perm:?} is not a permutation of 0..{n}"));
            }
        }
        Ok(SpaceAutomorphism { perm, t })
    }

    pub fn identity(n: usize) -> Result<SpaceAutomorphism> {
        SpaceAutomorphism::new((0..n).collect(), BinaryWord::zero(n)?)
    }

    /// Uniform random permutation and translation.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SpaceAutomorphism> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let bits = rng.gen::<u64>() & crate::code::word_mask(n);
        SpaceAutomorphism::new(perm, BinaryWord::new(n, bits)?)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// 0-based coordinate images.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn translation(&self) -> BinaryWord {
        self.t
    }

    pub fn apply(&self, x: &BinaryWord) -> Result<BinaryWord> {
        if x.len() != self.n() {
            return input(format!("word length {} differs from n = {}", x.len(), self.n()));
        }
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &BinaryWord) -> BinaryWord {
        x.permute_unchecked(&self.perm).xor_unchecked(&self.t)
    }

    /// `y -> pi^-1(y) XOR pi^-1(t)`.
    pub fn inverse(&self) -> SpaceAutomorphism {
        let mut inv = vec![0; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        let t = self.t.permute_unchecked(&inv);
        SpaceAutomorphism { perm: inv, t }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &SpaceAutomorphism) -> SpaceAutomorphism {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        SpaceAutomorphism { perm, t: self.apply_unchecked(&other.t) }
    }

    /// JSON `{perm: [images of 1..n], t: hexword}`.
    pub fn to_json(&self) -> String {
        let j = AutomorphismJson { perm: self.perm.iter().map(|p| p + 1).collect(), t: self.t.to_hex() };
        serde_json::to_string_pretty(&j).expect("plain struct serialises")
    }

    pub fn from_json(text: &str) -> Result<SpaceAutomorphism> {
        let j: AutomorphismJson = serde_json::from_str(text)?;
        let n = j.perm.len();
        if j.perm.contains(&0) {
            return input("permutation images are 1-based");
        }
        SpaceAutomorphism::new(j.perm.iter().map(|p| p - 1).collect(), BinaryWord::from_hex(&j.t, n)?)
    }
}

/// `{ pi(x) XOR t : x in c }`.
pub fn apply_automorphism(f: &SpaceAutomorphism, c: &Code) -> Result<Code> {
    if f.n() != c.n() {
        return input(format!("automorphism length {} differs from code length {}", f.n(), c.n()));
    }
    Ok(c.map_isometric(|x| f.apply_unchecked(x)))
}

/// Codeword-coordinate incidence graph: vertices `0..M` are codewords
/// (coloured 1 + weight), `M..M+n` are coordinates (colour 0).
fn incidence(c: &Code) -> Result<(Graph, Coloring)> {
    let (m, n) = (c.len(), c.n());
    let edges = c.words().iter().enumerate().flat_map(|(v, w)| w.support().into_iter().map(move |i| (v, m + i - 1)));
    let g = Graph::from_edges(m + n, edges)?;
    let mut colors: Vec<u32> = c.words().iter().map(|w| 1 + w.weight() as u32).collect();
    colors.extend(std::iter::repeat_n(0, n));
    Ok((g, Coloring::new(colors)))
}

/// Space automorphism `F` with `F(c1) = c2`, found by canonical labelling of
/// incidence graphs. For each codeword `y` of `c1` in lexicographic order,
/// `c1 + y` is compared up to coordinate permutation with `c2 + s`, `s` the
/// smallest codeword of `c2`; a match `pi(c1 + y) = c2 + s` gives
/// `F(x) = pi(x) XOR pi(y) XOR s`. The result is verified by set equality.
pub fn find_equivalence(c1: &Code, c2: &Code) -> Result<Outcome<SpaceAutomorphism>> {
    if c1.n() != c2.n() {
        return Ok(Outcome::absent(format!("lengths differ: {} vs {}", c1.n(), c2.n())));
    }
    if c1.len() != c2.len() {
        return Ok(Outcome::absent(format!("cardinalities differ: {} vs {}", c1.len(), c2.len())));
    }
    if c1.distance() != c2.distance() {
        return Ok(Outcome::absent(format!("minimum distances differ: {:?} vs {:?}", c1.distance(), c2.distance())));
    }
    let n = c1.n();
    let s = c2.words()[0];
    let target = c2.translate(&s)?;
    let target_wd = target.weight_distribution();
    let (tg, tc) = incidence(&target)?;
    let target_form = canonical_form(&tg, &tc)?;
    let m = c1.len();

    let attempt = |y: &BinaryWord| -> Result<Option<SpaceAutomorphism>> {
        let shifted = c1.translate(y)?;
        if shifted.weight_distribution() != target_wd {
            return Ok(None);
        }
        let (g, col) = incidence(&shifted)?;
        let form = canonical_form(&g, &col)?;
        let Some(iso) = isomorphism_from_forms(&form, &target_form) else {
            return Ok(None);
        };
        let perm: Vec<usize> = (0..n).map(|i| iso.map[m + i] - m).collect();
        let pi = SpaceAutomorphism::new(perm, BinaryWord::zero(n)?)?;
        let t = pi.apply_unchecked(y).xor_unchecked(&s);
        let f = SpaceAutomorphism::new(pi.perm, t)?;
        Ok((apply_automorphism(&f, c1)? == *c2).then_some(f))
    };

    let hit = c1.words().par_iter().map(attempt).find_map_first(|r| match r {
        Ok(None) => None,
        other => Some(other),
    });
    match hit {
        Some(Ok(Some(f))) => Ok(Outcome::Found(f)),
        Some(Err(e)) => Err(e),
        _ => Ok(Outcome::absent("no coordinate permutation and translation maps the first code onto the second")),
    }
}
