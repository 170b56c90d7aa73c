//! Binary words, codes and their basic invariants.

mod io;
mod word;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{input, Error, Result};

pub use io::{parse_code, read_code, render_code, write_code};
pub(crate) use word::low_mask as word_mask;
pub use word::{hamming_distance, BinaryWord, MAX_LENGTH};

/// Largest code for which the exact all-pairs distance scan runs by default.
pub const DISTANCE_CAP: usize = 10_000;

/// Exact minimum distance over all pairs of distinct words.
///
/// Fails on fewer than two words, on mixed lengths, and when more than
/// `cap` words are supplied.
pub fn min_distance_capped(words: &[BinaryWord], cap: usize) -> Result<usize> {
    if words.len() < 2 {
        return input("minimum distance needs at least two words");
    }
    if words.len() > cap {
        return Err(Error::Capability(format!("{} words exceed the all-pairs cap of {cap}", words.len())));
    }
    let n = words[0].len();
    if words.iter().any(|w| w.len() != n) {
        return input("words of different lengths");
    }
    let d = (0..words.len())
        .into_par_iter()
        .map(|i| words[i + 1..].iter().map(|w| words[i].distance_unchecked(w)).min().unwrap_or(usize::MAX))
        .min()
        .unwrap_or(usize::MAX);
    Ok(d)
}

pub fn min_distance(words: &[BinaryWord]) -> Result<usize> {
    min_distance_capped(words, DISTANCE_CAP)
}

/// Immutable binary code: a set of distinct words of a common length `n`.
///
/// Words are kept in lexicographic order and indexed by value, so the
/// position of a word is a stable vertex id for graphs built on the code.
#[derive(Clone)]
pub struct Code {
    n: usize,
    words: Vec<BinaryWord>,
    index: HashMap<u64, usize>,
    d: Option<usize>,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.words == other.words
    }
}

impl Eq for Code {}

impl std::fmt::Debug for Code {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Code(n={}, M={}, d={:?})", self.n, self.words.len(), self.d)
    }
}

impl Code {
    /// Builds a code, rejecting duplicate words and words of the wrong length.
    pub fn new(n: usize, words: impl IntoIterator<Item = BinaryWord>) -> Result<Code> {
        let mut words: Vec<BinaryWord> = words.into_iter().collect();
        if words.is_empty() {
            return input("a code needs at least one word");
        }
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return input(format!("word {w} has length {}, expected {n}", w.len()));
        }
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return input(format!("duplicate word {}", pair[0].to_hex()));
        }
        Ok(Self::from_sorted_unique(n, words))
    }

    /// Like [`Code::new`] but silently drops duplicates.
    pub fn new_dedup(n: usize, words: impl IntoIterator<Item = BinaryWord>) -> Result<Code> {
        let mut words: Vec<BinaryWord> = words.into_iter().collect();
        words.sort_unstable();
        words.dedup();
        Self::new(n, words)
    }

    fn from_sorted_unique(n: usize, words: Vec<BinaryWord>) -> Code {
        let index = words.iter().enumerate().map(|(i, w)| (w.bits(), i)).collect();
        let d = if words.len() >= 2 && words.len() <= DISTANCE_CAP { min_distance(&words).ok() } else { None };
        Code { n, words, index, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cardinality M.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Codewords in lexicographic order.
    pub fn words(&self) -> &[BinaryWord] {
        &self.words
    }

    /// Minimum distance; `None` for single-word codes or codes above the scan cap.
    pub fn distance(&self) -> Option<usize> {
        self.d
    }

    pub fn require_distance(&self) -> Result<usize> {
        self.d.ok_or_else(|| {
            Error::Input(format!("code distance undefined (M = {}, scan cap {DISTANCE_CAP})", self.len()))
        })
    }

    pub fn contains(&self, w: &BinaryWord) -> bool {
        w.len() == self.n && self.index.contains_key(&w.bits())
    }

    /// Position of `w` in [`Code::words`].
    pub fn index_of(&self, w: &BinaryWord) -> Option<usize> {
        if w.len() != self.n {
            return None;
        }
        self.index.get(&w.bits()).copied()
    }

    /// A code is reduced when it contains the all-zero word.
    pub fn is_reduced(&self) -> bool {
        self.index.contains_key(&0)
    }

    pub fn weight_distribution(&self) -> WeightDistribution {
        let mut counts = vec![0usize; self.n + 1];
        for w in &self.words {
            counts[w.weight()] += 1;
        }
        WeightDistribution { counts }
    }

    /// Codewords of weight exactly `w`.
    pub fn words_of_weight(&self, w: usize) -> Vec<BinaryWord> {
        self.words.iter().copied().filter(|x| x.weight() == w).collect()
    }

    /// `{ w XOR t : w in C }`.
    pub fn translate(&self, t: &BinaryWord) -> Result<Code> {
        if t.len() != self.n {
            return input(format!("translation length {} differs from n = {}", t.len(), self.n));
        }
        Ok(self.map_isometric(|w| w.xor_unchecked(t)))
    }

    fn from_sorted_unique_with(n: usize, words: Vec<BinaryWord>, d: Option<usize>) -> Code {
        let index = words.iter().enumerate().map(|(i, w)| (w.bits(), i)).collect();
        Code { n, words, index, d }
    }

    /// Applies an injective map whose distance behaviour is known to be
    /// isometric, keeping the cached distance.
    pub(crate) fn map_isometric(&self, f: impl Fn(&BinaryWord) -> BinaryWord) -> Code {
        let mut words: Vec<BinaryWord> = self.words.iter().map(f).collect();
        words.sort_unstable();
        Self::from_sorted_unique_with(self.n, words, self.d)
    }

    /// Deletes coordinate `pos` (1-based) from every word.
    pub fn puncture(&self, pos: usize) -> Result<Code> {
        if pos == 0 || pos > self.n {
            return input(format!("coordinate {pos} outside 1..={}", self.n));
        }
        let words = self.words.iter().map(|w| w.delete_coordinate(pos)).collect::<Result<Vec<_>>>()?;
        let mut sorted = words.clone();
        sorted.sort_unstable();
        if let Some(p) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::Structure(format!("deleting coordinate {pos} merges codewords into {}", p[0])));
        }
        Ok(Self::from_sorted_unique(self.n - 1, sorted))
    }
}

/// Number of codewords of each weight 0..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<usize>,
}

impl WeightDistribution {
    pub fn count(&self, weight: usize) -> usize {
        self.counts.get(weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(weight, count)` for every weight with a nonzero count.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w, c))
    }

    pub fn to_map(&self) -> BTreeMap<usize, usize> {
        self.nonzero().collect()
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<_> = self.nonzero().collect();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (w, c) in entries {
            map.serialize_entry(&w.to_string(), &c)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        BinaryWord::from_bit_str(s).unwrap()
    }

    #[test]
    fn trivial_min_distance() {
        let words = [w("00000000"), w("00010000")];
        assert_eq!(min_distance(&words).unwrap(), 1);
        assert!(min_distance(&words[..1]).is_err());
    }

    #[test]
    fn min_distance_respects_cap() {
        let words = [w("00"), w("01"), w("11")];
        assert!(matches!(min_distance_capped(&words, 2), Err(Error::Capability(_))));
    }

    #[test]
    fn rejects_duplicates_and_mixed_lengths() {
        assert!(Code::new(3, [w("001"), w("001")]).is_err());
        assert!(Code::new(3, [w("001"), w("0011")]).is_err());
        assert_eq!(Code::new_dedup(3, [w("001"), w("001"), w("111")]).unwrap().len(), 2);
    }

    #[test]
    fn zero_and_ones_distribution() {
        let n = 9;
        let c = Code::new(n, [BinaryWord::zero(n).unwrap(), BinaryWord::ones(n).unwrap()]).unwrap();
        assert_eq!(c.weight_distribution().to_map(), BTreeMap::from([(0, 1), (9, 1)]));
        assert!(c.is_reduced());
        assert_eq!(c.distance(), Some(9));
    }

    #[test]
    fn translate_by_codeword_reduces() {
        let c = Code::new(4, [w("1100"), w("0011"), w("1111")]).unwrap();
        assert!(!c.is_reduced());
        let t = c.translate(&w("0011")).unwrap();
        assert!(t.is_reduced());
        assert_eq!(t.distance(), c.distance());
        assert_eq!(c.translate(&BinaryWord::zero(4).unwrap()).unwrap(), c);
        assert!(c.translate(&w("001")).is_err());
    }

    #[test]
    fn puncture_trivial_cases() {
        let c = Code::new(4, [w("0000"), w("1111")]).unwrap();
        let p = c.puncture(1).unwrap();
        assert_eq!(p, Code::new(3, [w("000"), w("111")]).unwrap());
        let merging = Code::new(3, [w("000"), w("001")]).unwrap();
        assert!(matches!(merging.puncture(3), Err(Error::Structure(_))));
        assert!(c.puncture(5).is_err());
    }

    #[test]
    fn serializes_weight_distribution_as_map() {
        let c = Code::new(3, [w("000"), w("011"), w("101")]).unwrap();
        let json = serde_json::to_string(&c.weight_distribution()).unwrap();
        assert_eq!(json, r#"{"0":1,"2":2}"#);
    }
}
