//! Constructions of extended Preparata codes and derived codes.
//!
//! Binary length `n = 2^(m+1)` for odd `m`; coordinates `1..=2^m` are indexed
//! by the field elements of GF(2^m) (coordinate `e + 1` for element `e`) and
//! so are coordinates `2^m + 1..=n`. A word is thus a pair of subsets (X, Y)
//! of the field, and it is a codeword iff
//!
//! * `|X|` and `|Y|` are even,
//! * `sum X = sum Y`,
//! * `sum_{x in X} x^3 + (sum X)^3 = sum_{y in Y} y^3`.

mod octacode;

use std::collections::HashMap;

use rand::Rng;

use crate::code::{BinaryWord, Code};
use crate::error::{input, Error, Result};
use crate::gf2m::{Elem, FieldTable};

pub use octacode::{build_nr_via_octacode, hensel_lift, octacode, octacode_generator, QuaternaryWord};

/// Parameters of one member of the Preparata family, together with the
/// field it is built over.
#[derive(Clone, Debug)]
pub struct PreparataSpec {
    field: FieldTable,
}

/// Field sums of one half of a word: parity of the subset size, `sum e` and `sum e^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct HalfSums {
    odd: bool,
    sum: Elem,
    cubes: Elem,
}

impl PreparataSpec {
    /// `m_field` is the odd field degree; the binary length is `2^(m_field+1)`.
    pub fn new(m_field: u32) -> Result<PreparataSpec> {
        Self::check_degree(m_field)?;
        Ok(PreparataSpec { field: FieldTable::with_default_modulus(m_field)? })
    }

    pub fn with_modulus(m_field: u32, modulus: u32) -> Result<PreparataSpec> {
        Self::check_degree(m_field)?;
        Ok(PreparataSpec { field: FieldTable::new(m_field, modulus)? })
    }

    /// Maps a binary length (16 or 64) to the field degree (3 or 5).
    pub fn for_length(n: usize) -> Result<PreparataSpec> {
        match n {
            16 => Self::new(3),
            64 => Self::new(5),
            _ => input(format!("Preparata length must be 16 or 64 (got {n})")),
        }
    }

    fn check_degree(m_field: u32) -> Result<()> {
        if m_field.is_multiple_of(2) {
            return input(format!("field degree must be odd (got {m_field})"));
        }
        if !(3..=5).contains(&m_field) {
            return input(format!("field degree {m_field} outside 3..=5 (word length is capped at 64)"));
        }
        Ok(())
    }

    pub fn m_field(&self) -> u32 {
        self.field.m()
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    /// Number of field elements, i.e. half the binary length.
    fn q(&self) -> usize {
        self.field.size()
    }

    pub fn n(&self) -> usize {
        2 * self.q()
    }

    /// Log2 of the cardinality, `n - 2 m_field - 2`.
    pub fn log2_cardinality(&self) -> usize {
        self.n() - 2 * self.m_field() as usize - 2
    }

    fn half_sums(&self, mut mask: u64) -> HalfSums {
        let mut s = HalfSums { odd: false, sum: 0, cubes: 0 };
        while mask != 0 {
            let e = mask.trailing_zeros() as Elem;
            mask &= mask - 1;
            s.odd = !s.odd;
            s.sum ^= e;
            s.cubes ^= self.field.cube_raw(e);
        }
        s
    }

    /// Splits a word into (X, Y) element masks: bit `e` of X is set iff
    /// coordinate `e + 1` of the word is one.
    fn split(&self, w: &BinaryWord) -> (u64, u64) {
        let q = self.q();
        let (mut x, mut y) = (0u64, 0u64);
        let mut b = w.bits();
        while b != 0 {
            let bit = b.trailing_zeros() as usize;
            b &= b - 1;
            let coord = self.n() - 1 - bit; // 0-based coordinate
            if coord < q {
                x |= 1 << coord;
            } else {
                y |= 1 << (coord - q);
            }
        }
        (x, y)
    }

    fn join(&self, x: u64, y: u64) -> BinaryWord {
        let n = self.n();
        let q = self.q();
        let mut bits = 0u64;
        for e in 0..q {
            if x >> e & 1 == 1 {
                bits |= 1 << (n - 1 - e);
            }
            if y >> e & 1 == 1 {
                bits |= 1 << (n - 1 - q - e);
            }
        }
        BinaryWord::new(n, bits).expect("join stays within n bits")
    }

    fn satisfies(&self, xs: HalfSums, ys: HalfSums) -> bool {
        !xs.odd && !ys.odd && xs.sum == ys.sum && xs.cubes ^ self.field.cube_raw(xs.sum) == ys.cubes
    }

    /// Membership oracle for the (X, Y) characterization.
    pub fn is_member(&self, w: &BinaryWord) -> Result<bool> {
        if w.len() != self.n() {
            return input(format!("word length {} differs from n = {}", w.len(), self.n()));
        }
        let (x, y) = self.split(w);
        Ok(self.satisfies(self.half_sums(x), self.half_sums(y)))
    }

    /// Enumerates every codeword. Only m_field = 3 (256 codewords) is in reach.
    pub fn enumerate(&self) -> Result<Code> {
        if self.m_field() >= 5 {
            return Err(Error::Capability(format!(
                "enumerating 2^{} codewords is out of reach; use membership mode",
                self.log2_cardinality()
            )));
        }
        let subsets = 1u64 << self.q();
        let mut by_sums: HashMap<HalfSums, Vec<u64>> = HashMap::new();
        for y in 0..subsets {
            let s = self.half_sums(y);
            if !s.odd {
                by_sums.entry(s).or_default().push(y);
            }
        }
        let mut words = Vec::with_capacity(1 << self.log2_cardinality());
        for x in 0..subsets {
            let xs = self.half_sums(x);
            if xs.odd {
                continue;
            }
            let want = HalfSums { odd: false, sum: xs.sum, cubes: xs.cubes ^ self.field.cube_raw(xs.sum) };
            for &y in by_sums.get(&want).map(Vec::as_slice).unwrap_or(&[]) {
                words.push(self.join(x, y));
            }
        }
        let code = Code::new(self.n(), words)?;
        if code.len() != 1 << self.log2_cardinality() {
            return Err(Error::Construction(format!(
                "enumerated {} codewords, expected 2^{}",
                code.len(),
                self.log2_cardinality()
            )));
        }
        Ok(code)
    }

    fn random_even_subset<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let q = self.q();
        let mut mask = rng.gen::<u64>() & (crate::code::word_mask(q) & !1);
        if mask.count_ones() % 2 == 1 {
            mask |= 1;
        }
        mask
    }

    /// Draws a codeword: X uniformly among even subsets, Y by rejection
    /// sampling among even subsets until both sum conditions hold.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> BinaryWord {
        let x = self.random_even_subset(rng);
        let xs = self.half_sums(x);
        loop {
            let y = self.random_even_subset(rng);
            if self.satisfies(xs, self.half_sums(y)) {
                return self.join(x, y);
            }
        }
    }

    /// Draws an even-weight word that violates the membership conditions.
    pub fn random_even_non_member<R: Rng + ?Sized>(&self, rng: &mut R) -> BinaryWord {
        let n = self.n();
        loop {
            let mut bits = rng.gen::<u64>() & crate::code::word_mask(n);
            if bits.count_ones() % 2 == 1 {
                bits ^= 1;
            }
            let w = BinaryWord::new(n, bits).expect("masked to n bits");
            if !self.is_member(&w).expect("length matches") {
                return w;
            }
        }
    }
}

/// The length-16 extended Preparata code from the (X, Y) characterization.
pub fn build_extended_preparata(m_field: u32) -> Result<Code> {
    PreparataSpec::new(m_field)?.enumerate()
}

/// Translates a code by its lexicographically smallest codeword, so that the
/// result contains the zero word.
pub fn reduce(c: &Code) -> Code {
    let smallest = c.words()[0];
    c.translate(&smallest).expect("codeword has the code's length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_even_or_large_degrees() {
        assert!(PreparataSpec::new(4).is_err());
        assert!(PreparataSpec::new(7).is_err());
        assert!(PreparataSpec::for_length(32).is_err());
        assert!(matches!(build_extended_preparata(5), Err(Error::Capability(_))));
    }

    #[test]
    fn zero_and_all_ones_are_members() {
        let spec = PreparataSpec::new(3).unwrap();
        assert!(spec.is_member(&BinaryWord::zero(16).unwrap()).unwrap());
        assert!(spec.is_member(&BinaryWord::ones(16).unwrap()).unwrap());
        assert!(spec.is_member(&BinaryWord::zero(15).unwrap()).is_err());
    }

    #[test]
    fn weight_two_words_are_not_members() {
        let spec = PreparataSpec::new(3).unwrap();
        for a in 1..=16 {
            for b in a + 1..=16 {
                let w = BinaryWord::from_support(16, &[a, b]).unwrap();
                assert!(!spec.is_member(&w).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_has_expected_size_and_agrees_with_oracle() {
        let spec = PreparataSpec::new(3).unwrap();
        let code = spec.enumerate().unwrap();
        assert_eq!(code.len(), 256);
        assert_eq!(spec.log2_cardinality(), 8);
        // every one of the 2^16 words is classified identically by both routes
        for bits in 0..1u64 << 16 {
            let w = BinaryWord::new(16, bits).unwrap();
            assert_eq!(spec.is_member(&w).unwrap(), code.contains(&w), "{w}");
        }
    }

    #[test]
    fn other_primitive_polynomial_gives_same_parameters() {
        // x^3 + x^2 + 1
        let other = PreparataSpec::with_modulus(3, 0b1101).unwrap().enumerate().unwrap();
        let default = build_extended_preparata(3).unwrap();
        assert_eq!(other.len(), 256);
        assert_eq!(other.distance(), Some(6));
        assert_eq!(other.weight_distribution(), default.weight_distribution());
    }

    #[test]
    fn random_members_and_non_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [3, 5] {
            let spec = PreparataSpec::new(m).unwrap();
            for _ in 0..50 {
                let w = spec.random_member(&mut rng);
                assert!(spec.is_member(&w).unwrap());
                assert_eq!(w.weight() % 2, 0);
                let v = spec.random_even_non_member(&mut rng);
                assert!(!spec.is_member(&v).unwrap());
                assert_eq!(v.weight() % 2, 0);
            }
        }
    }

    #[test]
    fn reduce_behaviour() {
        let c = build_extended_preparata(3).unwrap();
        assert_eq!(reduce(&c), c);
        let shifted = c.translate(&c.words()[17]).unwrap();
        let r = reduce(&shifted);
        assert!(r.is_reduced());
        assert_eq!((r.n(), r.len(), r.distance()), (16, 256, Some(6)));
        let t = BinaryWord::from_support(16, &[2, 3, 11]).unwrap();
        let off = c.translate(&t).unwrap();
        assert!(!off.is_reduced());
        assert!(reduce(&off).is_reduced());
    }
}
