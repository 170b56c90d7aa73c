use std::fmt;

use crate::error::{input, Error, Result};

/// Longest word the fixed-width representation can hold.
pub const MAX_LENGTH: usize = 64;

/// A binary word of length 1..=64.
///
/// Coordinates are numbered from 1. Coordinate 1 is stored in the most
/// significant of the `len` used bits, so the numeric order of `bits`
/// coincides with the lexicographic order of the words read left to right.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    len: u8,
    bits: u64,
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl BinaryWord {
    /// Builds a word from its packed value, coordinate 1 being bit `len - 1`.
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > MAX_LENGTH {
            return input(format!("word length {len} outside 1..={MAX_LENGTH}"));
        }
        if bits & !low_mask(len) != 0 {
            return input(format!("value {bits:#x} does not fit in {len} bits"));
        }
        Ok(BinaryWord { len: len as u8, bits })
    }

    pub(crate) fn from_raw(len: usize, bits: u64) -> Self {
        debug_assert!((1..=MAX_LENGTH).contains(&len) && bits & !low_mask(len) == 0);
        BinaryWord { len: len as u8, bits }
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::new(len, low_mask(len))
    }

    /// Word whose support is the given set of 1-based coordinates.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut w = Self::zero(len)?;
        for &i in support {
            if i == 0 || i > len {
                return input(format!("coordinate {i} outside 1..={len}"));
            }
            w.bits |= w.coord_mask(i);
        }
        Ok(w)
    }

    /// Parses a string of `0`/`1` characters, coordinate 1 first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut len = 0;
        for ch in s.chars() {
            bits = match ch {
                '0' => bits << 1,
                '1' => (bits << 1) | 1,
                _ => return input(format!("invalid bit character {ch:?}")),
            };
            len += 1;
            if len > MAX_LENGTH {
                return input(format!("word longer than {MAX_LENGTH}"));
            }
        }
        Self::new(len, bits)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Packed value; see the type-level docs for the bit order.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    fn coord_mask(&self, i: usize) -> u64 {
        1u64 << (self.len() - i)
    }

    /// Value of coordinate `i` (1-based). Panics if `i` is out of range.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len(), "coordinate {i} out of range");
        self.bits & self.coord_mask(i) != 0
    }

    /// Copy of the word with coordinate `i` flipped.
    pub fn flipped(&self, i: usize) -> Self {
        assert!(i >= 1 && i <= self.len(), "coordinate {i} out of range");
        BinaryWord { len: self.len, bits: self.bits ^ self.coord_mask(i) }
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Sorted 1-based coordinates holding a one.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.get(i)).collect()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn xor(&self, other: &BinaryWord) -> Result<BinaryWord> {
        self.check_len(other)?;
        Ok(BinaryWord { len: self.len, bits: self.bits ^ other.bits })
    }

    #[inline]
    pub(crate) fn xor_unchecked(&self, other: &BinaryWord) -> BinaryWord {
        debug_assert_eq!(self.len, other.len);
        BinaryWord { len: self.len, bits: self.bits ^ other.bits }
    }

    #[inline]
    pub(crate) fn distance_unchecked(&self, other: &BinaryWord) -> usize {
        (self.bits ^ other.bits).count_ones() as usize
    }

    fn check_len(&self, other: &BinaryWord) -> Result<()> {
        if self.len != other.len {
            return input(format!("length mismatch: {} vs {}", self.len, other.len));
        }
        Ok(())
    }

    /// Deletes coordinate `pos` (1-based), shortening the word by one.
    pub fn delete_coordinate(&self, pos: usize) -> Result<BinaryWord> {
        let n = self.len();
        if pos == 0 || pos > n {
            return input(format!("coordinate {pos} outside 1..={n}"));
        }
        if n == 1 {
            return input("cannot delete the only coordinate");
        }
        let tail = n - pos; // coordinates pos+1..=n
        let low = self.bits & low_mask(tail);
        let high = if tail + 1 >= 64 { 0 } else { self.bits >> (tail + 1) };
        Ok(BinaryWord::from_raw(n - 1, (high << tail) | low))
    }

    /// Applies a coordinate permutation: coordinate `i` (0-based) moves to `perm[i]`.
    pub(crate) fn permute_unchecked(&self, perm: &[usize]) -> BinaryWord {
        let n = self.len();
        let mut out = 0u64;
        let mut b = self.bits;
        while b != 0 {
            let bit = b.trailing_zeros() as usize;
            b &= b - 1;
            let coord = n - 1 - bit;
            out |= 1u64 << (n - 1 - perm[coord]);
        }
        BinaryWord::from_raw(n, out)
    }

    /// Number of hex digits used by the file format for length `n`.
    pub fn hex_width(n: usize) -> usize {
        n.div_ceil(4)
    }

    /// Uppercase hex, coordinate 1 in the most significant bit of the first
    /// nibble, zero padding bits at the end.
    pub fn to_hex(&self) -> String {
        let width = Self::hex_width(self.len());
        let pad = 4 * width - self.len();
        let value = (self.bits as u128) << pad;
        format!("{value:0width$X}")
    }

    /// Inverse of [`BinaryWord::to_hex`]. Accepts either letter case.
    pub fn from_hex(s: &str, n: usize) -> Result<BinaryWord> {
        if n == 0 || n > MAX_LENGTH {
            return input(format!("word length {n} outside 1..={MAX_LENGTH}"));
        }
        let width = Self::hex_width(n);
        if s.len() != width {
            return input(format!("hex word {s:?} has {} digits, expected {width}", s.len()));
        }
        let mut value: u128 = 0;
        for ch in s.chars() {
            let digit = ch.to_digit(16).ok_or_else(|| Error::Input(format!("invalid hex digit {ch:?} in {s:?}")))?;
            value = (value << 4) | digit as u128;
        }
        let pad = 4 * width - n;
        if value & ((1u128 << pad) - 1) != 0 {
            return input(format!("hex word {s:?} has nonzero padding bits"));
        }
        BinaryWord::new(n, (value >> pad) as u64)
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({})", self)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Hamming distance: number of coordinates where the words differ.
pub fn hamming_distance(a: &BinaryWord, b: &BinaryWord) -> Result<usize> {
    a.check_len(b)?;
    Ok(a.distance_unchecked(b))
}
