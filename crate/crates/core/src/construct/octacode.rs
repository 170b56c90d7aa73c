//! Nordstrom–Robinson code as the Gray image of the Z4 octacode.
//!
//! The octacode is the extended cyclic Z4 code of length 7 generated by the
//! Hensel lift of the binary Hamming generator `x^3 + x + 1`, with a parity
//! digit appended so that every codeword's digits sum to 0 mod 4.

use super::build_extended_preparata;
use crate::code::{BinaryWord, Code};
use crate::error::{input, Error, Result};

/// Coefficients of the binary Hamming generator `x^3 + x + 1`, lowest degree first.
const HAMMING_GENERATOR: [u8; 4] = [1, 1, 0, 1];
const CYCLIC_LENGTH: usize = 7;
const OCTACODE_LENGTH: usize = CYCLIC_LENGTH + 1;

/// A word over Z4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuaternaryWord(Vec<u8>);

impl QuaternaryWord {
    pub fn new(digits: Vec<u8>) -> Result<QuaternaryWord> {
        if digits.is_empty() || 2 * digits.len() > crate::code::MAX_LENGTH {
            return input(format!("Z4 word length {} outside 1..=32", digits.len()));
        }
        if let Some(d) = digits.iter().find(|&&d| d > 3) {
            return input(format!("digit {d} is not in Z4"));
        }
        Ok(QuaternaryWord(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lee weight: 0, 1, 2, 1 for the digits 0, 1, 2, 3.
    pub fn lee_weight(&self) -> usize {
        self.0.iter().map(|&d| [0, 1, 2, 1][d as usize]).sum()
    }

    /// Z4 inner product.
    pub fn dot(&self, other: &QuaternaryWord) -> u8 {
        let s: u32 = self.0.iter().zip(&other.0).map(|(&a, &b)| a as u32 * b as u32).sum();
        (s % 4) as u8
    }

    /// Gray image of length `2L`: digit `i` (0-based) contributes its first
    /// bit at coordinate `i + 1` and its second bit at coordinate `i + L + 1`,
    /// with 0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10.
    pub fn gray_image(&self) -> BinaryWord {
        let l = self.len();
        let mut support = Vec::new();
        for (i, &d) in self.0.iter().enumerate() {
            let (first, second) = match d {
                0 => (false, false),
                1 => (false, true),
                2 => (true, true),
                _ => (true, false),
            };
            if first {
                support.push(i + 1);
            }
            if second {
                support.push(i + l + 1);
            }
        }
        BinaryWord::from_support(2 * l, &support).expect("support within 2L")
    }
}

fn poly_mul_mod4(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % 4;
        }
    }
    out
}

/// Hensel lift of a monic binary polynomial (coefficients in {0,1}, lowest
/// degree first) dividing `x^N - 1` with N odd, via one Graeffe step: writing
/// `h = e + o` with `e` the even-degree part and `o` the odd-degree part,
/// `g(x^2) = ±(e(x)^2 - o(x)^2)` over Z4, sign chosen to make `g` monic.
pub fn hensel_lift(binary: &[u8]) -> Vec<u8> {
    let even: Vec<u8> = binary.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c } else { 0 }).collect();
    let odd: Vec<u8> = binary.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
    let e2 = poly_mul_mod4(&even, &even);
    let o2 = poly_mul_mod4(&odd, &odd);
    let diff: Vec<u8> = e2.iter().zip(&o2).map(|(&a, &b)| (a + 4 - b) % 4).collect();
    let mut g: Vec<u8> = diff.iter().step_by(2).copied().collect();
    if *g.last().unwrap() == 3 {
        for c in &mut g {
            *c = (4 - *c) % 4;
        }
    }
    g
}

/// Remainder of `num` modulo the monic polynomial `div` over Z4.
fn poly_rem_mod4(num: &[u8], div: &[u8]) -> Vec<u8> {
    let mut r = num.to_vec();
    let dd = div.len() - 1;
    debug_assert_eq!(*div.last().unwrap(), 1);
    while r.len() > dd {
        let lead = r.pop().unwrap();
        let shift = r.len() - dd;
        for (k, &c) in div[..dd].iter().enumerate() {
            r[shift + k] = (r[shift + k] + 4 * 4 - lead * c) % 4;
        }
    }
    r
}

/// The four generator rows `x^k g(x)`, k = 0..3, extended by a parity digit.
pub fn octacode_generator() -> Result<Vec<QuaternaryWord>> {
    let g = hensel_lift(&HAMMING_GENERATOR);
    let mut x7_minus_1 = vec![0u8; CYCLIC_LENGTH + 1];
    x7_minus_1[0] = 3;
    x7_minus_1[CYCLIC_LENGTH] = 1;
    if poly_rem_mod4(&x7_minus_1, &g).iter().any(|&c| c != 0) {
        return Err(Error::Construction(format!("lifted generator {g:?} does not divide x^7 - 1 over Z4")));
    }
    let dim = CYCLIC_LENGTH + 1 - g.len();
    (0..dim)
        .map(|k| {
            let mut row = vec![0u8; OCTACODE_LENGTH];
            for (i, &c) in g.iter().enumerate() {
                row[k + i] = c;
            }
            let s: u32 = row.iter().map(|&d| d as u32).sum();
            row[CYCLIC_LENGTH] = ((4 - s % 4) % 4) as u8;
            QuaternaryWord::new(row)
        })
        .collect()
}

/// All 256 octacode words, validated: the generator rows are pairwise
/// orthogonal (so the code of size 4^4 is self-dual), the words are
/// distinct, and the minimum nonzero Lee weight is 6.
pub fn octacode() -> Result<Vec<QuaternaryWord>> {
    let gens = octacode_generator()?;
    for a in &gens {
        for b in &gens {
            if a.dot(b) != 0 {
                return Err(Error::Construction(format!("octacode rows {a:?} and {b:?} are not orthogonal")));
            }
        }
    }
    let mut words = Vec::with_capacity(256);
    for coeffs in 0..4u32.pow(gens.len() as u32) {
        let mut digits = vec![0u8; OCTACODE_LENGTH];
        let mut c = coeffs;
        for row in &gens {
            let k = (c % 4) as u8;
            c /= 4;
            for (d, &r) in digits.iter_mut().zip(row.digits()) {
                *d = (*d + k * r) % 4;
            }
        }
        words.push(QuaternaryWord::new(digits)?);
    }
    let mut sorted = words.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != 256 {
        return Err(Error::Construction(format!("octacode has {} distinct words, expected 256", sorted.len())));
    }
    let min_lee = words.iter().map(QuaternaryWord::lee_weight).filter(|&w| w > 0).min();
    if min_lee != Some(6) {
        return Err(Error::Construction(format!("octacode minimum Lee weight is {min_lee:?}, expected 6")));
    }
    Ok(words)
}

/// Gray image of the octacode, checked against the weight distribution of
/// the (X, Y) construction at length 16.
pub fn build_nr_via_octacode() -> Result<Code> {
    let code = Code::new(2 * OCTACODE_LENGTH, octacode()?.iter().map(QuaternaryWord::gray_image))?;
    let reference = build_extended_preparata(3)?;
    if code.weight_distribution() != reference.weight_distribution() {
        return Err(Error::Construction(format!(
            "Gray image weight distribution {:?} differs from the (X,Y) code's {:?}",
            code.weight_distribution().to_map(),
            reference.weight_distribution().to_map()
        )));
    }
    Ok(code)
}
