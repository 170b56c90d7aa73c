//! Log/antilog arithmetic in GF(2^m) for 2 <= m <= 8.
//!
//! Elements are bit vectors over the polynomial basis `1, x, ..., x^(m-1)`;
//! bit k holds the coefficient of x^k.

use crate::error::{input, Error, Result};

pub type Elem = u8;

/// Primitive polynomial used when the caller does not supply one.
pub fn default_modulus(m: u32) -> Option<u32> {
    Some(match m {
        2 => 0b111,
        3 => 0b1011,      // x^3 + x + 1
        4 => 0b1_0011,    // x^4 + x + 1
        5 => 0b10_0101,   // x^5 + x^2 + 1
        6 => 0b100_0011,  // x^6 + x + 1
        7 => 0b1000_0011, // x^7 + x + 1
        8 => 0x11d,       // x^8 + x^4 + x^3 + x^2 + 1
        _ => return None,
    })
}

#[derive(Clone)]
pub struct FieldTable {
    m: u32,
    modulus: u32,
    /// `exp[k] = g^k` for k in 0..2(q-1), doubled so products need no reduction.
    exp: Vec<Elem>,
    log: Vec<u16>,
    cubes: Vec<Elem>,
}

impl std::fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF(2^{}) mod {:#b}", self.m, self.modulus)
    }
}

impl FieldTable {
    /// Builds the tables, rejecting a modulus under which `x` does not have
    /// multiplicative order `2^m - 1` (reducible or non-primitive polynomials).
    pub fn new(m: u32, modulus: u32) -> Result<FieldTable> {
        if !(2..=8).contains(&m) {
            return input(format!("extension degree {m} outside 2..=8"));
        }
        if modulus >> m != 1 {
            return input(format!("modulus {modulus:#b} does not have degree {m}"));
        }
        let q = 1usize << m;
        let order = q - 1;
        let mut exp = vec![0 as Elem; 2 * order];
        let mut log = vec![u16::MAX; q];
        let mut x: u32 = 1;
        for k in 0..order {
            if x == 0 || log[x as usize] != u16::MAX {
                return Err(Error::Construction(format!(
                    "modulus {modulus:#b} is not primitive: x has order {k} instead of {order}"
                )));
            }
            exp[k] = x as Elem;
            log[x as usize] = k as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= modulus;
            }
        }
        if x != 1 {
            return Err(Error::Construction(format!("modulus {modulus:#b} is not primitive: x^{order} != 1")));
        }
        for k in order..2 * order {
            exp[k] = exp[k - order];
        }
        let mut field = FieldTable { m, modulus, exp, log, cubes: Vec::new() };
        field.cubes = (0..q).map(|a| field.mul_raw(field.mul_raw(a as Elem, a as Elem), a as Elem)).collect();
        Ok(field)
    }

    pub fn with_default_modulus(m: u32) -> Result<FieldTable> {
        match default_modulus(m) {
            Some(p) => Self::new(m, p),
            None => input(format!("no default modulus for m = {m}")),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, 2^m.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    fn check(&self, a: Elem) -> Result<()> {
        if (a as usize) >= self.size() {
            return input(format!("element {a} outside GF(2^{})", self.m));
        }
        Ok(())
    }

    #[inline]
    pub fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    #[inline]
    pub fn cube_raw(&self, a: Elem) -> Elem {
        self.cubes[a as usize]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_raw(a, b))
    }

    pub fn cube(&self, a: Elem) -> Result<Elem> {
        self.check(a)?;
        Ok(self.cube_raw(a))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        self.check(a)?;
        if a == 0 {
            return input("zero has no inverse");
        }
        let order = self.size() - 1;
        Ok(self.exp[(order - self.log[a as usize] as usize) % order])
    }

    /// Field sum (XOR fold) of a set of elements.
    pub fn elem_sum(&self, elems: impl IntoIterator<Item = Elem>) -> Result<Elem> {
        elems.into_iter().try_fold(0, |acc, a| {
            self.check(a)?;
            Ok(acc ^ a)
        })
    }

    /// `g^k` for the primitive element g = x.
    pub fn power_of_generator(&self, k: usize) -> Elem {
        self.exp[k % (self.size() - 1)]
    }
}
