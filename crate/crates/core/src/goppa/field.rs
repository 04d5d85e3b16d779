use crate::error::{Error, Result};

/// Element of GF(2^m) in polynomial-basis representation.
pub type Gf = u16;

/// Smallest and largest supported extension degree.
pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Fixed primitive reduction polynomial for each supported degree, bit `i`
/// being the coefficient of `x^i`.
pub fn primitive_polynomial(m: u32) -> Option<u32> {
    Some(match m {
        2 => 0x7,      // x^2 + x + 1
        3 => 0xB,      // x^3 + x + 1
        4 => 0x13,     // x^4 + x + 1
        5 => 0x25,     // x^5 + x^2 + 1
        6 => 0x43,     // x^6 + x + 1
        7 => 0x89,     // x^7 + x^3 + 1
        8 => 0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
        9 => 0x211,    // x^9 + x^4 + 1
        10 => 0x409,   // x^10 + x^3 + 1
        11 => 0x805,   // x^11 + x^2 + 1
        12 => 0x1053,  // x^12 + x^6 + x^4 + x + 1
        13 => 0x201B,  // x^13 + x^4 + x^3 + x + 1
        14 => 0x4443,  // x^14 + x^10 + x^6 + x + 1
        15 => 0x8003,  // x^15 + x + 1
        16 => 0x1100B, // x^16 + x^12 + x^3 + x + 1
        _ => return None,
    })
}

/// GF(2^m) with exp/log tables over a primitive element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2mField {
    m: u32,
    poly: u32,
    exp: Vec<Gf>,
    log: Vec<u32>,
}

impl GF2mField {
    pub fn new(m: u32) -> Result<Self> {
        let poly = primitive_polynomial(m).ok_or_else(|| {
            Error::param(format!("field degree m={m} outside {MIN_DEGREE}..={MAX_DEGREE}"))
        })?;
        Self::with_polynomial(m, poly)
    }

    /// Builds the field from an explicit reduction polynomial, which must be
    /// primitive (x generates the multiplicative group).
    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) || poly >> m != 1 {
            return Err(Error::param(format!("bad reduction polynomial {poly:#x} for m={m}")));
        }
        let size = 1usize << m;
        let order = size - 1;
        let mut exp = vec![0; 2 * order];
        let mut log = vec![0; size];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            if i > 0 && x == 1 {
                return Err(Error::param(format!("{poly:#x} is not primitive")));
            }
            *slot = x as Gf;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::param(format!("{poly:#x} is not primitive")));
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(GF2mField { m, poly, exp, log })
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn reduction_polynomial(&self) -> u32 {
        self.poly
    }

    #[inline]
    pub fn size(&self) -> usize {
        1 << self.m
    }

    #[inline]
    fn order(&self) -> usize {
        self.size() - 1
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Gf) -> Gf {
        assert!(a != 0, "inverse of zero in GF(2^{})", self.m);
        self.exp[(self.order() - self.log[a as usize] as usize) % self.order()]
    }

    #[inline]
    pub fn div(&self, a: Gf, b: Gf) -> Gf {
        self.mul(a, self.inv(b))
    }

    #[inline]
    pub fn square(&self, a: Gf) -> Gf {
        self.mul(a, a)
    }

    /// The unique square root (squaring is a bijection in characteristic 2).
    pub fn sqrt(&self, a: Gf) -> Gf {
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as usize;
        // log(a) / 2 modulo the odd group order
        let half = if l.is_multiple_of(2) { l / 2 } else { (l + self.order()) / 2 };
        self.exp[half]
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (e % self.order() as u64)) % self.order() as u64;
        self.exp[l as usize]
    }

    /// All field elements `0, 1, ..., 2^m - 1`.
    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.size()).map(|x| x as Gf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_for_all_degrees() {
        for m in MIN_DEGREE..=12 {
            let f = GF2mField::new(m).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.square(f.sqrt(a)), a);
            }
        }
    }

    #[test]
    fn large_degrees_are_primitive() {
        for m in 13..=MAX_DEGREE {
            GF2mField::new(m).unwrap();
        }
        assert!(GF2mField::new(1).is_err());
        assert!(GF2mField::new(17).is_err());
        // x^4 + x^3 + x^2 + x + 1 is irreducible but not primitive
        assert!(GF2mField::with_polynomial(4, 0x1F).is_err());
    }

    #[test]
    fn mul_matches_carryless_reduction() {
        let f = GF2mField::new(8).unwrap();
        let slow = |a: u32, b: u32| {
            let mut r = 0u32;
            for i in 0..8 {
                if b >> i & 1 == 1 {
                    r ^= a << i;
                }
            }
            for i in (8..16).rev() {
                if r >> i & 1 == 1 {
                    r ^= 0x11D << (i - 8);
                }
            }
            r as Gf
        };
        for a in 0..256u32 {
            for b in (0..256u32).step_by(7) {
                assert_eq!(f.mul(a as Gf, b as Gf), slow(a, b));
            }
        }
        assert_eq!(f.pow(3, 0), 1);
        assert_eq!(f.pow(3, 5), f.mul(f.mul(f.square(f.square(3)), 1), 3));
    }
}
