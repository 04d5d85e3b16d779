use rand::{Rng, RngCore};

use super::field::{GF2mField, Gf};

/// Polynomial over GF(2^m), coefficients from the constant term upward.
///
/// Kept normalized: the leading stored coefficient is nonzero, and the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Gf>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Gf) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![0, 1])
    }

    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut c = long.coeffs.clone();
        for (a, b) in c.iter_mut().zip(&short.coeffs) {
            *a ^= b;
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, f: &GF2mField, s: Gf) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, f: &GF2mField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] ^= f.mul(a, b);
            }
        }
        Poly::from_coeffs(c)
    }

    /// Squaring is additive in characteristic 2: coefficients square in place
    /// and move to even positions.
    pub fn square(&self, f: &GF2mField) -> Poly {
        let mut c = vec![0; (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[2 * i] = f.square(a);
        }
        Poly::from_coeffs(c)
    }

    /// Euclidean division, panics on a zero divisor.
    pub fn div_rem(&self, f: &GF2mField, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[i - dd] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] ^= f.mul(q, d);
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, f: &GF2mField, modulus: &Poly) -> Poly {
        self.div_rem(f, modulus).1
    }

    pub fn mul_mod(&self, f: &GF2mField, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(f, other).rem(f, modulus)
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &GF2mField, x: Gf) -> Gf {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul(acc, x) ^ c)
    }

    pub fn monic(&self, f: &GF2mField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.leading()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &GF2mField, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Inverse modulo `modulus`, if it exists.
    pub fn inv_mod(&self, f: &GF2mField, modulus: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(f, modulus));
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(1));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1);
            let s = s0.add(&q.mul(f, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(s0.scale(f, f.inv(r0.leading())).rem(f, modulus))
    }

    /// `self^(2^m)` modulo `modulus`, i.e. the Frobenius map of GF(2^m)
    /// applied through `m` squarings.
    fn frobenius_mod(&self, f: &GF2mField, modulus: &Poly) -> Poly {
        let mut h = self.clone();
        for _ in 0..f.degree() {
            h = h.square(f).rem(f, modulus);
        }
        h
    }

    /// Ben-Or irreducibility test over GF(2^m): a polynomial of degree `t`
    /// is irreducible iff `gcd(x^(q^i) - x, g) = 1` for `1 <= i <= t/2`.
    pub fn is_irreducible(&self, f: &GF2mField) -> bool {
        let Some(t) = self.degree() else {
            return false;
        };
        if t == 0 {
            return false;
        }
        let x = Poly::x();
        let mut h = x.rem(f, self);
        for _ in 0..t / 2 {
            h = h.frobenius_mod(f, self);
            if h.add(&x).gcd(f, self).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Random monic irreducible polynomial of degree `t`.
    pub fn random_irreducible<R: RngCore>(f: &GF2mField, t: usize, rng: &mut R) -> Poly {
        loop {
            let mut c: Vec<Gf> = (0..t).map(|_| rng.random_range(0..f.size()) as Gf).collect();
            c.push(1);
            let p = Poly::from_coeffs(c);
            if p.is_irreducible(f) {
                return p;
            }
        }
    }

    /// Square root modulo `modulus` given `sqrt_x = sqrt(x) mod modulus`.
    ///
    /// Splits `p(x) = e(x)^2 + x·o(x)^2` so that `sqrt(p) = e + sqrt(x)·o`.
    pub fn sqrt_mod(&self, f: &GF2mField, sqrt_x: &Poly, modulus: &Poly) -> Poly {
        let p = self.rem(f, modulus);
        let even = Poly::from_coeffs(p.coeffs.iter().step_by(2).map(|&c| f.sqrt(c)).collect());
        let odd = Poly::from_coeffs(
            p.coeffs.iter().skip(1).step_by(2).map(|&c| f.sqrt(c)).collect(),
        );
        even.add(&sqrt_x.mul_mod(f, &odd, modulus)).rem(f, modulus)
    }

    /// `sqrt(x) mod g` for an irreducible `g` of degree `t`, as
    /// `x^(2^(m·t - 1)) mod g`.
    pub fn sqrt_x_mod(f: &GF2mField, modulus: &Poly) -> Poly {
        let t = modulus.degree().expect("nonzero modulus");
        let mut h = Poly::x().rem(f, modulus);
        for _ in 0..(f.degree() as usize * t).saturating_sub(1) {
            h = h.square(f).rem(f, modulus);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Seed;

    fn field() -> GF2mField {
        GF2mField::new(4).unwrap()
    }

    #[test]
    fn division_identity() {
        let f = field();
        let a = Poly::from_coeffs(vec![3, 7, 1, 9, 12, 5]);
        let b = Poly::from_coeffs(vec![2, 0, 11]);
        let (q, r) = a.div_rem(&f, &b);
        assert!(r.degree().unwrap() < 2);
        assert_eq!(q.mul(&f, &b).add(&r), a);
    }

    #[test]
    fn irreducibility_matches_root_and_factor_search() {
        let f = field();
        // x^2 + x + a is irreducible over GF(16) iff it has no root.
        for a in 0..16 {
            let p = Poly::from_coeffs(vec![a, 1, 1]);
            let has_root = f.elements().any(|x| p.eval(&f, x) == 0);
            assert_eq!(p.is_irreducible(&f), !has_root, "a={a}");
        }
        // product of two quadratics is reducible
        let q1 = Poly::from_coeffs(vec![2, 1, 1]);
        let q2 = Poly::from_coeffs(vec![8, 3, 1]);
        assert!(!q1.mul(&f, &q2).is_irreducible(&f));
    }

    #[test]
    fn inverse_and_sqrt_mod() {
        let f = GF2mField::new(5).unwrap();
        let mut rng = Seed(7).rng();
        let g = Poly::random_irreducible(&f, 4, &mut rng);
        assert_eq!(g.degree(), Some(4));
        let sx = Poly::sqrt_x_mod(&f, &g);
        assert_eq!(sx.square(&f).rem(&f, &g), Poly::x());
        let a = Poly::from_coeffs(vec![1, 5, 0, 17]);
        let ai = a.inv_mod(&f, &g).unwrap();
        assert_eq!(a.mul_mod(&f, &ai, &g), Poly::constant(1));
        let r = a.sqrt_mod(&f, &sx, &g);
        assert_eq!(r.square(&f).rem(&f, &g), a);
    }
}
