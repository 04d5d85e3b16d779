use rand::RngCore;

use super::field::{GF2mField, Gf};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::gf2::{eliminate, random::permutation_with, BitMat, BitVec, Seed};

/// A binary Goppa code `Γ(L, g)`.
///
/// `g` is a monic irreducible polynomial of degree `t` over GF(2^m) and the
/// support `L` is a list of distinct field elements that are not roots of
/// `g`. Irreducibility makes `g` square-free, so Patterson decoding corrects
/// every error pattern of weight up to `t`.
#[derive(Clone, Debug)]
pub struct GoppaCode {
    field: GF2mField,
    goppa_poly: Poly,
    support: Vec<Gf>,
    parity_check: BitMat,
    generator: BitMat,
    generator_inverse: BitMat,
    sqrt_x: Poly,
}

impl PartialEq for GoppaCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.goppa_poly == other.goppa_poly
            && self.support == other.support
    }
}

impl GoppaCode {
    /// Random code with the whole field as support, `n = 2^m`, in seeded
    /// random order.
    pub fn generate(m: u32, t: usize, seed: Seed) -> Result<Self> {
        if m < 3 || t < 2 {
            return Err(Error::param(format!("Goppa parameters need m >= 3 and t >= 2 (got m={m}, t={t})")));
        }
        Self::generate_shortened(m, t, 1 << m, seed)
    }

    /// Random code of length `n <= 2^m` (a shortened support). Also admits
    /// `t = 1`, where the support has to skip the single root of `g`; this is
    /// what the few-qubit toy chains use.
    pub fn generate_shortened(m: u32, t: usize, n: usize, seed: Seed) -> Result<Self> {
        let field = GF2mField::new(m)?;
        if t == 0 {
            return Err(Error::param("Goppa polynomial degree t must be at least 1"));
        }
        let size = field.size();
        let max_n = if t == 1 { size - 1 } else { size };
        if n > max_n {
            return Err(Error::param(format!("support length {n} exceeds {max_n} usable elements of GF(2^{m})")));
        }
        if n <= m as usize * t {
            return Err(Error::param(format!("n - m·t = {n} - {} leaves no message bits", m as usize * t)));
        }
        let mut rng = seed.rng();
        let goppa_poly = Poly::random_irreducible(&field, t, &mut rng);
        let support = random_support(&field, &goppa_poly, n, &mut rng);
        Self::from_parts(field, goppa_poly, support)
    }

    /// Rebuilds a code from its defining data, deriving `H`, `G0` and the
    /// decoder tables deterministically.
    pub fn from_parts(field: GF2mField, goppa_poly: Poly, support: Vec<Gf>) -> Result<Self> {
        let t = goppa_poly
            .degree()
            .filter(|&t| t >= 1)
            .ok_or_else(|| Error::param("Goppa polynomial must have degree >= 1"))?;
        if goppa_poly.leading() != 1 || !goppa_poly.is_irreducible(&field) {
            return Err(Error::param("Goppa polynomial must be monic and irreducible"));
        }
        let mut seen = vec![false; field.size()];
        for &a in &support {
            if a as usize >= field.size() || std::mem::replace(&mut seen[a as usize], true) {
                return Err(Error::param(format!("support element {a} invalid or repeated")));
            }
            if goppa_poly.eval(&field, a) == 0 {
                return Err(Error::param(format!("support element {a} is a root of g")));
            }
        }
        let parity_check = binary_parity_check(&field, &goppa_poly, &support);
        let generator = null_space(&parity_check);
        if generator.rows() == 0 {
            return Err(Error::param("code has dimension 0"));
        }
        let generator_inverse = generator.right_inverse()?;
        let sqrt_x = Poly::sqrt_x_mod(&field, &goppa_poly);
        debug_assert!(generator.rows() + field.degree() as usize * t >= support.len());
        Ok(GoppaCode {
            field,
            goppa_poly,
            support,
            parity_check,
            generator,
            generator_inverse,
            sqrt_x,
        })
    }

    pub fn field(&self) -> &GF2mField {
        &self.field
    }

    pub fn goppa_poly(&self) -> &Poly {
        &self.goppa_poly
    }

    pub fn support(&self) -> &[Gf] {
        &self.support
    }

    /// Designed error capacity `t = deg g`.
    pub fn t(&self) -> usize {
        self.goppa_poly.degree().unwrap_or(0)
    }

    pub fn m(&self) -> u32 {
        self.field.degree()
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    /// Dimension: the actual null-space dimension, at least `n - m·t`.
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// Binary parity-check matrix (`m·t × n`, rows possibly dependent).
    pub fn parity_check(&self) -> &BitMat {
        &self.parity_check
    }

    /// Generator matrix `G0` (`k × n`, full row rank).
    pub fn generator(&self) -> &BitMat {
        &self.generator
    }

    /// Right inverse of `G0`, used to read messages off codewords.
    pub fn generator_inverse(&self) -> &BitMat {
        &self.generator_inverse
    }

    pub fn is_codeword(&self, y: &BitVec) -> Result<bool> {
        Ok(self.parity_check.mul_column(y)?.is_zero())
    }

    /// Patterson decoding. Returns `(codeword, error)` with
    /// `codeword ⊕ error = y` and `weight(error) <= t`.
    pub fn decode(&self, y: &BitVec) -> Result<(BitVec, BitVec)> {
        let n = self.n();
        if y.len() != n {
            return Err(Error::dims("goppa decode", n, y.len()));
        }
        let f = &self.field;
        let g = &self.goppa_poly;
        let t = self.t();

        let syndrome = self.syndrome_poly(y);
        if syndrome.is_zero() {
            return Ok((y.clone(), BitVec::zeros(n)));
        }
        let inv = syndrome
            .inv_mod(f, g)
            .ok_or_else(|| Error::DecodingFailure("syndrome not invertible modulo g".into()))?;
        let root = inv.add(&Poly::x()).sqrt_mod(f, &self.sqrt_x, g);

        // Solve a ≡ b·root (mod g) with deg a <= t/2, deg b <= (t-1)/2.
        let (mut r0, mut r1) = (g.clone(), root);
        let (mut b0, mut b1) = (Poly::zero(), Poly::constant(1));
        while r1.degree().is_some_and(|d| d > t / 2) {
            let (q, r) = r0.div_rem(f, &r1);
            let b = b0.add(&q.mul(f, &b1));
            r0 = r1;
            r1 = r;
            b0 = b1;
            b1 = b;
        }
        let locator = r1.square(f).add(&Poly::x().mul(f, &b1.square(f)));
        let degree = locator.degree().unwrap_or(0);
        if degree == 0 || degree > t {
            return Err(Error::DecodingFailure(format!("error locator of degree {degree}")));
        }

        let mut error = BitVec::zeros(n);
        for (i, &a) in self.support.iter().enumerate() {
            if locator.eval(f, a) == 0 {
                error.set(i, true);
            }
        }
        if error.weight() != degree {
            return Err(Error::DecodingFailure(format!(
                "locator of degree {degree} has {} roots in the support",
                error.weight()
            )));
        }
        let codeword = y.xor(&error)?;
        if !self.is_codeword(&codeword)? {
            return Err(Error::DecodingFailure("corrected word is not a codeword".into()));
        }
        Ok((codeword, error))
    }

    /// `S(x) = Σ_{y_i = 1} (x - α_i)^{-1} mod g`.
    fn syndrome_poly(&self, y: &BitVec) -> Poly {
        let f = &self.field;
        let g = self.goppa_poly.coeffs();
        let t = g.len() - 1;
        let mut acc = vec![0 as Gf; t];
        for i in y.ones() {
            let a = self.support[i];
            // (g(x) - g(a)) / (x - a) by synthetic division; dividing by g(a)
            // gives the inverse of (x - a) modulo g.
            let mut q = vec![0 as Gf; t];
            q[t - 1] = g[t];
            for j in (1..t).rev() {
                q[j - 1] = g[j] ^ f.mul(a, q[j]);
            }
            let scale = f.inv(self.goppa_poly.eval(f, a));
            for (s, c) in acc.iter_mut().zip(&q) {
                *s ^= f.mul(*c, scale);
            }
        }
        Poly::from_coeffs(acc)
    }
}

fn random_support<R: RngCore>(field: &GF2mField, g: &Poly, n: usize, rng: &mut R) -> Vec<Gf> {
    let usable: Vec<Gf> = field.elements().filter(|&a| g.eval(field, a) != 0).collect();
    let order = permutation_with(usable.len(), rng);
    order.into_iter().take(n).map(|i| usable[i]).collect()
}

/// Rows `j = 0..t` of `α_i^j / g(α_i)`, each GF(2^m) entry expanded into `m`
/// binary rows (bit `b` of entry `(j, i)` lands in row `j·m + b`).
fn binary_parity_check(field: &GF2mField, g: &Poly, support: &[Gf]) -> BitMat {
    let m = field.degree() as usize;
    let t = g.degree().unwrap_or(0);
    let n = support.len();
    let mut h = BitMat::zeros(m * t, n);
    for (i, &a) in support.iter().enumerate() {
        let mut entry = field.inv(g.eval(field, a));
        for j in 0..t {
            for b in 0..m {
                if entry >> b & 1 == 1 {
                    h.set(j * m + b, i, true);
                }
            }
            entry = field.mul(entry, a);
        }
    }
    h
}

/// Basis of `{x : H·x = 0}` as the rows of a matrix, one row per free column
/// of the reduced `H`.
fn null_space(h: &BitMat) -> BitMat {
    let n = h.cols();
    let mut rows = h.row_vectors().to_vec();
    let pivots = eliminate(&mut rows, n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = BitVec::unit(n, f);
            for (r, &p) in pivots.iter().enumerate() {
                if rows[r].get(f) {
                    x.set(p, true);
                }
            }
            x
        })
        .collect();
    BitMat::from_rows(n, basis).expect("basis rows have length n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::random::random_error;

    #[test]
    fn dimensions_and_orthogonality() {
        let code = GoppaCode::generate(4, 2, Seed(1)).unwrap();
        assert_eq!(code.n(), 16);
        assert!(code.k() >= 8);
        assert!(code.generator().mul(&code.parity_check().transpose()).unwrap().is_zero());
        assert_eq!(code.generator().rank(), code.k());
    }

    #[test]
    fn parameter_validation() {
        assert!(GoppaCode::generate(2, 2, Seed(0)).is_err());
        assert!(GoppaCode::generate(4, 1, Seed(0)).is_err());
        assert!(GoppaCode::generate(4, 4, Seed(0)).is_err());
        assert!(GoppaCode::generate_shortened(4, 1, 16, Seed(0)).is_err());
        assert!(GoppaCode::generate_shortened(3, 1, 3, Seed(0)).is_err());
        let toy = GoppaCode::generate_shortened(3, 1, 6, Seed(0)).unwrap();
        assert_eq!((toy.n(), toy.t()), (6, 1));
        assert!(toy.k() >= 3);
    }

    #[test]
    fn decodes_up_to_capacity() {
        for (m, t, seed) in [(4u32, 2usize, 3u64), (5, 3, 4), (6, 5, 5), (3, 1, 6)] {
            let code = if t == 1 {
                GoppaCode::generate_shortened(m, t, 7, Seed(seed)).unwrap()
            } else {
                GoppaCode::generate(m, t, Seed(seed)).unwrap()
            };
            for trial in 0..40u64 {
                let msg = crate::gf2::random_vector(code.k(), Seed(trial));
                let c = code.generator().vec_mul(&msg).unwrap();
                let w = (trial as usize) % (t + 1);
                let e = random_error(code.n(), w, Seed(1000 + trial)).unwrap();
                let y = c.xor(&e).unwrap();
                let (c2, e2) = code.decode(&y).unwrap();
                assert_eq!(c2, c, "m={m} t={t} trial={trial}");
                assert_eq!(e2, e);
                assert_eq!(code.generator_inverse().vec_mul(&c2).unwrap(), msg);
            }
        }
    }

    #[test]
    fn rebuild_from_parts_is_identical() {
        let code = GoppaCode::generate(5, 3, Seed(9)).unwrap();
        let again = GoppaCode::from_parts(
            code.field().clone(),
            code.goppa_poly().clone(),
            code.support().to_vec(),
        )
        .unwrap();
        assert_eq!(again.generator(), code.generator());
        assert_eq!(again, code);
    }
}
