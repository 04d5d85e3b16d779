use super::code::GoppaCode;
use crate::error::{Error, Result};
use crate::gf2::{permutation_matrix, random_error, random_invertible, BitMat, BitVec, Seed};
use crate::gf2::random::permutation_with;

/// Public half `(G, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub g: BitMat,
    pub t: usize,
}

impl PublicKey {
    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }
}

/// McEliece key pair with `G = S·G0·P`.
///
/// `G0` is the code's generator, optionally cut down to its first `k` rows so
/// that the message length can be pinned (a subcode still decodes with the
/// full code's decoder).
#[derive(Clone, Debug)]
pub struct McElieceKeyPair {
    public: PublicKey,
    code: GoppaCode,
    s: BitMat,
    p: BitMat,
    perm: Vec<usize>,
    g0: BitMat,
    g0_inverse: BitMat,
    s_inverse: BitMat,
}

impl McElieceKeyPair {
    pub fn generate(code: GoppaCode, seed: Seed) -> Result<Self> {
        let k = code.k();
        Self::generate_with_dimension(code, k, seed)
    }

    /// Key pair whose message length is `k <= code.k()`.
    pub fn generate_with_dimension(code: GoppaCode, k: usize, seed: Seed) -> Result<Self> {
        if k == 0 || k > code.k() {
            return Err(Error::param(format!("message length {k} outside 1..={}", code.k())));
        }
        let s = random_invertible(k, seed.derive(0))?;
        let perm = permutation_with(code.n(), &mut seed.derive(1).rng());
        Self::assemble(code, s, perm)
    }

    /// Rebuilds a key pair from stored private data.
    pub fn from_private_parts(code: GoppaCode, s: BitMat, p: &BitMat) -> Result<Self> {
        let n = code.n();
        if p.rows() != n || p.cols() != n {
            return Err(Error::dims("permutation size", n, p.rows()));
        }
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        for i in 0..n {
            let row = p.row(i);
            let j = row.ones().next().filter(|_| row.weight() == 1);
            match j {
                Some(j) if !used[j] => {
                    used[j] = true;
                    perm.push(j);
                }
                _ => return Err(Error::param("P is not a permutation matrix")),
            }
        }
        Self::assemble(code, s, perm)
    }

    fn assemble(code: GoppaCode, s: BitMat, perm: Vec<usize>) -> Result<Self> {
        let k = s.rows();
        if s.cols() != k || k > code.k() {
            return Err(Error::dims("S shape", k, s.cols()));
        }
        let s_inverse = s.right_inverse()?;
        let g0 = code.generator().top_rows(k);
        let g0_inverse = g0.right_inverse()?;
        let p = permutation_matrix(&perm);
        let g = s.mul(&g0)?.mul(&p)?;
        let t = code.t();
        Ok(McElieceKeyPair {
            public: PublicKey { g, t },
            code,
            s,
            p,
            perm,
            g0,
            g0_inverse,
            s_inverse,
        })
    }

    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    pub fn code(&self) -> &GoppaCode {
        &self.code
    }

    pub fn s(&self) -> &BitMat {
        &self.s
    }

    pub fn p(&self) -> &BitMat {
        &self.p
    }

    /// The (possibly truncated) code generator used in `G = S·G0·P`.
    pub fn g0(&self) -> &BitMat {
        &self.g0
    }

    /// Recovers `m` from `c = m·G ⊕ e` with `weight(e) <= t`, returning the
    /// error as well.
    pub fn decrypt_with_error(&self, c: &BitVec) -> Result<(BitVec, BitVec)> {
        let n = self.public.n();
        if c.len() != n {
            return Err(Error::dims("decrypt", n, c.len()));
        }
        // undo P: (x·P)[perm[i]] = x[i]
        let mut y = BitVec::zeros(n);
        for (i, &j) in self.perm.iter().enumerate() {
            if c.get(j) {
                y.set(i, true);
            }
        }
        let (codeword, error) = self.code.decode(&y)?;
        let ms = self.g0_inverse.vec_mul(&codeword)?;
        if self.g0.vec_mul(&ms)? != codeword {
            return Err(Error::DecodingFailure("nearest codeword lies outside the key's subcode".into()));
        }
        let m = self.s_inverse.vec_mul(&ms)?;
        let e = self.p.vec_mul(&error)?;
        Ok((m, e))
    }

    pub fn decrypt(&self, c: &BitVec) -> Result<BitVec> {
        self.decrypt_with_error(c).map(|(m, _)| m)
    }
}

/// `c = m·G ⊕ e` with a fresh weight-`t` error drawn from `seed`. The error
/// is returned alongside the cipher for callers that need it.
pub fn encrypt(public: &PublicKey, m: &BitVec, seed: Seed) -> Result<(BitVec, BitVec)> {
    let e = random_error(public.n(), public.t, seed)?;
    let c = public.g.vec_mul(m)?.xor(&e)?;
    Ok((c, e))
}
