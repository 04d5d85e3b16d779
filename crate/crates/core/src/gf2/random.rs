use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::bitmat::BitMat;
use super::bitvec::{words_for, BitVec};
use crate::error::{Error, Result};

/// Name of the generator behind every randomized operation, recorded in
/// reports next to the seed.
pub const PRNG_NAME: &str = "ChaCha20Rng::seed_from_u64 (rand_chacha 0.9)";

/// Seed for the artifact-wide deterministic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    /// Independent child seed for sub-task `index` (splitmix64 mixing), so
    /// parallel tasks get reproducible streams regardless of schedule.
    pub fn derive(self, index: u64) -> Seed {
        let mut z = self
            .0
            .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

pub(crate) fn random_bitvec<R: RngCore>(len: usize, rng: &mut R) -> BitVec {
    let words = (0..words_for(len)).map(|_| rng.next_u64()).collect();
    BitVec::from_words(len, words)
}

fn fill_matrix<R: RngCore>(rows: usize, cols: usize, rng: &mut R) -> BitMat {
    let data = (0..rows).map(|_| random_bitvec(cols, rng)).collect();
    BitMat::from_rows(cols, data).expect("rows have matching width")
}

/// Uniformly random `rows × cols` matrix.
pub fn random_matrix(rows: usize, cols: usize, seed: Seed) -> BitMat {
    fill_matrix(rows, cols, &mut seed.rng())
}

pub(crate) fn full_rank_with<R: RngCore>(k: usize, n: usize, rng: &mut R) -> Result<BitMat> {
    if k > n {
        return Err(Error::param(format!("full-rank {k}x{n} needs k <= n")));
    }
    loop {
        let m = fill_matrix(k, n, rng);
        if m.rank() == k {
            return Ok(m);
        }
    }
}

/// Uniform full-row-rank `k × n` matrix by rejection sampling.
pub fn random_full_rank(k: usize, n: usize, seed: Seed) -> Result<BitMat> {
    full_rank_with(k, n, &mut seed.rng())
}

/// Uniform invertible `k × k` matrix.
pub fn random_invertible(k: usize, seed: Seed) -> Result<BitMat> {
    random_full_rank(k, k, seed)
}

pub(crate) fn permutation_with<R: RngCore>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Matrix of a permutation given as `row i -> column perm[i]`.
pub fn permutation_matrix(perm: &[usize]) -> BitMat {
    let n = perm.len();
    let mut p = BitMat::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, true);
    }
    p
}

/// Uniformly random `n × n` permutation matrix.
pub fn random_permutation(n: usize, seed: Seed) -> BitMat {
    permutation_matrix(&permutation_with(n, &mut seed.rng()))
}

pub(crate) fn error_with<R: RngCore>(n: usize, t: usize, rng: &mut R) -> Result<BitVec> {
    if t > n {
        return Err(Error::param(format!("error weight {t} exceeds length {n}")));
    }
    // Partial Fisher-Yates: the first t slots are a uniform t-subset.
    let mut pos: Vec<usize> = (0..n).collect();
    let mut e = BitVec::zeros(n);
    for i in 0..t {
        let j = rng.random_range(i..n);
        pos.swap(i, j);
        e.set(pos[i], true);
    }
    Ok(e)
}

/// Uniformly random vector of length `n` and weight exactly `t`.
pub fn random_error(n: usize, t: usize, seed: Seed) -> Result<BitVec> {
    error_with(n, t, &mut seed.rng())
}

/// Uniformly random vector of length `len`.
pub fn random_vector(len: usize, seed: Seed) -> BitVec {
    random_bitvec(len, &mut seed.rng())
}
