use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::random::random_bitvec;
use crate::gf2::{BitMat, BitVec, Seed};

/// Largest kernel dimension the exhaustive search accepts.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Random,
    Greedy,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Random => "random",
            Strategy::Greedy => "greedy",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "random" => Ok(Strategy::Random),
            "greedy" => Ok(Strategy::Greedy),
            other => Err(Error::param(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Result of a low-weight search in one coset `g_i ⊕ span(basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub column_index: usize,
    /// The achieved column `e_i = g_i ⊕ P_K·u_i`.
    pub best_candidate: BitVec,
    pub best_weight: usize,
    pub evaluations: u64,
    pub strategy: Strategy,
    pub seed: Option<Seed>,
}

/// Attack state for one public generator `G`: the canonical right inverse
/// `G₁⁻`, the projector `I ⊕ G₁⁻G` and an independent set of its columns.
///
/// Column `i` of any right inverse is `g_i ⊕ P_K·u_i`, and `P_K·u_i` ranges
/// over the column space of `P_K` only. A search over the `2^(n-k)` coset
/// elements therefore covers every one of the `2^n` choices of `u_i`.
#[derive(Debug, Clone)]
pub struct RightInverseAttack {
    g: BitMat,
    base_inverse: BitMat,
    projector: BitMat,
    kernel_basis: Vec<BitVec>,
}

impl RightInverseAttack {
    pub fn new(g: BitMat) -> Result<Self> {
        let base_inverse = g.right_inverse()?;
        let projector = g.kernel_projector(&base_inverse)?;
        let kernel_basis = kernel_basis(&projector);
        Ok(RightInverseAttack {
            g,
            base_inverse,
            projector,
            kernel_basis,
        })
    }

    pub fn generator(&self) -> &BitMat {
        &self.g
    }

    pub fn base_inverse(&self) -> &BitMat {
        &self.base_inverse
    }

    pub fn projector(&self) -> &BitMat {
        &self.projector
    }

    pub fn kernel_basis(&self) -> &[BitVec] {
        &self.kernel_basis
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    /// Column `g_i` of the canonical right inverse.
    pub fn target(&self, column: usize) -> BitVec {
        self.base_inverse.column(column)
    }

    /// True iff `candidate` lies in the coset of column `i`, i.e.
    /// `G·candidate = G·g_i` (the `i`-th unit vector).
    pub fn in_coset(&self, column: usize, candidate: &BitVec) -> Result<bool> {
        Ok(self.g.mul_column(candidate)? == BitVec::unit(self.k(), column))
    }

    pub fn search(&self, column: usize, config: &SearchConfig, seed: Seed) -> Result<SearchOutcome> {
        let target = self.target(column);
        let coset = Coset {
            column,
            target: &target,
            basis: &self.kernel_basis,
        };
        match config.strategy {
            Strategy::Exhaustive => coset.exhaustive(config.exhaustive_cap),
            Strategy::Random => coset.random(config.budget, seed),
            Strategy::Greedy => coset.greedy(config.restarts, seed),
        }
    }

    /// Right inverse whose columns are the given candidates, falling back to
    /// `g_i` for columns without one.
    pub fn assemble_inverse(&self, outcomes: &[SearchOutcome]) -> Result<BitMat> {
        let mut cols: Vec<BitVec> = (0..self.k()).map(|i| self.target(i)).collect();
        for o in outcomes {
            if o.column_index >= cols.len() {
                return Err(Error::dims("outcome column", cols.len(), o.column_index));
            }
            cols[o.column_index] = o.best_candidate.clone();
        }
        let inv = BitMat::from_columns(self.g.cols(), &cols)?;
        self.g.check_right_inverse(&inv)?;
        Ok(inv)
    }
}

/// Tuning for [`RightInverseAttack::search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub exhaustive_cap: usize,
    pub budget: u64,
    pub restarts: usize,
}

impl SearchConfig {
    pub fn new(strategy: Strategy) -> Self {
        SearchConfig {
            strategy,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            budget: 100_000,
            restarts: 1,
        }
    }
}

/// Independent columns of `projector`, scanned in column order.
pub fn kernel_basis(projector: &BitMat) -> Vec<BitVec> {
    let n = projector.rows();
    let mut reduced: Vec<Option<BitVec>> = vec![None; n];
    let mut basis = Vec::new();
    for col in projector.columns() {
        let mut x = col.clone();
        loop {
            let Some(low) = x.ones().next() else { break };
            match &reduced[low] {
                Some(v) => x.xor_assign(v).expect("equal lengths"),
                None => {
                    reduced[low] = Some(x);
                    basis.push(col);
                    break;
                }
            }
        }
    }
    basis
}

/// `c·G⁻`; bit `i` equals `m_i ⊕ e·e_i` for `c = m·G ⊕ e`.
pub fn classical_attack(c: &BitVec, g_inv: &BitMat) -> Result<BitVec> {
    g_inv.vec_mul(c)
}

/// One coset `target ⊕ span(basis)`.
#[derive(Debug, Clone, Copy)]
pub struct Coset<'a> {
    pub column: usize,
    pub target: &'a BitVec,
    pub basis: &'a [BitVec],
}

/// Coset vectors flattened to words for the inner loops.
struct Packed {
    words: usize,
    target: Vec<u64>,
    basis: Vec<u64>,
}

impl Packed {
    fn new(coset: &Coset<'_>) -> Self {
        let words = coset.target.words().len();
        let basis = coset.basis.iter().flat_map(|b| b.words().iter().copied()).collect();
        Packed {
            words,
            target: coset.target.words().to_vec(),
            basis,
        }
    }

    #[inline]
    fn vector(&self, j: usize) -> &[u64] {
        &self.basis[j * self.words..(j + 1) * self.words]
    }
}

#[inline]
fn popcount(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn xor_into(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= b;
    }
}

#[inline]
fn xor_weight(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

impl Coset<'_> {
    fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.target.len();
        if let Some(bad) = self.basis.iter().find(|b| b.len() != n) {
            return Err(Error::dims("coset basis vector", n, bad.len()));
        }
        Ok(())
    }

    /// `target ⊕ Σ basis[j]` over the set bits `j` of `coeffs`.
    pub fn combine(&self, coeffs: &BitVec) -> BitVec {
        let mut v = self.target.clone();
        for j in coeffs.ones() {
            v.xor_assign(&self.basis[j]).expect("coset vectors share a length");
        }
        v
    }

    fn outcome(&self, candidate: BitVec, evaluations: u64, strategy: Strategy, seed: Option<Seed>) -> SearchOutcome {
        SearchOutcome {
            column_index: self.column,
            best_weight: candidate.weight(),
            best_candidate: candidate,
            evaluations,
            strategy,
            seed,
        }
    }

    /// Minimum weight over all `2^d` coset elements, visited in Gray-code
    /// order so each step costs one vector XOR.
    pub fn exhaustive(&self, cap: usize) -> Result<SearchOutcome> {
        self.check()?;
        let d = self.dimension();
        if d > cap.min(63) {
            return Err(Error::CapExceeded {
                what: "exhaustive kernel dimension",
                requested: d,
                cap: cap.min(63),
            });
        }
        let best_code = gray_minimum(&Packed::new(self), d);
        let coeffs = BitVec::from_index(d, best_code);
        Ok(self.outcome(self.combine(&coeffs), 1u64 << d, Strategy::Exhaustive, None))
    }

    /// Best of `budget` coset elements: `g_i` itself plus uniformly drawn
    /// combinations. A budget of at least `2^d` enumerates the whole coset.
    pub fn random(&self, budget: u64, seed: Seed) -> Result<SearchOutcome> {
        self.check()?;
        if budget == 0 {
            return Err(Error::param("random search budget must be at least 1"));
        }
        let d = self.dimension();
        if d < 63 && budget >= 1u64 << d {
            let best_code = gray_minimum(&Packed::new(self), d);
            let coeffs = BitVec::from_index(d, best_code);
            return Ok(self.outcome(self.combine(&coeffs), 1u64 << d, Strategy::Random, Some(seed)));
        }
        let mut rng = seed.rng();
        let mut best = self.target.clone();
        let mut best_weight = best.weight();
        for _ in 1..budget {
            let coeffs = random_bitvec(d, &mut rng);
            let cand = self.combine(&coeffs);
            let w = cand.weight();
            if w < best_weight {
                best_weight = w;
                best = cand;
            }
        }
        Ok(self.outcome(best, budget, Strategy::Random, Some(seed)))
    }

    /// Steepest-descent hill climbing over single basis moves.
    ///
    /// Each step adds the basis vector with the largest weight decrease,
    /// lowest index on ties, and stops at a local minimum. Restart 0 starts
    /// from `g_i`; later restarts start from `g_i` plus a random combination.
    pub fn greedy(&self, restarts: usize, seed: Seed) -> Result<SearchOutcome> {
        self.check()?;
        if restarts == 0 {
            return Err(Error::param("greedy search needs at least one restart"));
        }
        let packed = Packed::new(self);
        let d = self.dimension();
        let mut rng = seed.rng();
        let mut evaluations = 0u64;
        let mut best: Option<Vec<u64>> = None;
        for restart in 0..restarts {
            let mut cur = packed.target.clone();
            if restart > 0 {
                let start = random_bitvec(d, &mut rng);
                for j in start.ones() {
                    xor_into(&mut cur, packed.vector(j));
                }
            }
            let mut cur_weight = popcount(&cur);
            evaluations += 1;
            loop {
                let mut step: Option<(usize, usize)> = None;
                for j in 0..d {
                    let w = xor_weight(&cur, packed.vector(j));
                    if step.is_none_or(|(_, bw)| w < bw) {
                        step = Some((j, w));
                    }
                }
                evaluations += d as u64;
                match step {
                    Some((j, w)) if w < cur_weight => {
                        xor_into(&mut cur, packed.vector(j));
                        cur_weight = w;
                    }
                    _ => break,
                }
            }
            if best.as_ref().is_none_or(|b| cur_weight < popcount(b)) {
                best = Some(cur);
            }
        }
        let words = best.expect("at least one restart");
        let candidate = BitVec::from_words(self.target.len(), words);
        Ok(self.outcome(candidate, evaluations, Strategy::Greedy, Some(seed)))
    }
}

/// Gray-code index (coefficient bit pattern) of a minimum-weight element.
fn gray_minimum(packed: &Packed, d: usize) -> u64 {
    let mut cur = packed.target.clone();
    let mut best = popcount(&cur);
    let mut best_code = 0u64;
    let mut code = 0u64;
    if packed.words == 1 {
        let basis: Vec<u64> = packed.basis.clone();
        let mut c = cur[0];
        for step in 1..1u64 << d {
            let j = step.trailing_zeros() as usize;
            c ^= basis[j];
            code ^= 1 << j;
            let w = c.count_ones() as usize;
            if w < best {
                best = w;
                best_code = code;
            }
        }
        return best_code;
    }
    for step in 1..1u64 << d {
        let j = step.trailing_zeros() as usize;
        xor_into(&mut cur, packed.vector(j));
        code ^= 1 << j;
        let w = popcount(&cur);
        if w < best {
            best = w;
            best_code = code;
        }
    }
    best_code
}
