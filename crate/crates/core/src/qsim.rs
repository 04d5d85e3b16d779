//! Dense state-vector simulation of the operator set the schemes need:
//! Pauli X/Z masks, the global Hadamard layer, injective basis relabelings
//! and measurement statistics in the computational and Hadamard bases.
//!
//! Basis labels follow [`BitVec`] coordinates: index bit `i` of an amplitude
//! index is coordinate `i` of the corresponding bit string, so
//! `BitVec::from_index(q, x)` is the string labelling amplitude `x`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec, Seed};

pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Element-wise amplitude tolerance used by comparisons.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// Tolerance on norms and probability sums.
pub const NORM_TOL: f64 = 1e-10;

/// Amplitudes at or below this magnitude are outside a state's support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Largest simulated register, `DEFAULT_QUBIT_CAP` unless the
/// `QMCE_QUBIT_CAP` environment variable says otherwise (read once).
pub fn qubit_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("QMCE_QUBIT_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&c| (1..=40).contains(&c))
            .unwrap_or(DEFAULT_QUBIT_CAP)
    })
}

pub(crate) fn check_cap(q: usize) -> Result<()> {
    let cap = qubit_cap();
    if q > cap {
        return Err(Error::CapExceeded {
            what: "qubits",
            requested: q,
            cap,
        });
    }
    Ok(())
}

fn mask_index(r: &BitVec, q: usize, op: &'static str) -> Result<u64> {
    if r.len() != q {
        return Err(Error::dims(op, q, r.len()));
    }
    r.to_index()
}

/// Pure state `Σ_x a_x |x⟩` on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// Computational basis state `|x⟩`.
    pub fn basis_state(q: usize, x: &BitVec) -> Result<Self> {
        check_cap(q)?;
        let idx = mask_index(x, q, "basis_state")?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << q];
        amps[idx as usize] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { num_qubits: q, amps })
    }

    /// Normalizes the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::param(format!("amplitude count {len} is not a power of two")));
        }
        let q = len.trailing_zeros() as usize;
        check_cap(q)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(QuantumState { num_qubits: q, amps })
    }

    /// Takes amplitudes as given, rejecting them unless already unit norm
    /// within [`NORM_TOL`]. Used where values must survive bit-exactly.
    pub fn from_normalized_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::param(format!("amplitude count {len} is not a power of two")));
        }
        let q = len.trailing_zeros() as usize;
        check_cap(q)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::param(format!("state norm {norm} is not 1")));
        }
        Ok(QuantumState { num_qubits: q, amps })
    }

    /// Complex Gaussian amplitudes, normalized (Haar-random direction).
    pub fn random_state(q: usize, seed: Seed) -> Result<Self> {
        check_cap(q)?;
        let mut rng = seed.rng();
        let amps = (0..1usize << q)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(amps)
    }

    /// Equal superposition over all `2^q` basis states.
    pub fn uniform(q: usize) -> Result<Self> {
        check_cap(q)?;
        Self::from_amplitudes(vec![Complex64::new(1.0, 0.0); 1 << q])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Basis indices with non-negligible amplitude, ascending.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > SUPPORT_TOL)
            .map(|(i, _)| i as u64)
    }

    /// Applies `X(r)`: `|x⟩ ↦ |x ⊕ r⟩`.
    pub fn apply_x_mask(&self, r: &BitVec) -> Result<Self> {
        let mask = mask_index(r, self.num_qubits, "apply_x_mask")? as usize;
        let amps = (0..self.amps.len()).map(|x| self.amps[x ^ mask]).collect();
        Ok(QuantumState {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Applies `Z(s)`: `|x⟩ ↦ (-1)^{s·x} |x⟩`.
    pub fn apply_z_mask(&self, s: &BitVec) -> Result<Self> {
        let mask = mask_index(s, self.num_qubits, "apply_z_mask")?;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(x, &a)| if (x as u64 & mask).count_ones() & 1 == 1 { -a } else { a })
            .collect();
        Ok(QuantumState {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// `H^{⊗q}` via the in-place fast Walsh-Hadamard butterfly.
    ///
    /// The fixed butterfly order makes the result of a permuted or
    /// sign-flipped input an exact permutation/sign flip of the result, so
    /// Hadamard-basis statistics of `X(r)ψ` and `ψ` agree bit for bit.
    pub fn hadamard_all(&self) -> Self {
        let mut amps = self.amps.clone();
        let len = amps.len();
        let mut h = 1;
        while h < len {
            for block in (0..len).step_by(2 * h) {
                for x in block..block + h {
                    let (a, b) = (amps[x], amps[x + h]);
                    amps[x] = a + b;
                    amps[x + h] = a - b;
                }
            }
            h *= 2;
        }
        let scale = (len as f64).sqrt().recip();
        for a in &mut amps {
            *a *= scale;
        }
        QuantumState {
            num_qubits: self.num_qubits,
            amps,
        }
    }

    /// Coherent relabeling `|x⟩ ↦ |f(x)⟩` on the support into a register of
    /// `out_qubits`. Fails with [`Error::SupportCollision`] rather than
    /// merging amplitudes when `f` is not injective on the support.
    pub fn apply_basis_map<F>(&self, out_qubits: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(u64) -> Result<u64>,
    {
        check_cap(out_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << out_qubits];
        let mut origin: BTreeMap<u64, u64> = BTreeMap::new();
        for x in self.support() {
            let y = f(x)?;
            if y >> out_qubits != 0 {
                return Err(Error::param(format!("image {y:#x} exceeds {out_qubits} qubits")));
            }
            if let Some(&first) = origin.get(&y) {
                return Err(Error::SupportCollision {
                    first,
                    second: x,
                    image: y,
                });
            }
            origin.insert(y, x);
            amps[y as usize] = self.amps[x as usize];
        }
        Ok(QuantumState {
            num_qubits: out_qubits,
            amps,
        })
    }

    /// Encodes `Σ a_m |m⟩ ↦ Σ a_m |m·G ⊕ e⟩` for a full-row-rank `G`.
    pub fn encode_linear(&self, g: &BitMat, e: &BitVec) -> Result<Self> {
        if g.rows() != self.num_qubits {
            return Err(Error::dims("encode_linear G rows", self.num_qubits, g.rows()));
        }
        let n = g.cols();
        check_cap(n)?;
        let offset = mask_index(e, n, "encode_linear e")?;
        let rank = g.rank();
        if rank < g.rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: g.rows(),
            });
        }
        let rows = row_indices(g)?;
        self.apply_basis_map(n, |m| Ok(apply_rows(&rows, m) ^ offset))
    }

    /// Relabels `|x⟩ ↦ |x·M⟩`; the result has `M.cols()` qubits.
    pub fn apply_rowvec_map(&self, m: &BitMat) -> Result<Self> {
        if m.rows() != self.num_qubits {
            return Err(Error::dims("apply_rowvec_map M rows", self.num_qubits, m.rows()));
        }
        let rows = row_indices(m)?;
        self.apply_basis_map(m.cols(), |x| Ok(apply_rows(&rows, x)))
    }

    pub fn measure_distribution(&self, basis: Basis) -> MeasurementDistribution {
        let probabilities = match basis {
            Basis::Computational => self.amps.iter().map(|a| a.norm_sqr()).collect(),
            Basis::HadamardAll => self.hadamard_all().amps.iter().map(|a| a.norm_sqr()).collect(),
        };
        MeasurementDistribution {
            basis,
            probabilities,
        }
    }

    /// Seeded measurement outcomes, as outcome -> count.
    pub fn sample(&self, basis: Basis, shots: usize, seed: Seed) -> Result<BTreeMap<u64, usize>> {
        let dist = self.measure_distribution(basis);
        let sampler = WeightedIndex::new(&dist.probabilities)
            .map_err(|e| Error::param(format!("cannot sample distribution: {e}")))?;
        let mut rng = seed.rng();
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(sampler.sample(&mut rng) as u64).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        self.check_same("fidelity", other)?;
        let inner: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner.norm())
    }

    /// `F(r) = |Σ_m a_m^* a_{m⊕r}|`, the overlap of the state with its
    /// bit-flipped copy `X(r)ψ`.
    pub fn fidelity_mask(&self, r: &BitVec) -> Result<f64> {
        let mask = mask_index(r, self.num_qubits, "fidelity_mask")? as usize;
        let inner: Complex64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(m, a)| a.conj() * self.amps[m ^ mask])
            .sum();
        Ok(inner.norm())
    }

    /// Largest element-wise deviation `max_x |a_x - b_x|`.
    pub fn max_abs_diff(&self, other: &QuantumState) -> Result<f64> {
        self.check_same("max_abs_diff", other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff `max|self - λ·other| <= tol` for the unit `λ` fixed by the
    /// largest-magnitude amplitude of `other`.
    pub fn equal_up_to_global_phase(&self, other: &QuantumState, tol: f64) -> Result<bool> {
        Ok(self.max_diff_up_to_global_phase(other)? <= tol)
    }

    /// `max |self - λ·other|` with the unit phase `λ` fixed at the
    /// largest-magnitude amplitude of `other`.
    pub fn max_diff_up_to_global_phase(&self, other: &QuantumState) -> Result<f64> {
        self.check_same("equal_up_to_global_phase", other)?;
        let pivot = other
            .amps
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| if a.norm() > best.1 { (i, a.norm()) } else { best })
            .0;
        let ratio = self.amps[pivot] / other.amps[pivot];
        let lambda = if ratio.norm() > 0.0 && ratio.is_finite() {
            ratio / ratio.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - lambda * b).norm())
            .fold(0.0, f64::max))
    }

    /// Multiplies every amplitude by `-1`.
    pub fn negate(&self) -> Self {
        QuantumState {
            num_qubits: self.num_qubits,
            amps: self.amps.iter().map(|a| -a).collect(),
        }
    }

    fn check_same(&self, op: &'static str, other: &QuantumState) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::dims(op, self.num_qubits, other.num_qubits));
        }
        Ok(())
    }
}

fn row_indices(m: &BitMat) -> Result<Vec<u64>> {
    check_cap(m.cols())?;
    m.row_vectors().iter().map(BitVec::to_index).collect()
}

#[inline]
fn apply_rows(rows: &[u64], x: u64) -> u64 {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| x >> i & 1 == 1)
        .fold(0, |acc, (_, r)| acc ^ r)
}

/// Measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Computational,
    HadamardAll,
}

/// Outcome probabilities of a full-register measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    pub basis: Basis,
    pub probabilities: Vec<f64>,
}

impl MeasurementDistribution {
    /// The distribution relabeled by `⊕mask`: `p'[x] = p[x ⊕ mask]`.
    pub fn shifted(&self, mask: u64) -> Self {
        let probabilities = (0..self.probabilities.len())
            .map(|x| self.probabilities[x ^ mask as usize])
            .collect();
        MeasurementDistribution {
            basis: self.basis,
            probabilities,
        }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// All masks `r` with `max_x |p[x] - other[x ⊕ r]| <= tol`, ascending.
    pub fn aligning_shifts(&self, other: &MeasurementDistribution, tol: f64) -> Result<Vec<u64>> {
        check_len(&self.probabilities, &other.probabilities)?;
        let len = self.probabilities.len();
        Ok((0..len as u64)
            .filter(|&r| {
                (0..len).all(|x| (self.probabilities[x] - other.probabilities[x ^ r as usize]).abs() <= tol)
            })
            .collect())
    }
}

fn check_len(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::dims("distribution length", p.len(), q.len()));
    }
    Ok(())
}

/// Total variation distance `½ Σ |p_i - q_i|`.
pub fn tv_distance(p: &MeasurementDistribution, q: &MeasurementDistribution) -> Result<f64> {
    check_len(&p.probabilities, &q.probabilities)?;
    Ok(0.5
        * p.probabilities
            .iter()
            .zip(&q.probabilities)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}
