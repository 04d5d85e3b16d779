//! Seeded experiment harnesses behind the CLI `attack` and `qdemo` commands.
//!
//! Every randomized step draws from a child of the master seed
//! (`seed.derive(stage).derive(task)`), so per-column and per-trial work can
//! run in parallel without changing the results.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::parity::{parity_zero_prob, ParityProbability};
use super::search::{classical_attack, RightInverseAttack, SearchConfig, SearchOutcome, Strategy};
use crate::error::{Error, Result};
use crate::gf2::random::{error_with, permutation_with, random_bitvec};
use crate::gf2::{random_full_rank, random_matrix, BitMat, BitVec, Seed};
use crate::goppa::{GoppaCode, McElieceKeyPair};
use crate::qsim::{tv_distance, Basis, QuantumState, AMPLITUDE_TOL};
use crate::report::ExperimentReport;
use crate::schemes::{
    attacker_reduce_once, attacker_reduce_twice, once_decrypt, once_encrypt, phase_mask,
    twice_decrypt, twice_encrypt, TwiceKeyPair,
};

/// Kernel dimension above which the exhaustive replication needs an explicit
/// opt-in.
pub const LONG_RUN_DIMENSION: usize = 24;

/// The column fraction the small exhaustive experiment is compared against
/// at `n = 60, k = 30`.
pub const REFERENCE_LEADER_FRACTION: f64 = 0.02;

fn bits(v: &BitVec) -> String {
    v.to_string()
}

/// `count` distinct column indices out of `k`, ascending; all of them when
/// `count` is `None` or at least `k`.
fn sample_columns(k: usize, count: Option<usize>, seed: Seed) -> Vec<usize> {
    match count {
        Some(c) if c < k => {
            let mut picked = permutation_with(k, &mut seed.rng());
            picked.truncate(c);
            picked.sort_unstable();
            picked
        }
        _ => (0..k).collect(),
    }
}

/// Two-sided 95% Wilson score interval for `successes / trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + Z * Z / n;
    let centre = (p + Z * Z / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + Z * Z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

// ---------------------------------------------------------------------------
// bit recovery

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitRecoveryParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub search: SearchConfig,
    pub trials: usize,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRecovery {
    pub column: usize,
    pub weight: usize,
    pub predicted: f64,
    pub empirical: f64,
    pub sigma: f64,
    /// `(empirical - predicted) / sigma`; zero when both are certain.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitRecoveryResults {
    pub kernel_dimension: usize,
    pub columns: Vec<ColumnRecovery>,
    pub search_evaluations: u64,
    pub mean_weight: f64,
    pub mean_empirical_rate: f64,
    pub chi_squared: f64,
    pub degrees_of_freedom: usize,
    pub max_abs_z: f64,
}

/// Per-column success rate of `c·G⁻` over `trials` random `(m, e)` pairs,
/// next to the exact prediction from the column weights.
pub fn measure_bit_recovery(
    g: &BitMat,
    g_inv: &BitMat,
    t: usize,
    trials: usize,
    seed: Seed,
) -> Result<Vec<ColumnRecovery>> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    g.check_right_inverse(g_inv)?;
    let (k, n) = (g.rows(), g.cols());
    if t > n {
        return Err(Error::param(format!("error weight {t} exceeds length {n}")));
    }
    let correct: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Vec<usize>> {
            let mut rng = seed.derive(trial as u64).rng();
            let m = random_bitvec(k, &mut rng);
            let e = error_with(n, t, &mut rng)?;
            let c = g.vec_mul(&m)?.xor(&e)?;
            let hits = classical_attack(&c, g_inv)?.xor(&m)?;
            Ok((0..k).map(|i| usize::from(!hits.get(i))).collect())
        })
        .try_reduce(
            || vec![0; k],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    (0..k)
        .map(|i| {
            let weight = g_inv.column(i).weight();
            let predicted = parity_zero_prob(n, t, weight)?.probability;
            let empirical = correct[i] as f64 / trials as f64;
            let sigma = (predicted * (1.0 - predicted) / trials as f64).sqrt();
            let z = if sigma > 0.0 {
                (empirical - predicted) / sigma
            } else if empirical == predicted {
                0.0
            } else {
                f64::INFINITY
            };
            Ok(ColumnRecovery {
                column: i,
                weight,
                predicted,
                empirical,
                sigma,
                z,
            })
        })
        .collect()
}

/// Random full-rank instance, per-column coset search, then Monte Carlo of
/// the classical attack with the assembled right inverse.
pub fn bit_recovery_experiment(
    params: BitRecoveryParams,
) -> Result<ExperimentReport<BitRecoveryParams, BitRecoveryResults>> {
    ExperimentReport::run("bit_recovery", params, |p| {
        if p.k == 0 || p.k > p.n {
            return Err(Error::param(format!("need 1 <= k <= n (k={}, n={})", p.k, p.n)));
        }
        let g = random_full_rank(p.k, p.n, p.seed.derive(0))?;
        let attack = RightInverseAttack::new(g)?;
        let search_seed = p.seed.derive(1);
        let outcomes: Vec<SearchOutcome> = (0..p.k)
            .into_par_iter()
            .map(|i| attack.search(i, &p.search, search_seed.derive(i as u64)))
            .collect::<Result<_>>()?;
        let g_inv = attack.assemble_inverse(&outcomes)?;
        let columns = measure_bit_recovery(attack.generator(), &g_inv, p.t, p.trials, p.seed.derive(2))?;

        let finite: Vec<f64> = columns.iter().filter(|c| c.sigma > 0.0).map(|c| c.z).collect();
        let kf = p.k as f64;
        Ok(BitRecoveryResults {
            kernel_dimension: attack.kernel_basis().len(),
            search_evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
            mean_weight: columns.iter().map(|c| c.weight as f64).sum::<f64>() / kf,
            mean_empirical_rate: columns.iter().map(|c| c.empirical).sum::<f64>() / kf,
            chi_squared: finite.iter().map(|z| z * z).sum(),
            degrees_of_freedom: finite.len(),
            max_abs_z: columns.iter().map(|c| c.z.abs()).fold(0.0, f64::max),
            columns,
        })
    })
}

// ---------------------------------------------------------------------------
// small exhaustive replication

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallExhaustiveParams {
    pub n: usize,
    pub k: usize,
    /// Number of sampled columns; all `k` when absent.
    pub columns: Option<usize>,
    pub seed: Seed,
    pub allow_long: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnLeader {
    pub column: usize,
    pub initial_weight: usize,
    pub leader_weight: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallExhaustiveResults {
    pub kernel_dimension: usize,
    /// "fraction of columns of one random instance", the ensemble used here.
    pub ensemble: String,
    pub columns: Vec<ColumnLeader>,
    /// Count of leader weights, indexed by weight.
    pub weight_histogram: Vec<usize>,
    pub count_at_most_one: usize,
    pub fraction_at_most_one: f64,
    pub wilson_95: (f64, f64),
    /// Set only at `n = 60, k = 30`.
    pub reference_fraction: Option<f64>,
    pub target_in_interval: Option<bool>,
}

/// Exact coset-leader weights for sampled columns of a random `k × n`
/// instance.
pub fn replicate_small_exhaustive(
    params: SmallExhaustiveParams,
) -> Result<ExperimentReport<SmallExhaustiveParams, SmallExhaustiveResults>> {
    replicate_small_exhaustive_resumable(params, &[], |_| {})
}

/// As [`replicate_small_exhaustive`], skipping columns already present in
/// `done` and reporting each finished batch to `checkpoint` in column order.
pub fn replicate_small_exhaustive_resumable<F>(
    params: SmallExhaustiveParams,
    done: &[ColumnLeader],
    mut checkpoint: F,
) -> Result<ExperimentReport<SmallExhaustiveParams, SmallExhaustiveResults>>
where
    F: FnMut(&[ColumnLeader]),
{
    ExperimentReport::run("replicate_small_exhaustive", params, |p| {
        if p.k == 0 || p.k > p.n {
            return Err(Error::param(format!("need 1 <= k <= n (k={}, n={})", p.k, p.n)));
        }
        let d = p.n - p.k;
        if d > super::search::DEFAULT_EXHAUSTIVE_CAP {
            return Err(Error::CapExceeded {
                what: "exhaustive kernel dimension",
                requested: d,
                cap: super::search::DEFAULT_EXHAUSTIVE_CAP,
            });
        }
        if d > LONG_RUN_DIMENSION && !p.allow_long {
            return Err(Error::CapExceeded {
                what: "exhaustive kernel dimension without the long-run override",
                requested: d,
                cap: LONG_RUN_DIMENSION,
            });
        }
        let g = random_full_rank(p.k, p.n, p.seed.derive(0))?;
        let attack = RightInverseAttack::new(g)?;
        let wanted = sample_columns(p.k, p.columns, p.seed.derive(1));

        let mut finished: Vec<ColumnLeader> = done
            .iter()
            .filter(|c| wanted.binary_search(&c.column).is_ok())
            .copied()
            .collect();
        let pending: Vec<usize> = wanted
            .iter()
            .copied()
            .filter(|i| finished.iter().all(|c| c.column != *i))
            .collect();
        let config = SearchConfig::new(Strategy::Exhaustive);
        let batch = rayon::current_num_threads().max(1);
        for chunk in pending.chunks(batch) {
            let leaders: Vec<ColumnLeader> = chunk
                .par_iter()
                .map(|&i| {
                    let out = attack.search(i, &config, Seed(0))?;
                    Ok(ColumnLeader {
                        column: i,
                        initial_weight: attack.target(i).weight(),
                        leader_weight: out.best_weight,
                    })
                })
                .collect::<Result<_>>()?;
            checkpoint(&leaders);
            finished.extend(leaders);
        }
        finished.sort_by_key(|c| c.column);

        let mut weight_histogram = vec![0; p.n + 1];
        for c in &finished {
            weight_histogram[c.leader_weight] += 1;
        }
        let max_seen = finished.iter().map(|c| c.leader_weight).max().unwrap_or(0);
        weight_histogram.truncate(max_seen + 1);
        let count = finished.iter().filter(|c| c.leader_weight <= 1).count();
        let total = finished.len();
        let wilson_95 = wilson_interval(count, total);
        let reference_fraction = (p.n == 60 && p.k == 30).then_some(REFERENCE_LEADER_FRACTION);
        Ok(SmallExhaustiveResults {
            kernel_dimension: d,
            ensemble: "columns of one random full-rank instance".into(),
            columns: finished,
            weight_histogram,
            count_at_most_one: count,
            fraction_at_most_one: count as f64 / total as f64,
            wilson_95,
            reference_fraction,
            target_in_interval: reference_fraction.map(|t| wilson_95.0 <= t && t <= wilson_95.1),
        })
    })
}

// ---------------------------------------------------------------------------
// greedy replication on a real key

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyFullParams {
    pub m: u32,
    pub t: usize,
    /// Number of sampled columns; all `k` when absent.
    pub columns: Option<usize>,
    pub restarts: usize,
    pub seed: Seed,
}

impl GreedyFullParams {
    /// `m = 10, t = 50`, fifty columns, one restart.
    pub fn reference(seed: Seed) -> Self {
        GreedyFullParams {
            m: 10,
            t: 50,
            columns: Some(50),
            restarts: 1,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyColumn {
    pub column: usize,
    pub initial_weight: usize,
    pub weight: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyFullResults {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub field_polynomial: u32,
    pub columns: Vec<GreedyColumn>,
    pub mean_initial_weight: f64,
    pub mean_weight: f64,
    pub stddev_weight: f64,
    pub min_weight: usize,
    pub max_weight: usize,
    pub rounded_mean_weight: usize,
    pub parity_at_mean: ParityProbability,
}

/// Greedy coset search on sampled columns of a real McEliece public key.
pub fn replicate_greedy_full(
    params: GreedyFullParams,
) -> Result<ExperimentReport<GreedyFullParams, GreedyFullResults>> {
    ExperimentReport::run("replicate_greedy_full", params, |p| {
        let code = GoppaCode::generate(p.m, p.t, p.seed.derive(0))?;
        let field_polynomial = code.field().reduction_polynomial();
        let keys = McElieceKeyPair::generate(code, p.seed.derive(1))?;
        let public = keys.public();
        let attack = RightInverseAttack::new(public.g.clone())?;
        let wanted = sample_columns(public.k(), p.columns, p.seed.derive(2));
        let mut config = SearchConfig::new(Strategy::Greedy);
        config.restarts = p.restarts;
        let search_seed = p.seed.derive(3);
        let columns: Vec<GreedyColumn> = wanted
            .par_iter()
            .map(|&i| {
                let out = attack.search(i, &config, search_seed.derive(i as u64))?;
                Ok(GreedyColumn {
                    column: i,
                    initial_weight: attack.target(i).weight(),
                    weight: out.best_weight,
                    evaluations: out.evaluations,
                })
            })
            .collect::<Result<_>>()?;
        if columns.is_empty() {
            return Err(Error::param("no columns sampled"));
        }

        let count = columns.len() as f64;
        let mean = columns.iter().map(|c| c.weight as f64).sum::<f64>() / count;
        let var = if columns.len() > 1 {
            columns.iter().map(|c| (c.weight as f64 - mean).powi(2)).sum::<f64>() / (count - 1.0)
        } else {
            0.0
        };
        let rounded = mean.round() as usize;
        Ok(GreedyFullResults {
            n: public.n(),
            k: public.k(),
            t: public.t,
            field_polynomial,
            mean_initial_weight: columns.iter().map(|c| c.initial_weight as f64).sum::<f64>() / count,
            mean_weight: mean,
            stddev_weight: var.sqrt(),
            min_weight: columns.iter().map(|c| c.weight).min().unwrap_or(0),
            max_weight: columns.iter().map(|c| c.weight).max().unwrap_or(0),
            rounded_mean_weight: rounded,
            parity_at_mean: parity_zero_prob(public.n(), public.t, rounded)?,
            columns,
        })
    })
}

// ---------------------------------------------------------------------------
// measurement-distribution attack

#[derive(Debug, Clone, Copy)]
pub enum SchemeKeys<'a> {
    Once(&'a McElieceKeyPair),
    Twice(&'a TwiceKeyPair),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Once,
    Twice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionParams {
    pub scheme: SchemeKind,
    pub k: usize,
    pub n: usize,
    pub n2: Option<usize>,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionResults {
    /// `e·G⁻` from the recorded error, as a bit string.
    pub bit_mask: String,
    /// `G·(e₂G₂⁻)ᵀ` for the twice scheme, zero for the once scheme.
    pub phase_mask: String,
    pub tv_computational: f64,
    pub tv_hadamard: f64,
    pub tv_computational_after_shift: f64,
    pub tv_hadamard_after_shift: f64,
    /// Masks `r` with `p_reduced[x] = p_ψ[x ⊕ r]` (up to 1e-12).
    pub computational_aligning_shifts: Vec<u64>,
    pub hadamard_aligning_shifts: Vec<u64>,
    /// `F(e·G⁻)` of the message state.
    pub fidelity_bit_mask: f64,
    /// `|⟨ψ|reduced⟩|`.
    pub fidelity_reduced: f64,
    /// Max amplitude deviation from the oracle `X(e·G⁻)Z(s)ψ`, after fixing
    /// the global phase.
    pub oracle_deviation: f64,
    pub oracle_matches: bool,
    pub round_trip_fidelity: f64,
}

/// Random member of the right-inverse family of `g`.
fn sampled_inverse(g: &BitMat, seed: Seed) -> Result<BitMat> {
    let base = g.right_inverse()?;
    let u = random_matrix(g.cols(), g.rows(), seed);
    g.right_inverse_member(&base, &u)
}

/// Encrypts `psi`, runs the attacker's reduction with sampled right inverses
/// and compares measurement statistics with those of `psi` in both bases.
pub fn distribution_attack_experiment(
    keys: SchemeKeys<'_>,
    psi: &QuantumState,
    seed: Seed,
) -> Result<ExperimentReport<DistributionParams, DistributionResults>> {
    let params = match keys {
        SchemeKeys::Once(kp) => DistributionParams {
            scheme: SchemeKind::Once,
            k: kp.public().k(),
            n: kp.public().n(),
            n2: None,
            seed,
        },
        SchemeKeys::Twice(kp) => DistributionParams {
            scheme: SchemeKind::Twice,
            k: kp.first.public().k(),
            n: kp.first.public().n(),
            n2: Some(kp.second.public().n()),
            seed,
        },
    };
    ExperimentReport::run("distribution_attack", params, |p| {
        let g = match keys {
            SchemeKeys::Once(kp) => &kp.public().g,
            SchemeKeys::Twice(kp) => &kp.first.public().g,
        };
        let g_inv = sampled_inverse(g, p.seed.derive(1))?;
        let (reduced, r, s, round_trip) = match keys {
            SchemeKeys::Once(kp) => {
                let rec = once_encrypt(kp.public(), psi, p.seed.derive(0))?;
                let reduced = attacker_reduce_once(&rec.state, &g_inv)?;
                let r = rec.e.clone();
                let back = once_decrypt(kp, &rec.state)?;
                (reduced, r, BitVec::zeros(p.k), back.fidelity(psi)?)
            }
            SchemeKeys::Twice(kp) => {
                let rec = twice_encrypt(&kp.public(), psi, p.seed.derive(0))?;
                let g2_inv = sampled_inverse(&kp.second.public().g, p.seed.derive(2))?;
                let reduced = attacker_reduce_twice(&rec.state, &g2_inv, &g_inv)?;
                let e2 = rec.e2.as_ref().expect("twice cipher records e2");
                let s = phase_mask(g, &g2_inv.vec_mul(e2)?)?;
                let back = twice_decrypt(kp, &rec.state)?;
                (reduced, rec.e.clone(), s, back.fidelity(psi)?)
            }
        };
        let bit_mask = g_inv.vec_mul(&r)?;
        let oracle = psi.apply_z_mask(&s)?.apply_x_mask(&bit_mask)?;
        let oracle_deviation = reduced.max_diff_up_to_global_phase(&oracle)?;

        let (rc, rh) = (
            reduced.measure_distribution(Basis::Computational),
            reduced.measure_distribution(Basis::HadamardAll),
        );
        let (pc, ph) = (
            psi.measure_distribution(Basis::Computational),
            psi.measure_distribution(Basis::HadamardAll),
        );
        let (rm, sm) = (bit_mask.to_index()?, s.to_index()?);
        Ok(DistributionResults {
            bit_mask: bits(&bit_mask),
            phase_mask: bits(&s),
            tv_computational: tv_distance(&rc, &pc)?,
            tv_hadamard: tv_distance(&rh, &ph)?,
            tv_computational_after_shift: tv_distance(&rc, &pc.shifted(rm))?,
            tv_hadamard_after_shift: tv_distance(&rh, &ph.shifted(sm))?,
            computational_aligning_shifts: rc.aligning_shifts(&pc, AMPLITUDE_TOL)?,
            hadamard_aligning_shifts: rh.aligning_shifts(&ph, AMPLITUDE_TOL)?,
            fidelity_bit_mask: psi.fidelity_mask(&bit_mask)?,
            fidelity_reduced: reduced.fidelity(psi)?,
            oracle_matches: oracle_deviation <= AMPLITUDE_TOL,
            oracle_deviation,
            round_trip_fidelity: round_trip,
        })
    })
}
