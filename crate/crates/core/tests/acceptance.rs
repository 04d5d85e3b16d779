//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Set `QMCE_ACCEPT_LONG=1` to add the full `n = 60, k = 30` exhaustive run
//! to criterion 12 (about a minute per 30 columns with optimizations).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use qmce_core::attacks::experiments::{
    bit_recovery_experiment, distribution_attack_experiment, replicate_greedy_full,
    replicate_small_exhaustive, BitRecoveryParams, GreedyFullParams, SchemeKeys,
    SmallExhaustiveParams,
};
use qmce_core::attacks::{parity_zero_prob, RightInverseAttack, SearchConfig, Strategy};
use qmce_core::gf2::{random_error, random_full_rank, random_matrix, random_vector};
use qmce_core::goppa::{encrypt, GoppaCode, McElieceKeyPair};
use qmce_core::qsim::{Basis, QuantumState};
use qmce_core::schemes::{
    attacker_reduce_once, attacker_reduce_twice, once_encrypt, phase_mask, toy_keypair,
    toy_twice_keypair, twice_decrypt, twice_encrypt,
};
use qmce_core::{BitMat, BitVec, Seed};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Random member of the right-inverse family of `g`.
fn sampled_inverse(g: &BitMat, seed: Seed) -> Result<BitMat, String> {
    let base = g.right_inverse().map_err(e2s)?;
    let u = random_matrix(g.cols(), g.rows(), seed);
    g.right_inverse_member(&base, &u).map_err(e2s)
}

/// Minimum weight of `x` with `G·x = unit(i)` by enumerating supports of
/// increasing size. Shares no code with the kernel-basis searches.
fn naive_min_weight(g: &BitMat, i: usize) -> usize {
    assert!(g.rows() <= 64);
    let cols: Vec<u64> = (0..g.cols())
        .map(|j| (0..g.rows()).filter(|&r| g.get(r, j)).fold(0u64, |a, r| a | 1 << r))
        .collect();
    let target = 1u64 << i;

    fn hit(cols: &[u64], start: usize, left: usize, acc: u64, target: u64) -> bool {
        if left == 0 {
            return acc == target;
        }
        (start..=cols.len() - left).any(|j| hit(cols, j + 1, left - 1, acc ^ cols[j], target))
    }

    (0..=g.cols())
        .find(|&w| hit(&cols, 0, w, 0, target))
        .expect("a right inverse exists")
}

fn c1_full_size_round_trip() -> Outcome {
    let start = Instant::now();
    let code = GoppaCode::generate(10, 50, Seed(1)).map_err(e2s)?;
    let keys = McElieceKeyPair::generate(code, Seed(2)).map_err(e2s)?;
    let (n, k) = (keys.public().n(), keys.public().k());
    ensure(n == 1024 && k >= 524, || format!("n={n}, k={k}"))?;
    for i in 0..20 {
        let m = random_vector(k, Seed(100 + i));
        let (c, _) = encrypt(keys.public(), &m, Seed(200 + i)).map_err(e2s)?;
        let back = keys.decrypt(&c).map_err(e2s)?;
        ensure(back == m, || format!("message {i} did not round-trip"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("n={n} k={k} t=50, 20/20 messages, {elapsed:.2?}"))
}

fn c2_right_inverse_family() -> Outcome {
    let mut rng = Seed(2).rng();
    for trial in 0..100u64 {
        let k = rng.random_range(1..=32);
        let n = rng.random_range(k..=64);
        let g = random_full_rank(k, n, Seed(trial).derive(0)).map_err(e2s)?;
        let base = g.right_inverse().map_err(e2s)?;
        let u = random_matrix(n, k, Seed(trial).derive(1));
        let member = g.right_inverse_member(&base, &u).map_err(e2s)?;
        ensure(g.mul(&member).map_err(e2s)?.is_identity(), || {
            format!("trial {trial}: G·G⁻ != I at k={k}, n={n}")
        })?;
    }
    Ok("100/100 members satisfy G·G⁻ = I".into())
}

fn c3_operator_identity() -> Outcome {
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let q = (trial % 10 + 1) as usize;
        let psi = QuantumState::random_state(q, Seed(trial).derive(0)).map_err(e2s)?;
        let r = random_vector(q, Seed(trial).derive(1));
        let lhs = psi.hadamard_all().apply_x_mask(&r).map_err(e2s)?;
        let rhs = psi.apply_z_mask(&r).map_err(e2s)?.hadamard_all();
        worst = worst.max(lhs.max_abs_diff(&rhs).map_err(e2s)?);
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("200 cases, max amplitude error {worst:e}"))
}

fn c4_once_reduction() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for k in 3..=8 {
        for s in 0..5u64 {
            let seed = Seed(1000 * k as u64 + s);
            let keys = toy_keypair(k, 1, seed.derive(0)).map_err(e2s)?;
            let psi = QuantumState::random_state(k, seed.derive(1)).map_err(e2s)?;
            let rec = once_encrypt(keys.public(), &psi, seed.derive(2)).map_err(e2s)?;
            for u in 0..3 {
                let g_inv = sampled_inverse(&keys.public().g, seed.derive(3 + u))?;
                let reduced = attacker_reduce_once(&rec.state, &g_inv).map_err(e2s)?;
                let oracle = psi.apply_x_mask(&g_inv.vec_mul(&rec.e).map_err(e2s)?).map_err(e2s)?;
                worst = worst.max(reduced.max_abs_diff(&oracle).map_err(e2s)?);
                cases += 1;
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("{cases} cases over k=3..8, max error {worst:e}"))
}

fn c5_twice_reduction() -> Outcome {
    let mut worst = 0.0f64;
    let mut nonzero_phase = 0;
    for s in 0..50u64 {
        let seed = Seed(5000 + s);
        let k = 2 + (s % 3) as usize;
        let keys = toy_twice_keypair(k, 1, 1, seed.derive(0)).map_err(e2s)?;
        let psi = QuantumState::random_state(k, seed.derive(1)).map_err(e2s)?;
        let rec = twice_encrypt(&keys.public(), &psi, seed.derive(2)).map_err(e2s)?;
        let g = &keys.first.public().g;
        let g_inv = sampled_inverse(g, seed.derive(3))?;
        let g2_inv = sampled_inverse(&keys.second.public().g, seed.derive(4))?;
        let reduced = attacker_reduce_twice(&rec.state, &g2_inv, &g_inv).map_err(e2s)?;
        let e2 = rec.e2.as_ref().ok_or("missing e2")?;
        let s_mask = phase_mask(g, &g2_inv.vec_mul(e2).map_err(e2s)?).map_err(e2s)?;
        nonzero_phase += usize::from(!s_mask.is_zero());
        let r = g_inv.vec_mul(&rec.e).map_err(e2s)?;
        let oracle = psi.apply_z_mask(&s_mask).map_err(e2s)?.apply_x_mask(&r).map_err(e2s)?;
        worst = worst.max(reduced.max_diff_up_to_global_phase(&oracle).map_err(e2s)?);
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    ensure(nonzero_phase > 0, || "no case had a nonzero phase mask".into())?;
    Ok(format!("50 cases, max error up to phase {worst:e}, {nonzero_phase} with nonzero Z mask"))
}

fn c6_twice_round_trip() -> Outcome {
    let keys = toy_twice_keypair(3, 1, 1, Seed(6)).map_err(e2s)?;
    let mut worst = 1.0f64;
    for s in 0..50u64 {
        let psi = QuantumState::random_state(3, Seed(600 + s)).map_err(e2s)?;
        let rec = twice_encrypt(&keys.public(), &psi, Seed(700 + s)).map_err(e2s)?;
        let back = twice_decrypt(&keys, &rec.state).map_err(e2s)?;
        worst = worst.min(back.fidelity(&psi).map_err(e2s)?);
    }
    ensure(worst >= 1.0 - 1e-9, || format!("min fidelity {worst}"))?;
    Ok(format!("50 states, min fidelity {worst}"))
}

fn c7_fidelity_formula() -> Outcome {
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let q = (trial % 8 + 1) as usize;
        let psi = QuantumState::random_state(q, Seed(trial).derive(7)).map_err(e2s)?;
        let r = random_vector(q, Seed(trial).derive(8));
        let direct = psi.fidelity_mask(&r).map_err(e2s)?;
        let overlap = psi.fidelity(&psi.apply_x_mask(&r).map_err(e2s)?).map_err(e2s)?;
        worst = worst.max((direct - overlap).abs());
        let f0 = psi.fidelity_mask(&BitVec::zeros(q)).map_err(e2s)?;
        worst = worst.max((f0 - 1.0).abs());
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    let zero = QuantumState::basis_state(1, &BitVec::zeros(1)).map_err(e2s)?;
    let one = BitVec::from_bits([1u8]);
    ensure(zero.fidelity_mask(&BitVec::zeros(1)).map_err(e2s)? == 1.0, || "F(0) != 1 on |0>".into())?;
    ensure(zero.fidelity_mask(&one).map_err(e2s)? == 0.0, || "F(1) != 0 on |0>".into())?;
    Ok(format!("200 cases, max error {worst:e}; F(0)=1 and F=0 exact on |0>"))
}

fn c8_distribution_claims() -> Outcome {
    let mut cases = 0;
    for k in 3..=8usize {
        for s in 0..4u64 {
            let seed = Seed(800 + 10 * k as u64 + s);
            let keys = toy_keypair(k, 1, seed.derive(0)).map_err(e2s)?;
            let psi = QuantumState::random_state(k, seed.derive(1)).map_err(e2s)?;
            let rec = once_encrypt(keys.public(), &psi, seed.derive(2)).map_err(e2s)?;
            let g_inv = sampled_inverse(&keys.public().g, seed.derive(3))?;
            let reduced = attacker_reduce_once(&rec.state, &g_inv).map_err(e2s)?;
            let r = g_inv.vec_mul(&rec.e).map_err(e2s)?.to_index().map_err(e2s)?;
            let (rh, ph) = (
                reduced.measure_distribution(Basis::HadamardAll),
                psi.measure_distribution(Basis::HadamardAll),
            );
            ensure(rh.probabilities == ph.probabilities, || format!("k={k}: Hadamard tables differ"))?;
            let (rc, pc) = (
                reduced.measure_distribution(Basis::Computational),
                psi.measure_distribution(Basis::Computational),
            );
            ensure(rc.probabilities == pc.shifted(r).probabilities, || {
                format!("k={k}: computational tables differ after the shift")
            })?;
            cases += 1;
        }
    }
    let keys = toy_keypair(4, 1, Seed(88)).map_err(e2s)?;
    let psi = QuantumState::random_state(4, Seed(89)).map_err(e2s)?;
    let rep = distribution_attack_experiment(SchemeKeys::Once(&keys), &psi, Seed(90)).map_err(e2s)?;
    ensure(rep.results.tv_hadamard == 0.0, || format!("tv {}", rep.results.tv_hadamard))?;
    Ok(format!("{cases} reduced states: Hadamard tables identical, computational tables equal after ⊕eG⁻"))
}

fn c9_coset_search() -> Outcome {
    let mut total_cols = 0;
    for inst in 0..50u64 {
        let n = 8 + (inst % 17) as usize;
        let k = (n / 2).max(1);
        let g = random_full_rank(k, n, Seed(inst).derive(9)).map_err(e2s)?;
        let attack = RightInverseAttack::new(g.clone()).map_err(e2s)?;
        let mut random = SearchConfig::new(Strategy::Random);
        random.budget = 64;
        let mut greedy = SearchConfig::new(Strategy::Greedy);
        greedy.restarts = 2;
        for i in 0..k {
            let ex = attack.search(i, &SearchConfig::new(Strategy::Exhaustive), Seed(0)).map_err(e2s)?;
            let naive = naive_min_weight(&g, i);
            ensure(ex.best_weight == naive, || {
                format!("instance {inst} column {i}: exhaustive {} vs naive {naive}", ex.best_weight)
            })?;
            for cfg in [&random, &greedy] {
                let out = attack.search(i, cfg, Seed(inst * 100 + i as u64)).map_err(e2s)?;
                ensure(out.best_weight >= ex.best_weight, || {
                    format!("{} beat exhaustive on instance {inst}", cfg.strategy)
                })?;
                ensure(attack.in_coset(i, &out.best_candidate).map_err(e2s)?, || "left the coset".into())?;
            }
            total_cols += 1;
        }
    }
    Ok(format!("50 instances (n=8..24), {total_cols} columns match the naive enumerator"))
}

fn c10_parity() -> Outcome {
    let mut checked = 0;
    for n in 1..=16usize {
        // weight-t patterns of length n, grouped by t
        let mut even = vec![vec![0u64; n + 1]; n + 1];
        let mut total = vec![0u64; n + 1];
        for e in 0u32..1 << n {
            let t = e.count_ones() as usize;
            total[t] += 1;
            for (w, row) in even[t].iter_mut().enumerate() {
                let v = (1u32 << w) - 1;
                if (e & v).count_ones().is_multiple_of(2) {
                    *row += 1;
                }
            }
        }
        for (t, row) in even.iter().enumerate() {
            for (w, &count) in row.iter().enumerate() {
                let p = parity_zero_prob(n, t, w).map_err(e2s)?;
                let lhs = &p.numerator * BigUint::from(total[t]);
                let rhs = &p.denominator * BigUint::from(count);
                ensure(lhs == rhs, || format!("mismatch at n={n} t={t} w={w}"))?;
                checked += 1;
            }
        }
    }

    let (n, t, draws) = (64usize, 6usize, 1_000_000u64);
    let mut worst_z = 0.0f64;
    for w in [1usize, 3, 10, 32] {
        let v = BitVec::from_bits((0..n).map(|i| u8::from(i < w)));
        let mut zero = 0u64;
        for d in 0..draws {
            let e = random_error(n, t, Seed(w as u64).derive(d)).map_err(e2s)?;
            zero += u64::from(!e.dot(&v).map_err(e2s)?);
        }
        let p = parity_zero_prob(n, t, w).map_err(e2s)?.probability;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        let z = (zero as f64 / draws as f64 - p) / sigma;
        ensure(z.abs() <= 3.0, || format!("w={w}: z={z:.2}"))?;
        worst_z = worst_z.max(z.abs());
    }

    let delta = parity_zero_prob(1024, 50, 225).map_err(e2s)?.delta_from_half;
    ensure((1e-15..=1e-12).contains(&delta), || format!("delta {delta:e}"))?;
    Ok(format!(
        "{checked} exact cases match enumeration; MC max |z|={worst_z:.2}; delta(1024,50,225)={delta:.3e}"
    ))
}

fn c11_greedy_full_size() -> Outcome {
    let start = Instant::now();
    let rep = replicate_greedy_full(GreedyFullParams::reference(Seed(11))).map_err(e2s)?;
    let r = &rep.results;
    let elapsed = start.elapsed();
    ensure(r.columns.len() >= 50, || format!("{} columns", r.columns.len()))?;
    ensure((190.0..=260.0).contains(&r.mean_weight), || format!("mean weight {}", r.mean_weight))?;
    ensure(elapsed <= Duration::from_secs(1800), || format!("took {elapsed:?}"))?;
    let delta = r.parity_at_mean.delta_from_half;
    ensure((1e-16..=1e-11).contains(&delta), || format!("delta {delta:e}"))?;
    Ok(format!(
        "k={}, {} columns, mean weight {:.2} (sd {:.2}), delta at mean {delta:.2e}, {elapsed:.2?}",
        r.k,
        r.columns.len(),
        r.mean_weight,
        r.stddev_weight
    ))
}

fn c12_exhaustive_replication() -> Outcome {
    // scaled run, every leader weight checked by the independent enumerator
    let params = SmallExhaustiveParams {
        n: 40,
        k: 20,
        columns: None,
        seed: Seed(12),
        allow_long: false,
    };
    let rep = replicate_small_exhaustive(params).map_err(e2s)?;
    let g = random_full_rank(20, 40, Seed(12).derive(0)).map_err(e2s)?;
    for c in &rep.results.columns {
        let naive = naive_min_weight(&g, c.column);
        ensure(naive == c.leader_weight, || {
            format!("column {}: {} vs naive {naive}", c.column, c.leader_weight)
        })?;
    }
    let r = &rep.results;
    let mut detail = format!(
        "scaled n=40,k=20: {}/{} columns with leader weight <= 1 (fraction {}, 95% CI [{:.3}, {:.3}]), all 20 leaders oracle-verified",
        r.count_at_most_one,
        r.columns.len(),
        r.fraction_at_most_one,
        r.wilson_95.0,
        r.wilson_95.1
    );
    if std::env::var_os("QMCE_ACCEPT_LONG").is_some() {
        let full = replicate_small_exhaustive(SmallExhaustiveParams {
            n: 60,
            k: 30,
            columns: None,
            seed: Seed(2024),
            allow_long: true,
        })
        .map_err(e2s)?;
        let f = &full.results;
        ensure(f.target_in_interval == Some(true), || {
            format!("0.02 outside the 95% CI [{:.3}, {:.3}]", f.wilson_95.0, f.wilson_95.1)
        })?;
        detail.push_str(&format!(
            "; gated n=60,k=30: {}/{} (95% CI [{:.3}, {:.3}] contains 0.02)",
            f.count_at_most_one,
            f.columns.len(),
            f.wilson_95.0,
            f.wilson_95.1
        ));
    } else {
        detail.push_str("; n=60,k=30 run gated behind QMCE_ACCEPT_LONG");
    }
    Ok(detail)
}

fn c13_reproducibility() -> Outcome {
    let same = |a: String, b: String, what: &str| ensure(a == b, || format!("{what} differs between runs"));

    let bit = || {
        let mut search = SearchConfig::new(Strategy::Greedy);
        search.restarts = 2;
        bit_recovery_experiment(BitRecoveryParams { n: 40, k: 20, t: 4, search, trials: 2000, seed: Seed(13) })
            .map_err(e2s).and_then(|r| r.results_json().map_err(e2s))
    };
    same(bit()?, bit()?, "bit_recovery")?;

    let small = || {
        replicate_small_exhaustive(SmallExhaustiveParams { n: 24, k: 12, columns: None, seed: Seed(13), allow_long: false })
            .map_err(e2s).and_then(|r| r.results_json().map_err(e2s))
    };
    same(small()?, small()?, "replicate_small_exhaustive")?;

    let greedy = || replicate_greedy_full(GreedyFullParams::reference(Seed(13))).map_err(e2s).and_then(|r| r.results_json().map_err(e2s));
    same(greedy()?, greedy()?, "replicate_greedy_full")?;

    let keys = toy_twice_keypair(3, 1, 1, Seed(13)).map_err(e2s)?;
    let psi = QuantumState::random_state(3, Seed(14)).map_err(e2s)?;
    let dist = || {
        distribution_attack_experiment(SchemeKeys::Twice(&keys), &psi, Seed(15)).map_err(e2s).and_then(|r| r.results_json().map_err(e2s))
    };
    same(dist()?, dist()?, "distribution_attack")?;
    Ok("4 experiments re-run with identical results sections".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("McEliece round-trip at m=10, t=50", c1_full_size_round_trip),
        ("right-inverse family G·G⁻ = I", c2_right_inverse_family),
        ("X(r)H = HZ(r) operator identity", c3_operator_identity),
        ("once-scheme reduction oracle", c4_once_reduction),
        ("twice-scheme reduction oracle", c5_twice_reduction),
        ("twice-encryption round-trip", c6_twice_round_trip),
        ("fidelity of a bit-flip mask", c7_fidelity_formula),
        ("measurement distribution claims", c8_distribution_claims),
        ("coset search correctness", c9_coset_search),
        ("parity probability", c10_parity),
        ("greedy replication at n=1024", c11_greedy_full_size),
        ("exhaustive leader replication", c12_exhaustive_replication),
        ("reproducibility", c13_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
