use proptest::prelude::*;
use qmce_core::gf2::{random_full_rank, random_matrix, random_vector};
use qmce_core::goppa::PublicKey;
use qmce_core::qsim::{tv_distance, Basis, QuantumState};
use qmce_core::schemes::{
    attacker_reduce_once, attacker_reduce_twice, once_encrypt, phase_mask, toy_keypair,
    toy_twice_keypair, twice_decrypt, twice_encrypt, TwiceKeyPair, TwicePublicKey,
};
use qmce_core::{BitMat, BitVec, Error, Seed};

fn sampled_inverse(g: &BitMat, seed: Seed) -> BitMat {
    let base = g.right_inverse().unwrap();
    g.right_inverse_member(&base, &random_matrix(g.cols(), g.rows(), seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn once_reduction_leaves_only_a_bit_mask(k in 1usize..=4, seed in any::<u64>()) {
        let seed = Seed(seed);
        let keys = toy_keypair(k, 1, seed.derive(0)).unwrap();
        let psi = QuantumState::random_state(k, seed.derive(1)).unwrap();
        let cipher = once_encrypt(keys.public(), &psi, seed.derive(2)).unwrap();
        let g_inv = sampled_inverse(&keys.public().g, seed.derive(3));
        let reduced = attacker_reduce_once(&cipher.state, &g_inv).unwrap();
        let r = g_inv.vec_mul(&cipher.e).unwrap();
        let expected = psi.apply_x_mask(&r).unwrap();
        prop_assert!(reduced.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn twice_reduction_matches_mask_oracle(k in 1usize..=3, seed in any::<u64>()) {
        let seed = Seed(seed);
        let keys = toy_twice_keypair(k, 1, 1, seed.derive(0)).unwrap();
        let psi = QuantumState::random_state(k, seed.derive(1)).unwrap();
        let cipher = twice_encrypt(&keys.public(), &psi, seed.derive(2)).unwrap();
        let g = &keys.first.public().g;
        let g_inv = sampled_inverse(g, seed.derive(3));
        let g2_inv = sampled_inverse(&keys.second.public().g, seed.derive(4));
        let reduced = attacker_reduce_twice(&cipher.state, &g2_inv, &g_inv).unwrap();

        let r = g_inv.vec_mul(&cipher.e).unwrap();
        let r2 = g2_inv.vec_mul(cipher.e2.as_ref().unwrap()).unwrap();
        let s = phase_mask(g, &r2).unwrap();
        let expected = psi.apply_z_mask(&s).unwrap().apply_x_mask(&r).unwrap();
        prop_assert!(reduced.max_diff_up_to_global_phase(&expected).unwrap() < 1e-9);
        prop_assert!((reduced.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn masks_shift_but_never_reshape_distributions(q in 1usize..=6, seed in any::<u64>()) {
        let seed = Seed(seed);
        let psi = QuantumState::random_state(q, seed.derive(0)).unwrap();
        let r = random_vector(q, seed.derive(1));
        let s = random_vector(q, seed.derive(2));
        let masked = psi.apply_z_mask(&s).unwrap().apply_x_mask(&r).unwrap();

        let comp = psi.measure_distribution(Basis::Computational);
        let comp_masked = masked.measure_distribution(Basis::Computational);
        let r_idx = r.to_index().unwrap();
        prop_assert!(tv_distance(&comp.shifted(r_idx), &comp_masked).unwrap() < 1e-12);

        let had = psi.measure_distribution(Basis::HadamardAll);
        let had_masked = masked.measure_distribution(Basis::HadamardAll);
        let s_idx = s.to_index().unwrap();
        prop_assert!(tv_distance(&had.shifted(s_idx), &had_masked).unwrap() < 1e-12);
    }

    #[test]
    fn z_mask_is_invisible_in_computational_basis(q in 1usize..=6, seed in any::<u64>()) {
        let seed = Seed(seed);
        let psi = QuantumState::random_state(q, seed.derive(0)).unwrap();
        let z = psi.apply_z_mask(&random_vector(q, seed.derive(1))).unwrap();
        let d = tv_distance(
            &psi.measure_distribution(Basis::Computational),
            &z.measure_distribution(Basis::Computational),
        ).unwrap();
        prop_assert!(d < 1e-12);
    }

    #[test]
    fn hadamard_is_an_involution(q in 1usize..=7, seed in any::<u64>()) {
        let psi = QuantumState::random_state(q, Seed(seed)).unwrap();
        prop_assert!(psi.hadamard_all().hadamard_all().max_abs_diff(&psi).unwrap() < 1e-12);
    }
}

/// Twice chain whose outer code corrects two errors while encryption only
/// injects one, leaving room for a single tampered qubit.
fn roomy_chain(k: usize, seed: Seed) -> (TwiceKeyPair, TwicePublicKey) {
    let first = toy_keypair(k, 1, seed.derive(0)).unwrap();
    let second = toy_keypair(first.public().n(), 2, seed.derive(1)).unwrap();
    let keys = TwiceKeyPair::new(first, second).unwrap();
    let mut public = keys.public();
    public.second = PublicKey { g: public.second.g.clone(), t: 1 };
    (keys, public)
}

#[test]
fn tampered_qubit_within_capacity_still_decrypts() {
    for s in 0..6 {
        let seed = Seed(s);
        let (keys, public) = roomy_chain(2, seed);
        let psi = QuantumState::random_state(2, seed.derive(2)).unwrap();
        let cipher = twice_encrypt(&public, &psi, seed.derive(3)).unwrap();
        let n2 = cipher.state.num_qubits();
        let mut flip = BitVec::zeros(n2);
        flip.set(n2 / 2, true);
        let tampered = cipher.state.apply_x_mask(&flip).unwrap();
        let back = twice_decrypt(&keys, &tampered).unwrap();
        assert!(back.fidelity(&psi).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn tampering_beyond_capacity_surfaces_decoding_failures() {
    // Three flips on top of e2 exceed t2 = 1. A miscorrection may still land
    // on some codeword, but the decoder must report failure at least some of
    // the time instead of always returning a state.
    let mut loud = 0;
    for s in 0..6 {
        let seed = Seed(100 + s);
        let keys = toy_twice_keypair(2, 1, 1, seed).unwrap();
        let psi = QuantumState::random_state(2, seed.derive(2)).unwrap();
        let cipher = twice_encrypt(&keys.public(), &psi, seed.derive(3)).unwrap();
        let n2 = cipher.state.num_qubits();
        let mut flip = BitVec::zeros(n2);
        for j in [0, n2 / 3, 2 * n2 / 3] {
            flip.set(j, true);
        }
        match twice_decrypt(&keys, &cipher.state.apply_x_mask(&flip).unwrap()) {
            Err(Error::DecodingFailure(_)) => loud += 1,
            Err(other) => panic!("unexpected error {other}"),
            Ok(state) => assert!((state.norm() - 1.0).abs() < 1e-9),
        }
    }
    assert!(loud > 0);
}

#[test]
fn random_generator_right_inverses_cover_the_family() {
    let g = random_full_rank(4, 9, Seed(5)).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for s in 0..64 {
        let inv = sampled_inverse(&g, Seed(s));
        assert!(g.mul(&inv).unwrap().is_identity());
        seen.insert(format!("{inv:?}"));
    }
    assert!(seen.len() > 32);
}
