//! Property tests for the structural invariants: channel algebra,
//! trajectory reconstruction, projection idempotence, and bit-string
//! combinatorics over randomized inputs.

use num_complex::Complex64;
use phasecode::{
    bits::{jump_selector, BitString},
    decompose, DensityMatrix, PhaseDamping, QState,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_state(width: u32, seed: u64) -> QState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QState::random(width, &mut rng).unwrap()
}

/// Convex mixture of a few random pure states; a generic mixed state.
fn random_mixed(width: u32, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << width;
    let mut entries = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for w in [0.5, 0.3, 0.2] {
        let psi = QState::random(width, &mut rng).unwrap();
        let rho = psi.to_density().unwrap();
        entries = entries + rho.entries().mapv(|z| z * w);
    }
    DensityMatrix::new(width, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_weight_of_xor(a in 0u32..(1 << 16), b in 0u32..(1 << 16)) {
        let ba = BitString::new(a, 16).unwrap();
        let bb = BitString::new(b, 16).unwrap();
        let x = BitString::new(a ^ b, 16).unwrap();
        prop_assert_eq!(ba.distance(&bb).unwrap(), x.weight());
        prop_assert_eq!(ba.distance(&bb).unwrap(), bb.distance(&ba).unwrap());
    }

    #[test]
    fn selector_requires_containment(n in 0u32..256, b in 0u32..256) {
        let nb = BitString::new(n, 8).unwrap();
        let bb = BitString::new(b, 8).unwrap();
        let selected = jump_selector(&nb, &bb).unwrap();
        prop_assert_eq!(selected, n != 0 && (n & !b) == 0);
        if selected {
            prop_assert_eq!(nb.and(&bb).unwrap().weight(), nb.weight());
        }
    }

    #[test]
    fn density_trace_equals_squared_norm(width in 1u32..=6, seed in any::<u64>(), scale in 0.1f64..3.0) {
        let psi = random_state(width, seed);
        let scaled = QState::new(
            width,
            psi.amps().iter().map(|z| z * scale).collect(),
        ).unwrap();
        let rho = scaled.to_density().unwrap();
        prop_assert!((rho.trace_real() - scaled.norm_sq()).abs() < 1e-10);
    }

    #[test]
    fn phase_damping_composes_additively(
        width in 1u32..=4,
        seed in any::<u64>(),
        l1 in 0.0f64..2.0,
        l2 in 0.0f64..2.0,
    ) {
        let rho = random_mixed(width, seed);
        let once = PhaseDamping::new(l1 + l2, width).unwrap().apply(&rho).unwrap();
        let twice = PhaseDamping::new(l2, width).unwrap()
            .apply(&PhaseDamping::new(l1, width).unwrap().apply(&rho).unwrap())
            .unwrap();
        prop_assert!(once.max_abs_diff(&twice) < 1e-12);
    }

    #[test]
    fn phase_damping_preserves_diagonal_and_structure(
        width in 1u32..=4,
        seed in any::<u64>(),
        lambda in 0.0f64..4.0,
    ) {
        let rho = random_mixed(width, seed);
        let out = PhaseDamping::new(lambda, width).unwrap().apply(&rho).unwrap();
        for i in 0..rho.dim() {
            prop_assert!((out.entry(i, i) - rho.entry(i, i)).norm() < 1e-12);
        }
        prop_assert!(out.is_hermitian(1e-12));
        prop_assert!((out.trace_real() - rho.trace_real()).abs() < 1e-12);
        let min_eig = out.eigenvalues()[0];
        prop_assert!(min_eig >= -1e-10);
    }

    #[test]
    fn reconstruction_matches_channel(
        width in 1u32..=5,
        seed in any::<u64>(),
        lambda_idx in 0usize..4,
    ) {
        let lambda = [0.01, 0.1, 1.0, 5.0][lambda_idx];
        let psi = random_state(width, seed);
        let ens = decompose(&psi, lambda).unwrap();
        let gram = ens.reconstruct().unwrap();
        let damped = PhaseDamping::new(lambda, width).unwrap()
            .apply(&psi.to_density().unwrap())
            .unwrap();
        prop_assert!(gram.max_abs_diff(&damped) < 1e-10);
    }

    #[test]
    fn branch_weights_form_a_distribution(
        width in 1u32..=5,
        seed in any::<u64>(),
        lambda in 0.0f64..3.0,
    ) {
        let psi = random_state(width, seed);
        let ens = decompose(&psi, lambda).unwrap();
        let weights = ens.weights();
        let total: f64 = weights.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for w in weights {
            prop_assert!(w >= 0.0);
        }
    }

    #[test]
    fn project_keep_idempotent_and_contractive(
        width in 1u32..=4,
        seed in any::<u64>(),
        mask in 1u32..16,
    ) {
        let rho = random_mixed(width, seed);
        let dim = 1u32 << width;
        let keep: Vec<BitString> = (0..dim)
            .filter(|i| (mask >> (i % 4)) & 1 == 1)
            .map(|i| BitString::new(i, width).unwrap())
            .collect();
        prop_assume!(!keep.is_empty());
        let once = rho.project_keep(&keep).unwrap();
        let twice = once.project_keep(&keep).unwrap();
        prop_assert!(once.max_abs_diff(&twice) < 1e-12);
        prop_assert!(once.trace_real() <= rho.trace_real() + 1e-12);
    }

    #[test]
    fn overlap_probability_bounded(
        width in 1u32..=4,
        seed in any::<u64>(),
        lambda in 0.0f64..2.0,
    ) {
        let rho = PhaseDamping::new(lambda, width).unwrap()
            .apply(&random_mixed(width, seed))
            .unwrap();
        let alpha = random_state(width, seed.wrapping_add(1));
        let p = rho.overlap_probability(&alpha).unwrap();
        prop_assert!(p >= -1e-12);
        prop_assert!(p <= 1.0 + 1e-12);
    }

    #[test]
    fn overlap_additivity_over_branches(
        width in 1u32..=4,
        seed in any::<u64>(),
        lambda in 0.0f64..2.0,
    ) {
        let psi = random_state(width, seed);
        let alpha = random_state(width, seed.wrapping_add(7));
        let ens = decompose(&psi, lambda).unwrap();
        let via_branches: f64 = ens
            .branches()
            .iter()
            .map(|b| b.overlap(&alpha).norm_sqr())
            .sum();
        let rho = PhaseDamping::new(lambda, width).unwrap()
            .apply(&psi.to_density().unwrap())
            .unwrap();
        let via_density = rho.overlap_probability(&alpha).unwrap();
        prop_assert!((via_branches - via_density).abs() < 1e-10);
    }
}
