//! Entropic inequalities and identities as properties over seeded random
//! states and channels.

use entlock_core::channels::{dephasing_channel, random_channel};
use entlock_core::entropy::{
    channel_mutual_information, conditional_entropy, conditional_mutual_information, entropy,
    mutual_information, relative_entropy,
};
use entlock_core::linalg::{CMatrix, DimList};
use entlock_core::states::{
    fourier_unitary, max_entangled, maximally_mixed, DensityOperator,
};
use entlock_core::Matrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_state(dims: &[usize], seed: u64) -> DensityOperator<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = dims.iter().product();
    let g = entlock_core::linalg::ginibre::<f64, _>(n, n, &mut rng);
    let h = g.matmul(&g.dagger());
    let tr = h.trace().re;
    DensityOperator::new(h.scale_re(1.0 / tr), DimList::new(dims.to_vec()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn strong_subadditivity(seed in 0u64..1_000_000, wide in proptest::bool::ANY) {
        let dims: &[usize] = if wide { &[2, 3, 2] } else { &[2, 2, 2] };
        let rho = random_state(dims, seed);
        let cmi = conditional_mutual_information(&rho, &[0], &[1], &[2]).unwrap();
        prop_assert!(cmi.0 >= -1e-8, "SSA violated: {}", cmi.0);
    }

    #[test]
    fn chain_rule(seed in 0u64..1_000_000) {
        // I(AB;C) = I(A;C) + I(B;C|A)
        let rho = random_state(&[2, 2, 2], seed);
        let i_ab_c = mutual_information(&rho, &[0, 1], &[2]).unwrap().0;
        let i_a_c = {
            let ac = rho.partial_trace(&[0, 2]).unwrap();
            mutual_information(&ac, &[0], &[1]).unwrap().0
        };
        let i_b_c_given_a = conditional_mutual_information(&rho, &[1], &[2], &[0]).unwrap().0;
        prop_assert!((i_ab_c - i_a_c - i_b_c_given_a).abs() < 1e-10);
    }

    #[test]
    fn weak_monotonicity(seed in 0u64..1_000_000) {
        // S(E|A) + S(E|B) ≥ 0
        let rho = random_state(&[2, 2, 2], seed);
        let s_e_a = conditional_entropy(&rho, &[2], &[0]).unwrap().0;
        let s_e_b = conditional_entropy(&rho, &[2], &[1]).unwrap().0;
        prop_assert!(s_e_a + s_e_b >= -1e-8);
    }

    #[test]
    fn purity_symmetry(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<entlock_core::Complex64> = (0..12)
            .map(|_| entlock_core::linalg::gaussian_complex(&mut rng))
            .collect();
        let norm = entlock_core::linalg::vec_norm(&v);
        for z in &mut v {
            *z /= entlock_core::Complex64::new(norm, 0.0);
        }
        let dims = DimList::new(vec![4, 3]).unwrap();
        let psi = entlock_core::states::PureState::new(v, dims, None).unwrap();
        let s_a = entropy(&psi.reduced_density(&[0]).unwrap()).unwrap().0;
        let s_b = entropy(&psi.reduced_density(&[1]).unwrap()).unwrap().0;
        prop_assert!((s_a - s_b).abs() < 1e-10);
    }

    #[test]
    fn relent_bridges_channel_information(seed in 0u64..1_000_000, d in 2usize..4) {
        // D((id⊗Λ)Φ_d ‖ τ⊗Λ(τ)) = I(τ;Λ)
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel::<f64, _>(d, d, 2, &mut rng).unwrap();
        let phi = max_entangled::<f64>(d);
        let rho = ch.apply_to_factor_pure(&phi, 1).unwrap();
        let sigma_mat = entlock_core::linalg::kron(
            maximally_mixed::<f64>(d).mat(),
            ch.apply(&maximally_mixed(d)).unwrap().mat(),
        );
        let sigma = DensityOperator::new(sigma_mat, rho.dims().clone()).unwrap();
        let lhs = relative_entropy(&rho, &sigma).unwrap().0;
        let rhs = channel_mutual_information(&ch, d).unwrap().0;
        prop_assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn dephasing_is_idempotent(seed in 0u64..1_000_000, fourier in proptest::bool::ANY) {
        let d = 3;
        let basis = if fourier {
            fourier_unitary::<f64>(d)
        } else {
            Matrix::identity(d)
        };
        let m = dephasing_channel(&basis).unwrap();
        let rho = random_state(&[d], seed);
        let once = m.apply(&rho).unwrap();
        let twice = m.apply(&once).unwrap();
        prop_assert!(once.mat().max_diff(twice.mat()) < 1e-11);
    }

    #[test]
    fn uncertainty_relation_over_random_states(seed in 0u64..1_000_000, d in 2usize..6) {
        let m0 = dephasing_channel(&Matrix::identity(d)).unwrap();
        let m1 = dephasing_channel(&fourier_unitary::<f64>(d)).unwrap();
        let rho = random_state(&[d], seed);
        let s0 = entropy(&m0.apply(&rho).unwrap()).unwrap().0;
        let s1 = entropy(&m1.apply(&rho).unwrap()).unwrap().0;
        prop_assert!(s0 + s1 >= (d as f64).log2() - 1e-8);
    }

    #[test]
    fn apply_to_factor_commutes_with_permutation(seed in 0u64..1_000_000) {
        // act on factor 1, then swap factors 0 and 2 — versus swapping first
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel::<f64, _>(3, 2, 2, &mut rng).unwrap();
        let rho = random_state(&[2, 3, 2], seed ^ 0xdead);
        let acted = ch.apply_to_factor(&rho, 1).unwrap();
        let a_then_p = acted.permute(&[2, 1, 0]).unwrap();
        let permuted = rho.permute(&[2, 1, 0]).unwrap();
        let p_then_a = ch.apply_to_factor(&permuted, 1).unwrap();
        prop_assert!(a_then_p.mat().max_diff(p_then_a.mat()) < 1e-12);
    }

    #[test]
    fn holevo_bounded_by_log_outputs(seed in 0u64..1_000_000, d in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel::<f64, _>(d, d, 2, &mut rng).unwrap();
        let (e0, _) = entlock_core::states::basis_ensembles(d, &fourier_unitary::<f64>(d)).unwrap();
        let chi = entlock_core::entropy::holevo_chi_through(&ch, &e0).unwrap().0;
        prop_assert!(chi >= -1e-9);
        prop_assert!(chi <= (d as f64).log2() + 1e-9);
    }
}

#[test]
fn markov_states_have_zero_cmi() {
    // Σ_e p_e ρ_e^A ⊗ ρ_e^B ⊗ |e⟩⟨e|
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut acc = CMatrix::<f64>::zeros(12, 12);
    let probs = [0.3, 0.25, 0.45];
    for (e, p) in probs.iter().enumerate() {
        let a = entlock_core::states::random_density::<f64, _>(2, 2, &mut rng);
        let b = entlock_core::states::random_density::<f64, _>(2, 2, &mut rng);
        let mut flag = CMatrix::<f64>::zeros(3, 3);
        flag[(e, e)] = entlock_core::Complex64::new(1.0, 0.0);
        let term = entlock_core::linalg::kron(&entlock_core::linalg::kron(a.mat(), b.mat()), &flag);
        acc = &acc + &term.scale_re(*p);
    }
    let rho = DensityOperator::new(acc, DimList::new(vec![2, 2, 3]).unwrap()).unwrap();
    let cmi = conditional_mutual_information(&rho, &[0], &[1], &[2]).unwrap();
    assert!(cmi.0.abs() < 1e-10);
}
