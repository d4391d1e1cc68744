//! Small-sample runs of every sweep, analytic spot values, worst-case
//! replay, and report determinism.

use entlock_core::channels::{dephasing_channel, random_channel, KrausChannel};
use entlock_core::entropy::{entanglement_entropy, mutual_information, subsystem_entropy};
use entlock_core::harness::{
    coherent_bound_slack, explore_lemma1_arbitrary_u, flower_flag_extension_cmi, lemma1_slack,
    maassen_uffink_slack, omega_identity_errors, relent_form_quantities, replay_worst_case,
    verify_coherent_info_bound, verify_lemma1, verify_lemma1_relent_form, verify_maassen_uffink,
    verify_omega_corollary, verify_omega_identities, verify_prop1, verify_prop2_formula,
    verify_prop3, GroupKind,
};
use entlock_core::linalg::DimList;
use entlock_core::opt::OptConfig;
use entlock_core::states::{
    basis_ensembles, flower_purification, fourier_unitary, hadamard_tensor, maximally_mixed,
    DensityOperator, PureState,
};
use entlock_core::Matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn lemma1_analytic_cases() {
    // identity channel: χ₀ = χ₁ = log d, I = 2 log d, slack 0
    let d = 2;
    let u = fourier_unitary::<f64>(d);
    let id = KrausChannel::<f64>::identity(d);
    let slack = lemma1_slack(&id, d, &u).unwrap();
    assert!(slack.abs() < 1e-10, "identity slack = {slack}");

    // computational dephasing at d = 3: χ₀ = log 3, χ₁ = 0, I = log 3
    let m0 = dephasing_channel(&Matrix::identity(3)).unwrap();
    let slack = lemma1_slack(&m0, 3, &fourier_unitary::<f64>(3)).unwrap();
    assert!(slack.abs() < 1e-10, "dephasing slack = {slack}");
}

#[test]
fn lemma1_sweeps_are_clean() {
    for d in [2usize, 3] {
        let report = verify_lemma1(d, GroupKind::Cyclic, 60, d, d, 11).unwrap();
        assert_eq!(report.violations, 0, "d = {d}: {report:?}");
        assert!(report.min_slack > -1e-8);
        let replayed = replay_worst_case(&report.worst_case).unwrap();
        assert!((replayed - report.min_slack).abs() < 1e-9);
    }
    // the bit-string group at d = 4
    let report = verify_lemma1(4, GroupKind::BitStrings, 40, 4, 4, 12).unwrap();
    assert_eq!(report.violations, 0);
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn bitstring_group_rejects_non_power_of_two() {
    assert!(verify_lemma1(3, GroupKind::BitStrings, 5, 3, 3, 1).is_err());
}

#[test]
fn relent_form_identity_channel() {
    // D(ρ‖τ⊗τ) = 2 bits for Φ₂ against the product of its marginals
    let id = KrausChannel::<f64>::identity(2);
    let (slack, max_err) = relent_form_quantities(&id, 2, &fourier_unitary::<f64>(2)).unwrap();
    assert!(max_err < 1e-9);
    // slack = I − χ₀ − χ₁ = 2 − 1 − 1
    assert!(slack.abs() < 1e-9);
}

#[test]
fn relent_form_sweep() {
    let report = verify_lemma1_relent_form(2, 50, 21).unwrap();
    assert_eq!(report.violations, 0);
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn omega_identities_identity_channel() {
    let id = KrausChannel::<f64>::identity(2);
    let (slack, max_err) = omega_identity_errors(&id, 2, &fourier_unitary::<f64>(2)).unwrap();
    assert!(max_err < 1e-9, "max identity error = {max_err}");
    assert!(slack.abs() < 1e-9);
    // I(AB;C)_Ω = D(Φ₂‖τ⊗τ) = 2 bits
    let omega = entlock_core::harness::omega_label_state(&id, 2).unwrap();
    let i_ab_c = mutual_information(&omega, &[0, 1], &[2, 3]).unwrap().0;
    assert!((i_ab_c - 2.0).abs() < 1e-9);
    // labels are independent
    let labels = omega.partial_trace(&[0, 1]).unwrap();
    let i_a_b = mutual_information(&labels, &[0], &[1]).unwrap().0;
    assert!(i_a_b.abs() < 1e-10);
}

#[test]
fn omega_identities_sweep() {
    let report = verify_omega_identities(2, 30, 31).unwrap();
    assert_eq!(report.violations, 0);
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn prop1_sweep_and_flag() {
    let reports = verify_prop1(2, 60, &[1, 2], 41).unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        assert_eq!(r.violations, 0, "{r:?}");
        assert!(r.min_slack > -1e-8);
        let replayed = replay_worst_case(&r.worst_case).unwrap();
        assert!((replayed - r.min_slack).abs() < 1e-9);
    }
    // the separability witness: conditioned on the flag, no correlations
    let cmi = flower_flag_extension_cmi(2).unwrap();
    assert!(cmi.abs() < 1e-9, "flag CMI = {cmi}");
    let cmi4 = flower_flag_extension_cmi(4).unwrap();
    assert!(cmi4.abs() < 1e-9);
}

#[test]
fn prop2_sweep() {
    let report = verify_prop2_formula(2, 2, 30, 51).unwrap();
    assert_eq!(report.violations, 0, "{report:?}");
    // trivial extension sits exactly at ½ log d + log m + 1 = 2.5
    let trivial = report.params["trivial_extension_bits"].as_f64().unwrap();
    assert!((trivial - 2.5).abs() < 1e-10);
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn prop3_sweeps() {
    for d in [2usize, 3] {
        let report = verify_prop3(d, 60, 61).unwrap();
        assert_eq!(report.violations, 0, "d = {d}: {report:?}");
        assert!(report.min_slack > -1e-8);
        let replayed = replay_worst_case(&report.worst_case).unwrap();
        assert!((replayed - report.min_slack).abs() < 1e-9);
    }
}

#[test]
fn omega_corollary_d2() {
    let cfg = OptConfig {
        restarts: 8,
        max_iters: 400,
        ..OptConfig::with_seed(71)
    };
    let report = verify_omega_corollary(2, &cfg).unwrap();
    assert_eq!(report.violations, 0, "{report:?}");
    let full = report.worst_case["ep_full_bits"].as_f64().unwrap();
    assert!((full - 1.0).abs() < 5e-3);
    let ab = report.worst_case["ep_ab_bits"].as_f64().unwrap();
    assert!(ab < 5e-3);
}

#[test]
fn coherent_bound_cases() {
    let u = fourier_unitary::<f64>(2);
    // identity: ε = 0, I_coh = log d, slack 0
    let id = KrausChannel::<f64>::identity(2);
    let slack = coherent_bound_slack(&id, 2, &u).unwrap();
    assert!(slack.abs() < 1e-10);
    // computational dephasing: χ₁ = 0 makes the bound vacuous — it asks
    // only I_coh ≥ −log d, and I_coh = 0 here, so the slack is log d
    let m0 = dephasing_channel(&Matrix::identity(2)).unwrap();
    let slack = coherent_bound_slack(&m0, 2, &u).unwrap();
    assert!((slack - 1.0).abs() < 1e-9, "dephasing slack = {slack}");
    let i_coh = entlock_core::entropy::coherent_information(&m0, 2).unwrap().0;
    assert!(i_coh.abs() < 1e-10);

    let report = verify_coherent_info_bound(2, 40, 81).unwrap();
    assert_eq!(report.violations, 0);
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn maassen_uffink_cases() {
    let d = 3;
    let m0 = dephasing_channel(&Matrix::identity(d)).unwrap();
    let m1 = dephasing_channel(&fourier_unitary::<f64>(d)).unwrap();
    // basis state saturates: S(M₀) = 0, S(M₁) = log d
    let basis = {
        let v = entlock_core::linalg::basis_vector::<f64>(d, 1);
        DensityOperator::new(Matrix::outer(&v, &v), DimList::single(d)).unwrap()
    };
    let slack = maassen_uffink_slack(&m0, &m1, &basis, d).unwrap();
    assert!(slack.abs() < 1e-10);
    // maximally mixed: slack = log d
    let slack = maassen_uffink_slack(&m0, &m1, &maximally_mixed(d), d).unwrap();
    assert!((slack - (d as f64).log2()).abs() < 1e-10);

    let report = verify_maassen_uffink(5, 100, 91).unwrap();
    assert_eq!(report.violations, 0);
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn exploration_mode_reports_without_asserting() {
    let report = explore_lemma1_arbitrary_u(2, 30, 101).unwrap();
    assert_eq!(report.samples, 30);
    assert!(report.property.contains("exploration"));
    let replayed = replay_worst_case(&report.worst_case).unwrap();
    assert!((replayed - report.min_slack).abs() < 1e-9);
}

#[test]
fn fixed_seed_reports_are_byte_identical() {
    let a = verify_lemma1(2, GroupKind::Cyclic, 25, 2, 2, 7).unwrap();
    let b = verify_lemma1(2, GroupKind::Cyclic, 25, 2, 2, 7).unwrap();
    assert_eq!(
        entlock_core::io::to_json_string(&a),
        entlock_core::io::to_json_string(&b)
    );
    assert_eq!(a.wallclock_ms, 0);
}

#[test]
fn fourier_convention_independence() {
    // every verified quantity is invariant under U → U*: the conjugate
    // ensembles coincide as sets, and conjugating a purification preserves
    // all marginal spectra
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for d in [2usize, 3] {
        let u = fourier_unitary::<f64>(d);
        let u_conj = u.conj();
        for _ in 0..10 {
            let ch = random_channel::<f64, _>(d, d, d, &mut rng).unwrap();
            let s1 = lemma1_slack(&ch, d, &u).unwrap();
            let s2 = lemma1_slack(&ch, d, &u_conj).unwrap();
            assert!((s1 - s2).abs() < 1e-10, "conjugate convention differs");
        }
        // conjugating the flower state realises the U* convention
        let psi = flower_purification::<f64>(d);
        let conj_vec: Vec<_> = psi.vec().iter().map(|z| z.conj()).collect();
        let conj = PureState::new(conj_vec, psi.dims().clone(), psi.purifying_factor()).unwrap();
        let e1 = entanglement_entropy(&psi, &[0, 1]).unwrap().0;
        let e2 = entanglement_entropy(&conj, &[0, 1]).unwrap().0;
        assert!((e1 - e2).abs() < 1e-10);
        let s1 = subsystem_entropy(psi.vec(), psi.dims(), &[4]).unwrap().0;
        let s2 = subsystem_entropy(conj.vec(), conj.dims(), &[4]).unwrap().0;
        assert!((s1 - s2).abs() < 1e-10);
    }
}

#[test]
fn hadamard_group_matches_fourier_at_d2() {
    // at d = 2 the two groups share the same Fourier transform, so the
    // slacks agree channel by channel
    let mut rng = ChaCha8Rng::seed_from_u64(121);
    let h = hadamard_tensor::<f64>(1);
    let f = fourier_unitary::<f64>(2);
    assert!(h.max_diff(&f) < 1e-15);
    let ch = random_channel::<f64, _>(2, 2, 2, &mut rng).unwrap();
    let s1 = lemma1_slack(&ch, 2, &h).unwrap();
    let s2 = lemma1_slack(&ch, 2, &f).unwrap();
    assert_eq!(s1, s2);
}

#[test]
fn chi_of_basis_ensemble_is_log_d() {
    let (e0, _) = basis_ensembles(3, &fourier_unitary::<f64>(3)).unwrap();
    let chi = entlock_core::entropy::holevo_chi(&e0).unwrap().0;
    assert!((chi - 3.0f64.log2()).abs() < 1e-10);
}
