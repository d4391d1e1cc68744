//! Acceptance suite: every gate criterion at its stated tolerance, one
//! pass/fail line each (visible with `cargo test -- --nocapture`).

use entlock_cli::run_from;
use entlock_core::harness::{
    verify_lemma1, verify_lemma1_relent_form, verify_maassen_uffink, verify_omega_corollary,
    verify_omega_identities, verify_prop1, verify_prop2_formula, verify_prop3, GroupKind,
};
use entlock_core::opt::{
    accessible_information, cmi_for_extension_pure, ep_additivity_check, OptConfig,
};
use entlock_core::states::{
    conjugate_pair_ensemble, flower_purification, fourier_unitary, singlet,
};
use entlock_core::channels::KrausChannel;
use std::path::PathBuf;
use std::time::Instant;

const SEED: u64 = 42;

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("entlock-acceptance-{}-{name}", std::process::id()));
    p
}

fn pass(criterion: &str, detail: String) {
    println!("criterion {criterion}: PASS — {detail}");
}

#[test]
fn acceptance_01_lemma1_sweep() {
    let started = Instant::now();
    let mut slacks = Vec::new();
    for d in [2usize, 3, 4] {
        let report = verify_lemma1(d, GroupKind::Cyclic, 1000, d, d, SEED).unwrap();
        assert_eq!(
            report.violations, 0,
            "criterion 1: FAIL — Z_{d} sweep has violations: {report:?}"
        );
        assert!(report.min_slack >= -1e-8);
        slacks.push(format!("Z{}: {:.6}", d, report.min_slack));
    }
    let report = verify_lemma1(4, GroupKind::BitStrings, 1000, 4, 4, SEED).unwrap();
    assert_eq!(
        report.violations, 0,
        "criterion 1: FAIL — Z2^2 sweep has violations"
    );
    slacks.push(format!("Z2^2: {:.6}", report.min_slack));
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "criterion 1: FAIL — runtime {elapsed:?} exceeds 2 min"
    );
    pass(
        "1",
        format!("4000 channels, 0 violations, min slacks [{}] in {elapsed:?}", slacks.join(", ")),
    );
}

#[test]
fn acceptance_02_form_equivalence() {
    // each D(·‖τ⊗Λτ) must match its χ/I counterpart within 1e-9 …
    let relent = verify_lemma1_relent_form(3, 200, SEED).unwrap();
    assert_eq!(
        relent.violations, 0,
        "criterion 2: FAIL — relative-entropy form mismatch: {relent:?}"
    );
    // … and its Ω-state mutual-information counterpart within 1e-9
    let omega = verify_omega_identities(3, 200, SEED).unwrap();
    assert_eq!(
        omega.violations, 0,
        "criterion 2: FAIL — Ω-state identity mismatch: {omega:?}"
    );
    pass(
        "2",
        format!(
            "200 channels at d=3; slacks agree, min {:.6} (relent) / {:.6} (Ω)",
            relent.min_slack, omega.min_slack
        ),
    );
}

#[test]
fn acceptance_03_prop1_value() {
    // the CLI path: compute esq-flower --d 2 (env dims default 1,2,4)
    let out = tmp("esq-flower.json");
    let code = run_from([
        "entlock", "compute", "esq-flower", "--d", "2", "--restarts", "16",
        "--seed", "42", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    std::fs::remove_file(&out).ok();
    let value = parsed["value_bits"].as_f64().unwrap();
    assert!(
        (value - 1.5).abs() < 1e-3,
        "criterion 3: FAIL — esq-flower value {value}"
    );

    // trivial extension exactly 1 + ½ log d for d ∈ {2, 4}
    let mut trivial = Vec::new();
    for d in [2usize, 4] {
        let psi = flower_purification::<f64>(d);
        let v = cmi_for_extension_pure(&psi, &KrausChannel::trace_out(d), &[0, 1], &[2, 3])
            .unwrap()
            .0;
        let expect = 1.0 + 0.5 * (d as f64).log2();
        assert!(
            (v - expect).abs() < 1e-10,
            "criterion 3: FAIL — trivial extension at d={d} gives {v}"
        );
        trivial.push(format!("d={d}: {v:.12}"));
    }

    // 10³ random extensions never dip below the locking value, the entropy
    // identities hold, and the classical flag drives the CMI to zero
    let reports = verify_prop1(2, 1000, &[2], SEED).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(
        reports[0].violations, 0,
        "criterion 3: FAIL — random extensions: {:?}",
        reports[0]
    );
    let flag = reports[0].params["flag_extension_cmi_bits"].as_f64().unwrap();
    assert!(flag <= 1e-9, "criterion 3: FAIL — flag CMI {flag}");

    pass(
        "3",
        format!(
            "optimizer {value:.6}, trivial [{}], 1000 extensions min slack {:.2e}, flag CMI {flag:.2e}",
            trivial.join(", "),
            reports[0].min_slack
        ),
    );
}

#[test]
fn acceptance_04_prop1_identity_chain() {
    // the identity chain is checked per sample inside verify_prop1 at 1e-9
    for d in [2usize, 3] {
        let reports = verify_prop1(d, 1000, &[d], SEED).unwrap();
        assert_eq!(
            reports[0].violations, 0,
            "criterion 4: FAIL — identity chain broken at d={d}: {:?}",
            reports[0]
        );
    }
    pass("4", "I(AA';BB'|E) = 2 + log d + I(τ;Λ) − χ₀ − χ₁ within 1e-9 on 1000 channels at d ∈ {2,3}".into());
}

#[test]
fn acceptance_05_accessible_information() {
    let cfg = OptConfig {
        restarts: 16,
        max_iters: 400,
        ..OptConfig::with_seed(SEED)
    };
    let mut values = Vec::new();
    for d in [2usize, 4] {
        let ens = conjugate_pair_ensemble(d, &fourier_unitary::<f64>(d)).unwrap();
        let report = accessible_information(&ens, d * d, &cfg).unwrap();
        let target = 0.5 * (d as f64).log2();
        assert!(
            (report.value.0 - target).abs() < 2e-3,
            "criterion 5: FAIL — I_acc at d={d} is {}",
            report.value.0
        );
        for &h in &report.history {
            assert!(
                h <= target + 1e-6,
                "criterion 5: FAIL — restart exceeded ½ log d: {h}"
            );
        }
        values.push(format!("d={d}: {:.6}", report.value.0));
    }
    pass("5", format!("I_acc locks at ½ log d [{}], no restart above it", values.join(", ")));
}

#[test]
fn acceptance_06_prop3_monogamy() {
    for d in [2usize, 3] {
        let report = verify_prop3(d, 500, SEED).unwrap();
        assert_eq!(
            report.violations, 0,
            "criterion 6: FAIL — monogamy floor violated at d={d}: {report:?}"
        );
        assert!(report.min_slack >= -1e-8);
    }
    pass("6", "S(AE) ≥ S(A) and S(E|A) = S(E|B) on 500 supported states per d ∈ {2,3}".into());
}

#[test]
fn acceptance_07_omega_corollary() {
    let cfg = OptConfig {
        restarts: 8,
        max_iters: 400,
        ..OptConfig::with_seed(SEED)
    };
    let mut values = Vec::new();
    for d in [2usize, 3] {
        let report = verify_omega_corollary(d, &cfg).unwrap();
        assert_eq!(
            report.violations, 0,
            "criterion 7: FAIL — ω-state corollary at d={d}: {report:?}"
        );
        let full = report.worst_case["ep_full_bits"].as_f64().unwrap();
        let ab = report.worst_case["ep_ab_bits"].as_f64().unwrap();
        values.push(format!("d={d}: E_P(ω^A'AB)={full:.6}, E_P(ω^AB)={ab:.2e}"));
    }
    pass("7", values.join("; "));
}

#[test]
fn acceptance_08_prop2_formula() {
    let report = verify_prop2_formula(2, 2, 200, SEED).unwrap();
    assert_eq!(
        report.violations, 0,
        "criterion 8: FAIL — generalised locking formula: {report:?}"
    );
    let trivial = report.params["trivial_extension_bits"].as_f64().unwrap();
    assert!(
        (trivial - 2.5).abs() < 1e-10,
        "criterion 8: FAIL — trivial extension {trivial}"
    );
    assert!(report.min_slack >= -1e-8);
    pass(
        "8",
        format!(
            "trivial extension {trivial:.12}, 200 extensions min slack {:.2e}",
            report.min_slack
        ),
    );
}

#[test]
fn acceptance_09_maassen_uffink() {
    let mut slacks = Vec::new();
    for d in [2usize, 3, 4, 5] {
        let report = verify_maassen_uffink(d, 1000, SEED).unwrap();
        assert_eq!(
            report.violations, 0,
            "criterion 9: FAIL — uncertainty relation at d={d}: {report:?}"
        );
        slacks.push(format!("d={d}: {:.4}", report.min_slack));
    }
    pass("9", format!("0 violations over 4000 states, min slacks [{}]", slacks.join(", ")));
}

#[test]
fn acceptance_10_ep_additivity() {
    let cfg = OptConfig {
        restarts: 8,
        max_iters: 400,
        ..OptConfig::with_seed(SEED)
    };
    let s = singlet::<f64>();
    let (e1, e2, e12) = ep_additivity_check(&s, &s, &cfg).unwrap();
    assert!(
        (e12.0 - 2.0).abs() < 5e-3,
        "criterion 10: FAIL — E_P(singlet⊗singlet) = {}",
        e12.0
    );
    pass(
        "10",
        format!("E_P components ({:.6}, {:.6}), joint {:.6}", e1.0, e2.0, e12.0),
    );
}

#[test]
fn acceptance_11_determinism() {
    let out1 = tmp("verify-all-1.json");
    let out2 = tmp("verify-all-2.json");
    for out in [&out1, &out2] {
        let code = run_from([
            "entlock", "verify", "all", "--seed", "42", "--out", out.to_str().unwrap(),
        ]);
        assert!(
            code == 0,
            "criterion 11: FAIL — verify all reported violations (exit {code})"
        );
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "criterion 11: FAIL — reports differ between runs");
    let reports: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let count = reports.as_array().unwrap().len();
    std::fs::remove_file(&out1).ok();
    std::fs::remove_file(&out2).ok();
    pass(
        "11",
        format!("two `verify all --seed 42` runs byte-identical ({count} reports, {} bytes)", a.len()),
    );
}
