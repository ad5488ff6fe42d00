use proptest::prelude::*;
use thetalab::coeffs::build_coefficients;
use thetalab::eval::{evaluate_l, evaluate_with, EvalOptions, Strategy};
use thetalab::instance::{make_delta, make_dirichlet, make_zeta, AutomorphicInstance};
use thetalab::mollifier::{mollifier_sweep, mollifier_value};
use thetalab::Complex64;

fn instances() -> Vec<AutomorphicInstance> {
    vec![make_zeta(), make_dirichlet(5, 1).unwrap(), make_dirichlet(4, 1).unwrap(), make_delta()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugation_symmetry(re in 0.05f64..1.5, im in 1.0f64..60.0, which in 0usize..4) {
        let inst = &instances()[which];
        let s = Complex64::new(re, im);
        let v = evaluate_l(inst, s, 1e-10).unwrap().value;
        let w = evaluate_l(&inst.contragredient(), s.conj(), 1e-10).unwrap().value;
        prop_assert!((v.conj() - w).norm() < 1e-9, "{} at {s}: {v} vs {w}", inst.label);
    }

    #[test]
    fn strategy_independence_left_of_centre(re in 0.02f64..0.48, im in -40.0f64..40.0) {
        let s = Complex64::new(re, im);
        let z = make_zeta();
        let em = evaluate_with(&z, s, &EvalOptions::with_tol(1e-11).with_strategy(Strategy::EulerMaclaurin)).unwrap();
        let rf = evaluate_with(&z, s, &EvalOptions::with_tol(1e-11).with_strategy(Strategy::Reflect)).unwrap();
        prop_assert!((em.value - rf.value).norm() < 1e-9);
        let chi = make_dirichlet(5, 2).unwrap();
        let hz = evaluate_with(&chi, s, &EvalOptions::with_tol(1e-11).with_strategy(Strategy::Hurwitz)).unwrap();
        let rf = evaluate_with(&chi, s, &EvalOptions::with_tol(1e-11).with_strategy(Strategy::Reflect)).unwrap();
        prop_assert!((hz.value - rf.value).norm() < 1e-9);
    }

    #[test]
    fn error_estimates_are_honest(re in -0.5f64..2.0, im in 0.5f64..80.0, which in 0usize..4) {
        let inst = &instances()[which];
        let s = Complex64::new(re, im);
        let opts = EvalOptions::with_tol(1e-8);
        let a = evaluate_with(inst, s, &opts).unwrap();
        let b = evaluate_with(inst, s, &opts.refined()).unwrap();
        let slack = 1e-14 * a.value.norm().max(1.0);
        prop_assert!((a.value - b.value).norm() <= a.error + b.error + slack,
            "{} at {s}: diff {} vs reported {}", inst.label, (a.value - b.value).norm(), a.error);
    }

    #[test]
    fn sweep_agrees_with_direct_sum(y in 1.0f64..400.0, t in -50.0f64..50.0) {
        let table = build_coefficients(&make_dirichlet(5, 1).unwrap(), 400).unwrap();
        let sweep = mollifier_sweep(&table, t, 400.0).unwrap();
        let direct = mollifier_value(&table, y, Complex64::new(0.5, t)).unwrap();
        prop_assert!((sweep.value(y) - direct).norm() < 1e-10);
    }
}

#[test]
fn phi_is_nondecreasing() {
    let table = build_coefficients(&make_zeta(), 300).unwrap();
    let sweep = mollifier_sweep(&table, 21.0, 300.0).unwrap();
    let mut last = 0.0;
    for k in 1..=60 {
        let v = sweep.phi(5.0 * k as f64);
        assert!(v >= last);
        last = v;
    }
}
