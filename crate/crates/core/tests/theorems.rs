use std::f64::consts::PI;
use thetalab::instance::{make_dirichlet, make_zeta};
use thetalab::moments::moment_i_integrated;
use thetalab::theorems::{
    count_zeros_rectangle, family_condition, family_zero_statistic, rh_criterion_scan, thm_global_sup, FamilySpec,
};

fn chi5_family() -> FamilySpec {
    FamilySpec::new((1..4).map(|k| make_dirichlet(5, k).unwrap()).collect(), "mod 5").unwrap()
}

#[test]
fn riemann_von_mangoldt() {
    let z = make_zeta();
    for t in [50.0, 100.0, 200.0] {
        let r = count_zeros_rectangle(&z, 0.0, 1.0, 0.0, t).unwrap();
        let u = t / (2.0 * PI);
        let main = u * u.ln() - u + 7.0 / 8.0;
        assert!(r.confident);
        assert!((r.count as f64 - main).abs() <= 2.0, "T={t}: {} vs {main}", r.count);
    }
}

#[test]
fn count_stable_under_edge_perturbation() {
    let z = make_zeta();
    let base = count_zeros_rectangle(&z, 0.2, 0.8, 5.0, 45.0).unwrap().count;
    assert_eq!(base, 8);
    for d in [-1e-3, 1e-3] {
        assert_eq!(count_zeros_rectangle(&z, 0.2 + d, 0.8, 5.0, 45.0).unwrap().count, base);
        assert_eq!(count_zeros_rectangle(&z, 0.2, 0.8 + d, 5.0, 45.0).unwrap().count, base);
        assert_eq!(count_zeros_rectangle(&z, 0.2, 0.8, 5.0 + d, 45.0).unwrap().count, base);
        assert_eq!(count_zeros_rectangle(&z, 0.2, 0.8, 5.0, 45.0 + d).unwrap().count, base);
    }
}

#[test]
fn dyadic_variant_is_a_difference() {
    let z = make_zeta();
    let tol = 1e-9;
    let grid = [6.0, 12.0];
    let dy = thm_global_sup(&z, 0.6, 1.0, &grid, true, 1.0, tol).unwrap();
    for row in &dy.rows {
        let t = row.t;
        let table = thetalab::coeffs::build_coefficients(&z, 12).unwrap();
        let big = moment_i_integrated(&z, &table, 0.0, 2.0 * t, t, tol).unwrap().value;
        let small = moment_i_integrated(&z, &table, 0.0, t, t, tol).unwrap().value;
        assert!((row.hypothesis - (big - small)).abs() < 1e-7 * big, "T={t}");
    }
}

#[test]
fn large_sigma_normalization_decays() {
    let z = make_zeta();
    let r = thm_global_sup(&z, 2.0, 1.0, &[10.0, 20.0, 40.0], false, 1.0, 1e-8).unwrap();
    assert!(r.slope.unwrap() < 0.0);
    assert_eq!(r.hypothesis, r.rows[0].normalized);
}

#[test]
fn rh_rows_monotone_in_epsilon() {
    let z = make_zeta();
    let eps = [0.25, 0.5, 1.0];
    let r = rh_criterion_scan(&z, 1.0, &eps, &[8.0, 16.0], 1e-8).unwrap();
    for t in [8.0, 16.0] {
        let vals: Vec<f64> = eps
            .iter()
            .map(|e| r.rows.iter().find(|row| row.t == t && row.epsilon == Some(*e)).unwrap().normalized)
            .collect();
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }
    assert!(r.slope.is_some());
}

#[test]
fn family_bookkeeping_is_exact() {
    let fam = chi5_family();
    let grid = [10.0, 20.0];
    let r = family_condition(&fam, 0.6, 1.0, &grid, 1.0, 1e-8).unwrap();
    for row in &r.rows {
        let sum: f64 = r.members.iter().filter(|m| m.t == row.t).map(|m| m.hypothesis).sum();
        assert!((row.hypothesis - sum).abs() <= 1e-12 * sum);
    }
    let mut doubled = fam.members.clone();
    doubled.push(fam.members[0].clone());
    let d = family_condition(&FamilySpec::new(doubled, "dup").unwrap(), 0.6, 1.0, &grid, 1.0, 1e-8).unwrap();
    let first = r.members.iter().find(|m| m.t == 20.0).unwrap().hypothesis;
    assert_eq!(d.rows[1].hypothesis, r.rows[1].hypothesis + first);
    assert!(r.params.contains_key("delta_fit"));
}

#[test]
fn singleton_family_matches_global_sup() {
    let z = make_zeta();
    let grid = [10.0, 20.0];
    let fam = FamilySpec::new(vec![z.clone()], "zeta").unwrap();
    let f = family_condition(&fam, 0.7, 1.0, &grid, 1.0, 1e-8).unwrap();
    let g = thm_global_sup(&z, 0.7, 1.0, &grid, false, 1.0, 1e-8).unwrap();
    for (a, b) in f.rows.iter().zip(&g.rows) {
        assert_eq!(a.hypothesis, b.hypothesis);
        assert!((a.normalized - b.normalized).abs() <= 1e-15 * b.normalized);
    }
}

#[test]
fn family_zero_statistic_edges() {
    let fam = chi5_family();
    let high = family_zero_statistic(&fam, 0.9, 30.0).unwrap();
    assert_eq!((high.count, high.ratio), (0, 0.0));
    let line = family_zero_statistic(&fam, 0.5, 30.0).unwrap();
    assert_eq!(line.ratio, 1.0);
    assert!(line.excluded.is_empty());
    let empty = family_zero_statistic(&fam, 0.5, 1e-9).unwrap();
    assert_eq!(empty.count, 0);
}
