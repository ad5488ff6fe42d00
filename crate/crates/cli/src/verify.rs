//! The `verify` smoke suite: identities and oracle values that must hold for
//! any correct build, each reported as one `CheckReport`.

use anyhow::Result;
use std::f64::consts::{E, PI};

use thetalab::coeffs::build_coefficients;
use thetalab::contour::{cancellation_check, j_direct, j_residue, verify_log_identity, CheckReport, ZeroHypothesis};
use thetalab::eval::{evaluate_l, functional_equation_residual};
use thetalab::instance::{make_delta, make_dirichlet, make_zeta, AutomorphicInstance};
use thetalab::mollifier::{h_closed, h_numeric};
use thetalab::theorems::count_zeros_rectangle;
use thetalab::Complex64;

fn inverse_identity(instance: &AutomorphicInstance, n_max: usize) -> Result<CheckReport> {
    let table = build_coefficients(instance, n_max)?;
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                acc += table.lambda(d) * table.mu(n / d);
                if d * d != n {
                    acc += table.lambda(n / d) * table.mu(d);
                }
            }
            d += 1;
        }
        let expect = if n == 1 { 1.0 } else { 0.0 };
        worst = worst.max((acc - expect).norm());
    }
    Ok(CheckReport::new(
        &format!("dirichlet-inverse/{}", instance.label),
        &[("n_max", n_max as f64)],
        worst,
        0.0,
        1e-10,
    ))
}

pub fn run_suite(grc: bool) -> Result<Vec<CheckReport>> {
    let zeta = make_zeta().with_grc(grc);
    let chi4 = make_dirichlet(4, 1)?.with_grc(grc);
    let chi5 = make_dirichlet(5, 1)?.with_grc(grc);
    let delta = make_delta().with_grc(grc);
    let mut out = Vec::new();

    for inst in [&zeta, &chi4, &chi5, &delta] {
        out.push(inverse_identity(inst, 2000)?);
    }
    let dt = build_coefficients(&delta, 4)?;
    out.push(CheckReport::new("delta-lambda-4", &[("n", 4.0)], dt.lambda(4).re, -0.71875, 0.0));

    let z2 = evaluate_l(&zeta, Complex64::new(2.0, 0.0), 1e-12)?.value.re;
    out.push(CheckReport::new("zeta-2", &[("s_re", 2.0)], z2, PI * PI / 6.0, 1e-10));
    let g1 = 14.134_725_141_7;
    let z0 = evaluate_l(&zeta, Complex64::new(0.5, g1), 1e-12)?.value.norm();
    out.push(CheckReport::new("zeta-first-zero", &[("t", g1)], z0, 0.0, 1e-8));
    let l1 = evaluate_l(&chi4, Complex64::new(1.0, 0.0), 1e-12)?.value.re;
    out.push(CheckReport::new("chi-4-at-1", &[("s_re", 1.0)], l1, PI / 4.0, 1e-10));
    for inst in [&zeta, &chi4, &chi5, &delta] {
        for (re, im) in [(0.3, 7.5), (0.7, 25.0)] {
            let r = functional_equation_residual(inst, Complex64::new(re, im))?;
            out.push(CheckReport::new(
                &format!("functional-equation/{}", inst.label),
                &[("s_re", re), ("s_im", im)],
                r,
                0.0,
                1e-7,
            ));
        }
    }

    for y in [2.0, E, 10.0] {
        for c in [1.0, 2.0] {
            out.push(verify_log_identity(y, c, 1e-6)?);
        }
    }

    let table = build_coefficients(&zeta, 10_000)?;
    let w = Complex64::new(3.0, 0.0);
    let hn = h_numeric(&zeta, &table, 0.0, w, 1e4)?.value;
    let hc = h_closed(&zeta, 0.0, w)?;
    out.push(CheckReport::new(
        "h-transform",
        &[("t", 0.0), ("w_re", 3.0), ("x_max", 1e4)],
        (hn - hc).norm() / hc.norm(),
        0.0,
        1e-3,
    ));

    let hyp = ZeroHypothesis::synthetic(0.75, 10.0)?;
    let jd = j_direct(&zeta, 10.0, 5.0, &hyp, 1e-10)?;
    let jr = j_residue(&zeta, 10.0, 5.0, &hyp, 1e-10)?;
    out.push(CheckReport::new(
        "j-direct-vs-residue",
        &[("t", 10.0), ("x", 5.0), ("rho_re", 0.75), ("rho_im", 10.0)],
        (jd.value - jr.value).norm(),
        0.0,
        1e-8,
    ));
    out.push(cancellation_check(&zeta, 10.0, Complex64::new(2.5, 1.0), &hyp, 1e-8)?);

    let zc = count_zeros_rectangle(&zeta, 0.01, 0.99, 0.0, 50.0)?;
    let mut count = CheckReport::new(
        "zeta-zero-count",
        &[("sigma_lo", 0.01), ("sigma_hi", 0.99), ("T1", 0.0), ("T2", 50.0)],
        zc.count as f64,
        10.0,
        0.0,
    );
    count.pass &= zc.confident;
    out.push(count);
    Ok(out)
}
