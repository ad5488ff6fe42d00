//! The mollifier `M_x(s) = sum_{n <= x} mu(n) n^{-s} log(x/n) / log x` and its
//! Mellin transform `H_t(w)`.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::eval::evaluate_relative;
use crate::instance::AutomorphicInstance;
use crate::quad::gauss_legendre;

/// `M_x(s)`; zero for `x <= 1`. The `n = 1` term is exactly 1.
pub fn mollifier_value(table: &CoefficientTable, x: f64, s: Complex64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::domain("mollifier length must be positive"));
    }
    if x <= 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n_top = x.floor() as usize;
    table.ensure_covers(n_top)?;
    let lx = x.ln();
    let mut acc = Complex64::new(1.0, 0.0);
    for n in 2..=n_top {
        let mu = table.mu(n);
        if mu.norm() == 0.0 {
            continue;
        }
        let ln_n = (n as f64).ln();
        acc += mu * (-s * ln_n).exp() * (1.0 - ln_n / lx);
    }
    Ok(acc)
}

/// Prefix sums `A(k) = sum_{n<=k} mu(n) n^{-1/2-it}` and
/// `B(k) = sum_{n<=k} mu(n) n^{-1/2-it} log n` for `k = 1..=floor(Y)`, so that
/// `M_y(1/2+it) = A(k) - B(k)/log y` for `k <= y < k+1`.
#[derive(Debug, Clone)]
pub struct MollifierSweep {
    pub label: String,
    pub t: f64,
    pub y_max: f64,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

pub fn mollifier_sweep(table: &CoefficientTable, t: f64, y_max: f64) -> Result<MollifierSweep> {
    if !(y_max >= 1.0) {
        return Err(Error::domain("sweep length must be at least 1"));
    }
    let n_top = y_max.floor() as usize;
    table.ensure_covers(n_top)?;
    let s = Complex64::new(0.5, t);
    let mut a = Vec::with_capacity(n_top + 1);
    let mut b = Vec::with_capacity(n_top + 1);
    a.push(Complex64::new(0.0, 0.0));
    b.push(Complex64::new(0.0, 0.0));
    let (mut sa, mut sb) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for n in 1..=n_top {
        let mu = table.mu(n);
        if mu.norm() != 0.0 {
            let ln_n = (n as f64).ln();
            let term = mu * (-s * ln_n).exp();
            sa += term;
            sb += term * ln_n;
        }
        a.push(sa);
        b.push(sb);
    }
    Ok(MollifierSweep { label: table.label.clone(), t, y_max, a, b })
}

fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

impl MollifierSweep {
    pub fn breakpoints(&self) -> usize {
        self.a.len() - 1
    }

    pub fn prefix_a(&self, k: usize) -> Complex64 {
        self.a[k]
    }

    pub fn prefix_b(&self, k: usize) -> Complex64 {
        self.b[k]
    }

    /// `M_y(1/2 + it)` for `0 < y <= Y`.
    pub fn value(&self, y: f64) -> Complex64 {
        if y <= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (y.floor() as usize).min(self.breakpoints());
        self.a[k] - self.b[k] / y.ln()
    }

    /// `Phi(X) = int_1^X |M_y(1/2+it)|^2 dy` with 8 Gauss nodes per unit interval.
    pub fn phi(&self, x_max: f64) -> f64 {
        let x_max = x_max.min(self.y_max);
        if x_max <= 1.0 {
            return 0.0;
        }
        let (nodes, weights) = gl8();
        // on [1, 2) only n = 1 enters and M = 1
        let mut acc = (x_max.min(2.0) - 1.0).max(0.0);
        let mut k = 2usize;
        while (k as f64) < x_max {
            let lo = k as f64;
            let hi = ((k + 1) as f64).min(x_max);
            let (a, b) = (self.a[k], self.b[k]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let mut part = 0.0;
            for (x, w) in nodes.iter().zip(weights) {
                let y = mid + half * x;
                part += w * (a - b / y.ln()).norm_sqr();
            }
            acc += part * half;
            k += 1;
        }
        acc
    }
}

/// Tail bound `X^{3/2+delta-Re w} / (Re w - 3/2 - delta)`.
pub fn h_tail_certificate(delta: f64, w: Complex64, x_max: f64) -> f64 {
    let gap = w.re - 1.5 - delta;
    if gap <= 0.0 {
        return f64::INFINITY;
    }
    x_max.powf(-gap) / gap
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue {
    pub value: Complex64,
    /// Quadrature estimate plus tail certificate.
    pub error: f64,
    pub tail: f64,
}

/// `H_t(w) = int_1^infinity M_x(1/2+it) (log x) x^{-w} dx` truncated at `X_max`.
pub fn h_numeric(
    instance: &AutomorphicInstance,
    table: &CoefficientTable,
    t: f64,
    w: Complex64,
    x_max: f64,
) -> Result<HValue> {
    if w.re < 2.0 {
        return Err(Error::domain("H_numeric requires Re(w) >= 2"));
    }
    let sweep = mollifier_sweep(table, t, x_max)?;
    let (nodes, weights) = gl8();
    let (n4, w4) = gauss_legendre(4);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut quad_err = 0.0;
    let mut k = 1usize;
    while (k as f64) < x_max {
        let lo = k as f64;
        let hi = ((k + 1) as f64).min(x_max);
        let (a, b) = (sweep.a[k], sweep.b[k]);
        let f = |y: f64| {
            let ly = y.ln();
            (a * ly - b) * (-w * ly).exp()
        };
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let hi_order: Complex64 = nodes.iter().zip(weights).map(|(x, wt)| f(mid + half * x) * *wt).sum();
        let lo_order: Complex64 = n4.iter().zip(&w4).map(|(x, wt)| f(mid + half * x) * *wt).sum();
        acc += hi_order * half;
        quad_err += ((hi_order - lo_order) * half).norm();
        k += 1;
    }
    let tail = h_tail_certificate(instance.ramanujan_exponent, w, x_max);
    Ok(HValue { value: acc, error: quad_err + tail, tail })
}

/// `H_t(w) = 1 / ((w-1)^2 L(w - 1/2 + it))`.
pub fn h_closed(instance: &AutomorphicInstance, t: f64, w: Complex64) -> Result<Complex64> {
    if (w - 1.0).norm() == 0.0 {
        return Err(Error::Pole { what: "H_t", re: w.re, im: w.im });
    }
    let s = w - 0.5 + Complex64::new(0.0, t);
    let l = evaluate_relative(instance, s, 1e-12)?.value;
    let v = ((w - 1.0) * (w - 1.0) * l).inv();
    crate::quad::check_finite(v, s.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::build_coefficients;
    use crate::instance::make_zeta;

    fn zeta_table(n: usize) -> CoefficientTable {
        build_coefficients(&make_zeta(), n).unwrap()
    }

    #[test]
    fn short_lengths_vanish() {
        let t = zeta_table(10);
        for x in [0.01, 0.7, 1.0] {
            assert_eq!(mollifier_value(&t, x, Complex64::new(0.5, 3.0)).unwrap(), Complex64::new(0.0, 0.0));
        }
        assert!(mollifier_value(&t, 11.0, Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn three_term_value() {
        let t = zeta_table(10);
        let v = mollifier_value(&t, 3.0, Complex64::new(0.5, 0.0)).unwrap();
        let expect = (3f64.ln() - 1.5f64.ln() / 2f64.sqrt()) / 3f64.ln();
        assert!((v.re - expect).abs() < 1e-14);
        assert!((v.re - 0.739_027_926_016_187).abs() < 1e-12);
    }

    #[test]
    fn sweep_matches_direct() {
        let t = zeta_table(100);
        let sw = mollifier_sweep(&t, 0.0, 100.0).unwrap();
        let direct = mollifier_value(&t, 3.0, Complex64::new(0.5, 0.0)).unwrap();
        assert!((sw.value(3.0) - direct).norm() < 1e-12);
        let a10 = 1.0 - 2f64.sqrt().recip() - 3f64.sqrt().recip() - 5f64.sqrt().recip() + 6f64.sqrt().recip()
            - 7f64.sqrt().recip()
            + 10f64.sqrt().recip();
        assert!((sw.prefix_a(10).re - a10).abs() < 1e-14);
        let one = mollifier_sweep(&t, 2.0, 1.0).unwrap();
        assert_eq!(one.breakpoints(), 1);
        assert_eq!(one.value(0.5), Complex64::new(0.0, 0.0));
        assert_eq!(one.value(1.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn phi_on_first_interval_is_length() {
        let t = zeta_table(10);
        let sw = mollifier_sweep(&t, 4.0, 10.0).unwrap();
        assert!((sw.phi(1.75) - 0.75).abs() < 1e-15);
        assert_eq!(sw.phi(1.0), 0.0);
        assert!(sw.phi(10.0) > sw.phi(5.0));
    }

    #[test]
    fn closed_transform_values() {
        let z = make_zeta();
        let h3 = h_closed(&z, 0.0, Complex64::new(3.0, 0.0)).unwrap();
        assert!((h3.re - 0.186_360_324_072_194).abs() < 1e-12);
        let h2 = h_closed(&z, 0.0, Complex64::new(2.0, 0.0)).unwrap();
        assert!((h2.re - 0.382_793_383_999_427).abs() < 1e-12);
        assert!(h_closed(&z, 0.0, Complex64::new(1.5, 0.0)).is_err());
    }

    #[test]
    fn numeric_transform_rejects_left_of_two() {
        let z = make_zeta();
        let t = zeta_table(10);
        assert!(h_numeric(&z, &t, 0.0, Complex64::new(1.9, 0.0), 10.0).is_err());
    }
}
