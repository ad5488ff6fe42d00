//! Second moments on the critical line: plain, mollified, integrated over the
//! mollifier length, and against the weight of the non-vanishing argument.

use num_complex::Complex64;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::HashMap;
use std::time::Instant;

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::eval::evaluate_l;
use crate::instance::AutomorphicInstance;
use crate::mollifier::{mollifier_sweep, mollifier_value};
use crate::quad::{adaptive, initial_width};

/// Absolute tolerance for each `L(1/2 + it)` sample.
const LINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    Second,
    Mollified,
    YIntegrated,
    Weighted,
}

impl std::fmt::Display for MomentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MomentKind::Second => "second",
            MomentKind::Mollified => "mollified",
            MomentKind::YIntegrated => "y-integrated",
            MomentKind::Weighted => "weighted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentResult {
    pub label: String,
    pub kind: MomentKind,
    pub t1: f64,
    pub t2: f64,
    /// `y` for the mollified kind, `X` for the integrated kind, `x` for the weighted kind.
    pub length: f64,
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub seconds: f64,
}

/// `L(1/2 + it)` with optional memoization keyed by the exact height.
pub struct CriticalLine<'a> {
    instance: &'a AutomorphicInstance,
    cache: Option<RefCell<HashMap<u64, Complex64>>>,
}

impl<'a> CriticalLine<'a> {
    pub fn new(instance: &'a AutomorphicInstance) -> Self {
        CriticalLine { instance, cache: Some(RefCell::new(HashMap::new())) }
    }

    pub fn uncached(instance: &'a AutomorphicInstance) -> Self {
        CriticalLine { instance, cache: None }
    }

    pub fn instance(&self) -> &AutomorphicInstance {
        self.instance
    }

    pub fn value(&self, t: f64) -> Result<Complex64> {
        let s = Complex64::new(0.5, t);
        match &self.cache {
            None => Ok(evaluate_l(self.instance, s, LINE_TOL)?.value),
            Some(cell) => {
                if let Some(v) = cell.borrow().get(&t.to_bits()) {
                    return Ok(*v);
                }
                let v = evaluate_l(self.instance, s, LINE_TOL)?.value;
                cell.borrow_mut().insert(t.to_bits(), v);
                Ok(v)
            }
        }
    }

    pub fn abs2(&self, t: f64) -> Result<f64> {
        Ok(self.value(t)?.norm_sqr())
    }
}

/// `log(length) + (m/2) log(2 + T_2)`.
pub fn oscillation_rate(instance: &AutomorphicInstance, length: f64, t2: f64) -> f64 {
    length.max(1.0).ln() + 0.5 * instance.degree as f64 * ((instance.conductor as f64) * (2.0 + t2.abs())).ln()
}

fn check_range(t1: f64, t2: f64) -> Result<()> {
    if !(t1 >= 0.0 && t2 >= t1) {
        return Err(Error::domain("moment range needs 0 <= T1 <= T2"));
    }
    Ok(())
}

/// Integrates `weight(t) |L(1/2+it)|^2` over `[t1, t2]`. The error adds the
/// quadrature estimate and the propagated evaluation error.
fn integrate_line<F>(line: &CriticalLine, t1: f64, t2: f64, tol: f64, rate: f64, mut weight: F) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if t1 == t2 {
        return Ok((0.0, 0.0, 0));
    }
    let mut eval_err = 0.0;
    let mut max_amp: f64 = 0.0;
    let q = adaptive(
        |t| {
            let l = line.value(t)?;
            let w = weight(t)?;
            max_amp = max_amp.max(2.0 * l.norm() * w.abs());
            Ok(Complex64::new(l.norm_sqr() * w, 0.0))
        },
        t1,
        t2,
        tol,
        initial_width(rate),
    )?;
    eval_err += max_amp * LINE_TOL * (t2 - t1);
    Ok((q.value.re.max(0.0), q.error + eval_err, q.panels))
}

pub fn second_moment(instance: &AutomorphicInstance, t1: f64, t2: f64, tol: f64) -> Result<MomentResult> {
    second_moment_on(&CriticalLine::new(instance), t1, t2, tol)
}

/// `int_{T1}^{T2} |L(1/2+it)|^2 dt`.
pub fn second_moment_on(line: &CriticalLine, t1: f64, t2: f64, tol: f64) -> Result<MomentResult> {
    check_range(t1, t2)?;
    let start = Instant::now();
    let rate = oscillation_rate(line.instance, 1.0, t2);
    let (value, error, panels) = integrate_line(line, t1, t2, tol, rate, |_| Ok(1.0))?;
    Ok(MomentResult {
        label: line.instance.label.clone(),
        kind: MomentKind::Second,
        t1,
        t2,
        length: 1.0,
        value,
        error,
        panels,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn moment_i(
    instance: &AutomorphicInstance,
    table: &CoefficientTable,
    y: f64,
    t1: f64,
    t2: f64,
    tol: f64,
) -> Result<MomentResult> {
    moment_i_on(&CriticalLine::new(instance), table, y, t1, t2, tol)
}

/// `I_y(T1, T2) = int |M_y(1/2+it) L(1/2+it)|^2 dt`; exactly 0 for `y <= 1`.
pub fn moment_i_on(
    line: &CriticalLine,
    table: &CoefficientTable,
    y: f64,
    t1: f64,
    t2: f64,
    tol: f64,
) -> Result<MomentResult> {
    check_range(t1, t2)?;
    if !(y > 0.0) {
        return Err(Error::domain("mollifier length must be positive"));
    }
    let start = Instant::now();
    let mut out = MomentResult {
        label: line.instance.label.clone(),
        kind: MomentKind::Mollified,
        t1,
        t2,
        length: y,
        value: 0.0,
        error: 0.0,
        panels: 0,
        seconds: 0.0,
    };
    if y > 1.0 {
        table.ensure_covers(y.floor() as usize)?;
        let rate = oscillation_rate(line.instance, y, t2);
        let (value, error, panels) = integrate_line(line, t1, t2, tol, rate, |t| {
            Ok(mollifier_value(table, y, Complex64::new(0.5, t))?.norm_sqr())
        })?;
        out.value = value;
        out.error = error;
        out.panels = panels;
    }
    out.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

pub fn moment_i_integrated(
    instance: &AutomorphicInstance,
    table: &CoefficientTable,
    t1: f64,
    t2: f64,
    x_max: f64,
    tol: f64,
) -> Result<MomentResult> {
    moment_i_integrated_on(&CriticalLine::new(instance), table, t1, t2, x_max, tol)
}

/// `int_1^X I_y(T1, T2) dy`, computed as `int |L|^2 Phi(t) dt` with
/// `Phi(t) = int_1^X |M_y(1/2+it)|^2 dy` from the prefix-sum sweep.
pub fn moment_i_integrated_on(
    line: &CriticalLine,
    table: &CoefficientTable,
    t1: f64,
    t2: f64,
    x_max: f64,
    tol: f64,
) -> Result<MomentResult> {
    check_range(t1, t2)?;
    if !(x_max >= 1.0) {
        return Err(Error::domain("X must be at least 1"));
    }
    let start = Instant::now();
    let mut out = MomentResult {
        label: line.instance.label.clone(),
        kind: MomentKind::YIntegrated,
        t1,
        t2,
        length: x_max,
        value: 0.0,
        error: 0.0,
        panels: 0,
        seconds: 0.0,
    };
    if x_max > 1.0 {
        table.ensure_covers(x_max.floor() as usize)?;
        let rate = oscillation_rate(line.instance, x_max, t2);
        let (value, error, panels) =
            integrate_line(line, t1, t2, tol, rate, |t| Ok(mollifier_sweep(table, t, x_max)?.phi(x_max)))?;
        out.value = value;
        out.error = error;
        out.panels = panels;
    }
    out.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedMoment {
    pub result: MomentResult,
    /// `x^{2 beta_0} / T_2^{5+2m}`.
    pub lower_zero_term: f64,
    /// `T_2 / x`.
    pub lower_length_term: f64,
}

pub fn weighted_second_moment(
    instance: &AutomorphicInstance,
    gamma0: f64,
    t1: f64,
    t2: f64,
    x: f64,
    beta0: f64,
    tol: f64,
) -> Result<WeightedMoment> {
    weighted_second_moment_on(&CriticalLine::new(instance), gamma0, t1, t2, x, beta0, tol)
}

/// `int |L|^2 (x^{2 beta_0} / ((|gamma_0 - t| + 1)^4 (|gamma_0| + 1)^{2+2m}) + 1/x) dt`.
pub fn weighted_second_moment_on(
    line: &CriticalLine,
    gamma0: f64,
    t1: f64,
    t2: f64,
    x: f64,
    beta0: f64,
    tol: f64,
) -> Result<WeightedMoment> {
    check_range(t1, t2)?;
    if !(x >= 2.0) {
        return Err(Error::domain("weighted moment requires x >= 2"));
    }
    let start = Instant::now();
    let m = line.instance.degree as f64;
    let scale = x.powf(2.0 * beta0) / (gamma0.abs() + 1.0).powf(2.0 + 2.0 * m);
    let rate = oscillation_rate(line.instance, 1.0, t2);
    let (value, error, panels) = integrate_line(line, t1, t2, tol, rate, |t| {
        Ok(scale / ((gamma0 - t).abs() + 1.0).powi(4) + 1.0 / x)
    })?;
    Ok(WeightedMoment {
        result: MomentResult {
            label: line.instance.label.clone(),
            kind: MomentKind::Weighted,
            t1,
            t2,
            length: x,
            value,
            error,
            panels,
            seconds: start.elapsed().as_secs_f64(),
        },
        lower_zero_term: x.powf(2.0 * beta0) / t2.powf(5.0 + 2.0 * m),
        lower_length_term: t2 / x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::build_coefficients;
    use crate::instance::make_zeta;

    #[test]
    fn empty_and_short_cases() {
        let z = make_zeta();
        let table = build_coefficients(&z, 10).unwrap();
        assert_eq!(second_moment(&z, 5.0, 5.0, 1e-8).unwrap().value, 0.0);
        assert_eq!(moment_i(&z, &table, 0.5, 0.0, 10.0, 1e-8).unwrap().value, 0.0);
        assert_eq!(moment_i_integrated(&z, &table, 0.0, 10.0, 1.0, 1e-8).unwrap().value, 0.0);
        assert!(second_moment(&z, 5.0, 4.0, 1e-8).is_err());
    }

    #[test]
    fn mollifier_of_length_two_is_trivial() {
        let z = make_zeta();
        let table = build_coefficients(&z, 10).unwrap();
        let plain = second_moment(&z, 0.0, 20.0, 1e-9).unwrap().value;
        let moll = moment_i(&z, &table, 2.0, 0.0, 20.0, 1e-9).unwrap().value;
        assert!((plain - moll).abs() < 1e-9 * plain);
    }

    #[test]
    fn cache_does_not_change_results() {
        let z = make_zeta();
        let a = second_moment_on(&CriticalLine::new(&z), 0.0, 15.0, 1e-8).unwrap().value;
        let b = second_moment_on(&CriticalLine::uncached(&z), 0.0, 15.0, 1e-8).unwrap().value;
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn weighted_kernel_peaks_at_center() {
        let z = make_zeta();
        let centered = weighted_second_moment(&z, 15.0, 0.0, 30.0, 10.0, 0.75, 1e-8).unwrap();
        let shifted = weighted_second_moment(&z, 45.0, 0.0, 30.0, 10.0, 0.75, 1e-8).unwrap();
        assert!(centered.result.value > shifted.result.value);
    }
}
