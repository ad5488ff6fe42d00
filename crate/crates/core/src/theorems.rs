//! Zero counting by the argument principle, and the hypothesis and conclusion
//! quantities of the non-vanishing criteria: local rectangle, all heights,
//! the Riemann-hypothesis normalization, and finite families.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::coeffs::{build_coefficients, CoefficientTable};
use crate::contour::ZeroHypothesis;
use crate::error::{Error, Result};
use crate::eval::{evaluate_l, log_completed};
use crate::instance::AutomorphicInstance;
use crate::moments::{moment_i_integrated_on, weighted_second_moment_on, CriticalLine};

const COUNT_TOL: f64 = 1e-9;
const MAX_BISECTIONS: usize = 40;
const CONFIDENCE_RESIDUAL: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCountResult {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t1: f64,
    pub t2: f64,
    pub count: u64,
    /// Total change of `arg Lambda` along the boundary, in radians.
    pub arg_variation: f64,
    /// Deepest bisection level used while tracking the argument.
    pub depth: usize,
    pub confident: bool,
}

fn wrap(a: f64) -> f64 {
    let mut d = a % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

struct ArgTracker<'a> {
    instance: &'a AutomorphicInstance,
    max_depth: usize,
    reached: usize,
    exhausted: bool,
}

impl ArgTracker<'_> {
    fn phase(&self, s: Complex64) -> Result<f64> {
        Ok(log_completed(self.instance, s, COUNT_TOL)?.im)
    }

    /// Continuous change of `arg Lambda` along the segment `[a, b]`.
    fn segment(&mut self, a: Complex64, b: Complex64, step: f64) -> Result<f64> {
        let len = (b - a).norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let n = (len / step).ceil().max(1.0) as usize;
        let mut total = 0.0;
        let mut prev = self.phase(a)?;
        for k in 1..=n {
            let lo = a + (b - a) * ((k - 1) as f64 / n as f64);
            let hi = if k == n { b } else { a + (b - a) * (k as f64 / n as f64) };
            let next = self.phase(hi)?;
            total += self.refine(lo, hi, prev, next, 0)?;
            prev = next;
        }
        Ok(total)
    }

    fn refine(&mut self, a: Complex64, b: Complex64, pa: f64, pb: f64, depth: usize) -> Result<f64> {
        let d = wrap(pb - pa);
        self.reached = self.reached.max(depth);
        if d.abs() <= PI / 2.0 {
            return Ok(d);
        }
        if depth >= self.max_depth {
            self.exhausted = true;
            return Ok(d);
        }
        let mid = (a + b) * 0.5;
        let pm = self.phase(mid)?;
        Ok(self.refine(a, mid, pa, pm, depth + 1)? + self.refine(mid, b, pm, pb, depth + 1)?)
    }
}

/// Zeros of `Lambda` in `sigma_lo < Re s < sigma_hi`, `T1 < Im s < T2`, by the
/// winding number of the completed function along the boundary.
pub fn count_zeros_rectangle(
    instance: &AutomorphicInstance,
    sigma_lo: f64,
    sigma_hi: f64,
    t1: f64,
    t2: f64,
) -> Result<ZeroCountResult> {
    if !(sigma_lo < sigma_hi) || !(t1 <= t2) {
        return Err(Error::domain("rectangle needs sigma_lo < sigma_hi and T1 <= T2"));
    }
    let mut out = ZeroCountResult {
        sigma_lo,
        sigma_hi,
        t1,
        t2,
        count: 0,
        arg_variation: 0.0,
        depth: 0,
        confident: true,
    };
    if t1 == t2 {
        return Ok(out);
    }
    let t1 = nudge(instance, sigma_lo, sigma_hi, t1, -1.0)?;
    let t2 = nudge(instance, sigma_lo, sigma_hi, t2, 1.0)?;
    let mut tracker = ArgTracker { instance, max_depth: MAX_BISECTIONS, reached: 0, exhausted: false };
    let step = 0.25f64.min(PI / (1.0 + instance.degree as f64 * (2.0 + t2.abs()).ln()));
    let corners = [
        Complex64::new(sigma_lo, t1),
        Complex64::new(sigma_hi, t1),
        Complex64::new(sigma_hi, t2),
        Complex64::new(sigma_lo, t2),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        total += tracker.segment(corners[k], corners[(k + 1) % 4], step)?;
    }
    let winding = total / (2.0 * PI);
    let count = winding.round();
    out.t1 = t1;
    out.t2 = t2;
    out.arg_variation = total;
    out.depth = tracker.reached;
    out.count = count.max(0.0) as u64;
    out.confident = !tracker.exhausted && (winding - count).abs() < CONFIDENCE_RESIDUAL && count >= 0.0;
    Ok(out)
}

/// Moves a horizontal edge by steps of 1e-4 (up to 1e-3, away from the
/// rectangle) while `L` is numerically zero at a sample on it.
fn nudge(instance: &AutomorphicInstance, lo: f64, hi: f64, t: f64, dir: f64) -> Result<f64> {
    let mut t_edge = t;
    for _ in 0..10 {
        let mut hit = false;
        for k in 0..=16 {
            let s = Complex64::new(lo + (hi - lo) * k as f64 / 16.0, t_edge);
            if instance.pole_order > 0 && (s - 1.0).norm() < 1e-3 {
                continue;
            }
            match evaluate_l(instance, s, COUNT_TOL) {
                Ok(v) if v.value.norm() < 1e-7 => hit = true,
                Ok(_) => {}
                Err(Error::Pole { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if !hit {
            return Ok(t_edge);
        }
        t_edge += dir * 1e-4;
    }
    Ok(t_edge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Local,
    #[serde(rename = "all-T")]
    AllT,
    RhCorollary,
    Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HypothesisSatisfiedAtConstantC,
    HypothesisNotSatisfied,
    Informational,
}

/// One grid point of a sweep over `T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub t: f64,
    pub x: f64,
    pub hypothesis: f64,
    pub normalized: f64,
    /// `epsilon` of the row in the Riemann-hypothesis scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberRow {
    pub label: String,
    pub t: f64,
    pub hypothesis: f64,
}

/// Measured constants of the chain
/// `left <= K (log x)^2 int_1^x I_y dy` for one `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainRow {
    pub x: f64,
    pub left: f64,
    pub right: f64,
    pub k: f64,
    pub lower_zero_term: f64,
    pub lower_length_term: f64,
    /// `left / (lower_zero_term + lower_length_term)`.
    pub lower_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub params: BTreeMap<String, f64>,
    pub hypothesis: f64,
    pub comparison: f64,
    pub ratio: f64,
    pub slope: Option<f64>,
    pub verdict: Verdict,
    pub members: Vec<MemberRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<GridRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<ChainRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_count: Option<ZeroCountResult>,
    /// Scan mode: the hypothesis at the configured constant forces a zero count of 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Least-squares slope of `log v` against `log T` over positive entries.
pub fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(t, v)| *t > 0.0 && *v > 0.0).map(|(t, v)| (t.ln(), v.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

/// How the local check treats the zero: a given (possibly synthetic) point, or
/// a scan of the rectangle for actual zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalMode {
    Hypothesis(ZeroHypothesis),
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCheck {
    pub sigma: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub t1: f64,
    pub t2: f64,
    /// Configured constant `c` in "hypothesis satisfied at constant c".
    pub constant: f64,
    pub tol: f64,
}

fn validate_local(p: &LocalCheck) -> Result<()> {
    if !(p.sigma >= 0.5) || !(p.theta > 0.0) || !(p.epsilon > 0.0 && p.epsilon < 0.5) {
        return Err(Error::domain("need sigma >= 1/2, theta > 0, 0 < epsilon < 1/2"));
    }
    if !(p.t2 >= 1.0) || !(p.t1 >= 0.0 && p.t1 <= p.t2 / 2.0) {
        return Err(Error::domain("need T2 >= 1 and 0 <= T1 <= T2/2"));
    }
    Ok(())
}

fn table_for(instance: &AutomorphicInstance, x: f64) -> Result<CoefficientTable> {
    build_coefficients(instance, (x.floor() as usize).max(1))
}

/// Measured chain constant at mollifier length `x`.
pub fn chain_row(
    line: &CriticalLine,
    table: &CoefficientTable,
    hyp: &ZeroHypothesis,
    t1: f64,
    t2: f64,
    x: f64,
    tol: f64,
) -> Result<ChainRow> {
    let w = weighted_second_moment_on(line, hyp.gamma(), t1, t2, x, hyp.beta(), tol)?;
    let integral = moment_i_integrated_on(line, table, t1, t2, x, tol)?.value;
    let right = x.ln().powi(2) * integral;
    let left = w.result.value;
    Ok(ChainRow {
        x,
        left,
        right,
        k: left / right,
        lower_zero_term: w.lower_zero_term,
        lower_length_term: w.lower_length_term,
        lower_constant: left / (w.lower_zero_term + w.lower_length_term),
    })
}

/// Hypothesis `int_1^{T2^theta} I_y(T1, T2) dy` against `T2^{2 sigma theta - 5 - 2m}`.
pub fn thm_local_check(instance: &AutomorphicInstance, p: &LocalCheck, mode: LocalMode) -> Result<TheoremReport> {
    validate_local(p)?;
    let m = instance.degree as f64;
    let x = p.t2.powf(p.theta);
    let line = CriticalLine::new(instance);
    let table = table_for(instance, x)?;
    let hypothesis = moment_i_integrated_on(&line, &table, p.t1, p.t2, x, p.tol)?.value;
    let comparison = p.t2.powf(2.0 * p.sigma * p.theta - 5.0 - 2.0 * m);
    let ratio = hypothesis / comparison;
    let satisfied = ratio <= p.constant;
    let mut report = TheoremReport {
        theorem: TheoremId::Local,
        params: params(&[
            ("sigma", p.sigma),
            ("theta", p.theta),
            ("epsilon", p.epsilon),
            ("T1", p.t1),
            ("T2", p.t2),
            ("constant", p.constant),
            ("x", x),
        ]),
        hypothesis,
        comparison,
        ratio,
        slope: None,
        verdict: if satisfied { Verdict::HypothesisSatisfiedAtConstantC } else { Verdict::HypothesisNotSatisfied },
        members: Vec::new(),
        rows: Vec::new(),
        chain: Vec::new(),
        zero_count: None,
        consistent: None,
    };
    match mode {
        LocalMode::Hypothesis(hyp) => {
            if x >= 2.0 {
                report.chain.push(chain_row(&line, &table, &hyp, p.t1, p.t2, x, p.tol)?);
            }
            report.params.insert("beta0".into(), hyp.beta());
            report.params.insert("gamma0".into(), hyp.gamma());
        }
        LocalMode::Scan => {
            let lo = p.sigma + p.epsilon;
            let count = if lo < 1.0 { Some(count_zeros_rectangle(instance, lo, 1.0, p.t1, p.t2)?) } else { None };
            let zeros = count.as_ref().map_or(0, |c| c.count);
            report.consistent = Some(!satisfied || zeros == 0);
            report.zero_count = count;
            if !satisfied {
                report.verdict = Verdict::Informational;
            }
        }
    }
    Ok(report)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|t| !(*t >= 1.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("T grid must be nonempty, increasing and >= 1"));
    }
    Ok(())
}

/// `int_1^{T^theta} I_y(range) dy` at each grid point, with one coefficient table
/// and one cached critical line shared across the sweep.
fn integrated_sweep(
    instance: &AutomorphicInstance,
    theta: f64,
    grid: &[f64],
    dyadic: bool,
    tol: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    let x_top = grid.last().copied().unwrap_or(1.0).powf(theta);
    let table = table_for(instance, x_top)?;
    let line = CriticalLine::new(instance);
    grid.iter()
        .map(|&t| {
            let x = t.powf(theta);
            let (t1, t2) = if dyadic { (t, 2.0 * t) } else { (0.0, t) };
            Ok((t, x, moment_i_integrated_on(&line, &table, t1, t2, x, tol)?.value))
        })
        .collect()
}

/// `sup_T T^{-2 sigma theta} int_1^{T^theta} I_y(0, T) dy` over the grid, or with
/// `dyadic` the variant `T^{-2 sigma theta + 3} int_1^{T^theta} I_y(T, 2T) dy`.
pub fn thm_global_sup(
    instance: &AutomorphicInstance,
    sigma: f64,
    theta: f64,
    grid: &[f64],
    dyadic: bool,
    constant: f64,
    tol: f64,
) -> Result<TheoremReport> {
    check_grid(grid)?;
    if !(sigma >= 0.5) || !(theta > 0.0) {
        return Err(Error::domain("need sigma >= 1/2 and theta > 0"));
    }
    let exponent = -2.0 * sigma * theta + if dyadic { 3.0 } else { 0.0 };
    let rows: Vec<GridRow> = integrated_sweep(instance, theta, grid, dyadic, tol)?
        .into_iter()
        .map(|(t, x, h)| GridRow { t, x, hypothesis: h, normalized: t.powf(exponent) * h, epsilon: None })
        .collect();
    let best = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
    let slope = log_slope(&rows.iter().map(|r| (r.t, r.normalized)).collect::<Vec<_>>());
    Ok(TheoremReport {
        theorem: TheoremId::AllT,
        params: params(&[
            ("sigma", sigma),
            ("theta", theta),
            ("dyadic", if dyadic { 1.0 } else { 0.0 }),
            ("constant", constant),
            ("exponent", exponent),
        ]),
        hypothesis: best,
        comparison: 1.0,
        ratio: best,
        slope,
        verdict: if best <= constant { Verdict::HypothesisSatisfiedAtConstantC } else { Verdict::HypothesisNotSatisfied },
        members: Vec::new(),
        rows,
        chain: Vec::new(),
        zero_count: None,
        consistent: None,
    })
}

/// Rows `T^{-(1+epsilon) theta} int_1^{T^theta} I_y(0, T) dy` per `epsilon`;
/// the reported slope and sup belong to the first `epsilon`.
pub fn rh_criterion_scan(
    instance: &AutomorphicInstance,
    theta: f64,
    epsilons: &[f64],
    grid: &[f64],
    tol: f64,
) -> Result<TheoremReport> {
    check_grid(grid)?;
    if epsilons.is_empty() || !(theta > 0.0) {
        return Err(Error::domain("need at least one epsilon and theta > 0"));
    }
    let sweep = integrated_sweep(instance, theta, grid, false, tol)?;
    let mut rows = Vec::new();
    for &eps in epsilons {
        for &(t, x, h) in &sweep {
            rows.push(GridRow { t, x, hypothesis: h, normalized: t.powf(-(1.0 + eps) * theta) * h, epsilon: Some(eps) });
        }
    }
    let first: Vec<&GridRow> = rows.iter().filter(|r| r.epsilon == Some(epsilons[0])).collect();
    let best = first.iter().map(|r| r.normalized).fold(0.0, f64::max);
    let slope = log_slope(&first.iter().map(|r| (r.t, r.normalized)).collect::<Vec<_>>());
    let mut p = params(&[("theta", theta)]);
    for (i, e) in epsilons.iter().enumerate() {
        p.insert(format!("epsilon_{i}"), *e);
    }
    Ok(TheoremReport {
        theorem: TheoremId::RhCorollary,
        params: p,
        hypothesis: best,
        comparison: 1.0,
        ratio: best,
        slope,
        verdict: Verdict::Informational,
        members: Vec::new(),
        rows,
        chain: Vec::new(),
        zero_count: None,
        consistent: None,
    })
}

#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub members: Vec<AutomorphicInstance>,
    pub description: String,
}

impl FamilySpec {
    pub fn new(members: Vec<AutomorphicInstance>, description: impl Into<String>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::domain("family is empty"));
        }
        let m = members[0].degree;
        if members.iter().any(|p| p.degree != m) {
            return Err(Error::domain("family members must share one degree"));
        }
        Ok(FamilySpec { members, description: description.into() })
    }

    pub fn degree(&self) -> usize {
        self.members[0].degree
    }
}

/// `sum_{pi in F} int_1^{T^theta} I_y(0, T) dy` against `|F| T^{2 sigma theta}`;
/// the slope deficit `2 sigma theta - slope` estimates the family exponent.
pub fn family_condition(
    family: &FamilySpec,
    sigma: f64,
    theta: f64,
    grid: &[f64],
    constant: f64,
    tol: f64,
) -> Result<TheoremReport> {
    check_grid(grid)?;
    let size = family.members.len() as f64;
    let per_member: Vec<Vec<(f64, f64, f64)>> = family
        .members
        .par_iter()
        .map(|p| integrated_sweep(p, theta, grid, false, tol))
        .collect::<Result<_>>()?;
    let mut members = Vec::new();
    let mut rows = Vec::new();
    for (gi, &t) in grid.iter().enumerate() {
        let mut total = 0.0;
        for (p, sweep) in family.members.iter().zip(&per_member) {
            let h = sweep[gi].2;
            total += h;
            members.push(MemberRow { label: p.label.clone(), t, hypothesis: h });
        }
        rows.push(GridRow {
            t,
            x: t.powf(theta),
            hypothesis: total,
            normalized: total / (size * t.powf(2.0 * sigma * theta)),
            epsilon: None,
        });
    }
    let slope = log_slope(&rows.iter().map(|r| (r.t, r.hypothesis / size)).collect::<Vec<_>>());
    let best = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
    let mut p = params(&[("sigma", sigma), ("theta", theta), ("size", size), ("constant", constant)]);
    if let Some(s) = slope {
        p.insert("delta_fit".into(), 2.0 * sigma * theta - s);
    }
    Ok(TheoremReport {
        theorem: TheoremId::Family,
        params: p,
        hypothesis: rows.last().map_or(0.0, |r| r.hypothesis),
        comparison: size * grid.last().copied().unwrap_or(1.0).powf(2.0 * sigma * theta),
        ratio: best,
        slope,
        verdict: if best <= constant { Verdict::HypothesisSatisfiedAtConstantC } else { Verdict::HypothesisNotSatisfied },
        members,
        rows,
        chain: Vec::new(),
        zero_count: None,
        consistent: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyZeroStatistic {
    pub count: usize,
    pub ratio: f64,
    pub members: Vec<(String, ZeroCountResult)>,
    /// Members whose count was not confident; excluded from `count`.
    pub excluded: Vec<String>,
}

/// Members with at least one zero in `Re s >= sigma`, `0 <= Im s <= T`.
/// The closed edge is realized by the open rectangle from `sigma - 1e-4`.
pub fn family_zero_statistic(family: &FamilySpec, sigma: f64, t: f64) -> Result<FamilyZeroStatistic> {
    let counts: Vec<ZeroCountResult> = family
        .members
        .par_iter()
        .map(|p| count_zeros_rectangle(p, sigma - 1e-4, 1.5, 0.0, t))
        .collect::<Result<_>>()?;
    let mut out = FamilyZeroStatistic { count: 0, ratio: 0.0, members: Vec::new(), excluded: Vec::new() };
    for (p, r) in family.members.iter().zip(counts) {
        if !r.confident {
            out.excluded.push(p.label.clone());
        } else if r.count > 0 {
            out.count += 1;
        }
        out.members.push((p.label.clone(), r));
    }
    out.ratio = out.count as f64 / family.members.len() as f64;
    Ok(out)
}
