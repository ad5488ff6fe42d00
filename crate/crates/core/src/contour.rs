//! Truncated vertical-line integrals with tail certificates, and the kernel
//! `G_t(w)`, its inverse Mellin transform `g_t(u)` and three independent routes
//! to `J_t(x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::eval::evaluate_relative;
use crate::hurwitz::hurwitz_zeta;
use crate::instance::AutomorphicInstance;
use crate::mollifier::{h_closed, mollifier_sweep};
use crate::quad::{check_finite, gauss_legendre, gk15};
use crate::special::STIELTJES;

const MAX_DOUBLINGS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub c: f64,
    pub height: f64,
    pub nodes_per_unit: usize,
    /// `K` in the tail bound `K H^{1-p} / (p-1)`.
    pub tail_constant: f64,
    pub decay_exponent: f64,
    pub tol: f64,
}

impl ContourSpec {
    /// Height chosen so that the tail certificate uses half of `tol`.
    pub fn new(c: f64, decay_exponent: f64, tail_constant: f64, tol: f64) -> Result<Self> {
        let height = tail_height(decay_exponent, tail_constant, 0.5 * tol)?;
        Ok(ContourSpec { c, height, nodes_per_unit: 16, tail_constant, decay_exponent, tol })
    }

    pub fn with_min_height(mut self, h: f64) -> Self {
        self.height = self.height.max(h);
        self
    }

    pub fn with_nodes_per_unit(mut self, n: usize) -> Self {
        self.nodes_per_unit = n.max(8);
        self
    }

    pub fn tail_certificate(&self) -> f64 {
        self.tail_constant * self.height.powf(1.0 - self.decay_exponent) / (self.decay_exponent - 1.0)
    }
}

/// Smallest `H` with `K H^{1-p} / (p-1) <= tol`.
pub fn tail_height(decay_exponent: f64, decay_constant: f64, tol: f64) -> Result<f64> {
    if !(decay_exponent > 1.0) {
        return Err(Error::domain("tail decay exponent must exceed 1"));
    }
    if !(tol > 0.0) || !(decay_constant >= 0.0) {
        return Err(Error::domain("tail height needs tol > 0 and a nonnegative constant"));
    }
    let p1 = decay_exponent - 1.0;
    Ok((decay_constant / (p1 * tol)).powf(1.0 / p1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineIntegral {
    pub value: Complex64,
    pub quad_error: f64,
    pub tail: f64,
    pub height: f64,
    pub nodes_per_unit: usize,
}

impl LineIntegral {
    pub fn error(&self) -> f64 {
        self.quad_error + self.tail
    }
}

/// `(1/2 pi i) int_{c-iH}^{c+iH} f(w) dw` by composite G7K15 panels; the node
/// density doubles until the embedded error is below half the tolerance.
pub fn line_integral<F>(mut f: F, spec: &ContourSpec) -> Result<LineIntegral>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if !(spec.height > 0.0) {
        return Err(Error::domain("contour height must be positive"));
    }
    let mut npu = spec.nodes_per_unit.max(8);
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        let panel = 15.0 / npu as f64;
        let count = (2.0 * spec.height / panel).ceil() as usize;
        let step = 2.0 * spec.height / count as f64;
        let mut value = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut g = |v: f64| {
            let w = Complex64::new(spec.c, v);
            check_finite(f(w)?, v)
        };
        for i in 0..count {
            let a = -spec.height + step * i as f64;
            let (v, e) = gk15(&mut g, a, a + step)?;
            value += v;
            err += e;
        }
        let out = LineIntegral {
            value: value / (2.0 * PI),
            quad_error: err / (2.0 * PI),
            tail: spec.tail_certificate(),
            height: spec.height,
            nodes_per_unit: npu,
        };
        if out.quad_error <= 0.5 * spec.tol {
            return Ok(out);
        }
        last = Some(out);
        npu *= 2;
    }
    let out = last.expect("at least one pass");
    Err(Error::ToleranceUnreachable {
        requested: spec.tol,
        achieved: out.error(),
        best_re: out.value.re,
        best_im: out.value.im,
    })
}

/// One pass/fail line of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: &str, inputs: &[(&str, f64)], value: f64, reference: f64, tolerance: f64) -> Self {
        let pass = (value - reference).abs() <= tolerance;
        CheckReport {
            check: check.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            reference,
            tolerance,
            pass,
        }
    }
}

/// Spec for `(1/2 pi i) int y^w / w^2 dw`: after one integration by parts the
/// tail of each side is at most `2 y^c / (|log y| H^2)`.
pub fn log_identity_spec(y: f64, c: f64, tol: f64) -> Result<ContourSpec> {
    if !(y > 0.0) || y == 1.0 || !(c > 0.0) {
        return Err(Error::domain("log identity needs y > 0, y != 1, c > 0"));
    }
    let l = y.ln().abs();
    let k = 4.0 * y.powf(c) / (PI * l);
    Ok(ContourSpec::new(c, 3.0, k, tol)?.with_nodes_per_unit(16.max((4.0 * l).ceil() as usize)))
}

pub fn log_identity_integral(y: f64, c: f64, tol: f64) -> Result<LineIntegral> {
    let spec = log_identity_spec(y, c, tol)?;
    let ly = y.ln();
    line_integral(|w| Ok((w * ly).exp() / (w * w)), &spec)
}

/// Compares the truncated integral with `log y` (`y > 1`) or 0 (`y < 1`).
pub fn verify_log_identity(y: f64, c: f64, tol: f64) -> Result<CheckReport> {
    let li = log_identity_integral(y, c, tol)?;
    let reference = if y > 1.0 { y.ln() } else { 0.0 };
    let mut r = CheckReport::new("log-identity", &[("y", y), ("c", c)], li.value.re, reference, tol);
    r.pass &= li.value.im.abs() <= tol;
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroKind {
    Synthetic,
    VerifiedZero,
}

/// A point `rho_0 = beta_0 + i gamma_0` playing the role of a zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroHypothesis {
    pub rho: Complex64,
    pub kind: ZeroKind,
}

impl ZeroHypothesis {
    pub fn synthetic(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!("beta_0 = {beta} outside (0, 1)")));
        }
        Ok(ZeroHypothesis { rho: Complex64::new(beta, gamma), kind: ZeroKind::Synthetic })
    }

    pub fn beta(&self) -> f64 {
        self.rho.re
    }

    pub fn gamma(&self) -> f64 {
        self.rho.im
    }

    pub fn conj(&self) -> Self {
        ZeroHypothesis { rho: self.rho.conj(), kind: self.kind }
    }

    /// Pole `rho_0 + 1/2 - it` of the explicit integrand.
    pub fn pole(&self, t: f64) -> Complex64 {
        self.rho + Complex64::new(0.5, -t)
    }
}

fn kronecker(instance: &AutomorphicInstance) -> i32 {
    instance.pole_order as i32
}

/// `(w - 3/2 + it)^delta / ((w+1)^2 (w - 1/2 + it - rho_0) (w + it + 1)^{1+m+delta})`.
fn explicit_kernel(instance: &AutomorphicInstance, t: f64, w: Complex64, hyp: &ZeroHypothesis) -> Complex64 {
    let it = Complex64::new(0.0, t);
    let d = kronecker(instance);
    let m = instance.degree as i32;
    let num = if d > 0 { w - 1.5 + it } else { Complex64::new(1.0, 0.0) };
    let wp1 = w + 1.0;
    num / (wp1 * wp1 * (w - 0.5 + it - hyp.rho) * (w + it + 1.0).powi(1 + m + d))
}

/// `(s - 1) zeta(s)` from the Stieltjes expansion, for `s` near 1.
fn zeta_pole_product(s: Complex64) -> Complex64 {
    let e = s - 1.0;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut pow = e;
    let mut fact = 1.0;
    for (n, g) in STIELTJES.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += pow * (sign * g / fact);
        pow *= e;
    }
    acc
}

/// `G_t(w) = (w-1)^2 (w-3/2+it)^delta L(w-1/2+it) / ((w+1)^2 (w-1/2+it-rho_0) (w+it+1)^{1+m+delta})`.
pub fn g_kernel(instance: &AutomorphicInstance, t: f64, w: Complex64, hyp: &ZeroHypothesis) -> Result<Complex64> {
    if w.re < 0.0 {
        return Err(Error::domain("G_t is evaluated on Re(w) >= 0"));
    }
    if (w - hyp.pole(t)).norm() < 1e-8 {
        return Err(Error::Pole { what: "G_t", re: w.re, im: w.im });
    }
    let it = Complex64::new(0.0, t);
    let s = w - 0.5 + it;
    let wm1 = w - 1.0;
    let mut head = explicit_kernel(instance, t, w, hyp) * wm1 * wm1;
    let l = if kronecker(instance) > 0 && (s - 1.0).norm() < 1e-4 {
        // (w - 3/2 + it) L(s) = (s - 1) zeta(s), evaluated jointly
        head /= s - 1.0;
        zeta_pole_product(s)
    } else {
        evaluate_relative(instance, s, 1e-12)?.value
    };
    head *= l;
    check_finite(head, w.im)
}

/// `K_L = zeta(Re s - delta)^m`, a bound for `|L(s)|` on `Re s > 1 + delta`.
fn dirichlet_bound(instance: &AutomorphicInstance, sigma: f64) -> Result<f64> {
    let e = sigma - instance.ramanujan_exponent;
    if e <= 1.0 {
        return Err(Error::domain("abscissa too close to the edge of absolute convergence"));
    }
    Ok(hurwitz_zeta(Complex64::new(e, 0.0), 1.0)?.re.powi(instance.degree as i32))
}

fn min_height(t: f64, hyp: &ZeroHypothesis) -> f64 {
    2.0 * (t.abs() + hyp.gamma().abs() + 4.0)
}

/// Spec for `g_t(u)` at abscissa `c`: `|G| <= K_L 2^{2+m} |v|^{-(2+m)}` beyond the
/// minimal height.
pub fn g_spec(
    instance: &AutomorphicInstance,
    t: f64,
    u: f64,
    hyp: &ZeroHypothesis,
    c: f64,
    tol: f64,
) -> Result<ContourSpec> {
    if c <= hyp.beta() + 0.5 {
        return Err(Error::domain("g_t abscissa must lie right of the pole"));
    }
    let m = instance.degree as f64;
    let k = dirichlet_bound(instance, c - 0.5)? * 2f64.powf(2.0 + m) * u.powf(-c) / PI;
    let density = 16.max((4.0 * u.ln().abs()).ceil() as usize);
    Ok(ContourSpec::new(c, 2.0 + m, k, tol)?.with_min_height(min_height(t, hyp)).with_nodes_per_unit(density))
}

/// `g_t(u) = (1/2 pi i) int_{(c)} G_t(w) u^{-w} dw`.
pub fn g_eval(
    instance: &AutomorphicInstance,
    t: f64,
    u: f64,
    hyp: &ZeroHypothesis,
    spec: &ContourSpec,
) -> Result<LineIntegral> {
    if !(u > 0.0) {
        return Err(Error::domain("g_t needs u > 0"));
    }
    let lu = u.ln();
    line_integral(|w| Ok(g_kernel(instance, t, w, hyp)? * (-w * lu).exp()), spec)
}

/// Factors `(w - z_j)^{e_j}` of `G_t(w) / L(w - 1/2 + it)`, coincident points merged.
fn rational_factors(instance: &AutomorphicInstance, t: f64, hyp: &ZeroHypothesis) -> Vec<(Complex64, i32)> {
    let d = kronecker(instance);
    let m = instance.degree as i32;
    let raw = [
        (Complex64::new(1.0, 0.0), 2),
        (Complex64::new(1.5, -t), d),
        (Complex64::new(-1.0, 0.0), -2),
        (hyp.pole(t), -1),
        (Complex64::new(-1.0, -t), -(1 + m + d)),
    ];
    let mut out: Vec<(Complex64, i32)> = Vec::new();
    for (z, e) in raw {
        if e == 0 {
            continue;
        }
        match out.iter_mut().find(|(p, _)| *p == z) {
            Some(slot) => slot.1 += e,
            None => out.push((z, e)),
        }
    }
    out.retain(|&(_, e)| e != 0);
    out
}

/// Taylor coefficients of `(a + eps)^e` up to `eps^{len-1}`.
fn binomial_series(a: Complex64, e: i32, len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut coef = a.powi(e);
    let inv = a.inv();
    for i in 0..len {
        out.push(coef);
        coef *= inv * ((e - i as i32) as f64 / (i + 1) as f64);
    }
    out
}

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// `r(v) = (1/2 pi i) int_{(c)} R(w) v^{-w} dw` for the rational part `R` of
/// `G_t`: zero for `v >= 1`, the sum of the residues of `R(w) v^{-w}` otherwise.
fn rational_inverse_mellin(factors: &[(Complex64, i32)], v: f64) -> Complex64 {
    if v >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let lv = v.ln();
    let mut total = Complex64::new(0.0, 0.0);
    for (idx, &(p, e)) in factors.iter().enumerate() {
        if e >= 0 {
            continue;
        }
        let k = (-e) as usize;
        // v^{-p} e^{-eps log v}
        let mut series = Vec::with_capacity(k);
        let mut coef = (-p * lv).exp();
        for i in 0..k {
            series.push(coef);
            coef *= -lv / (i + 1) as f64;
        }
        for (j, &(z, ez)) in factors.iter().enumerate() {
            if j != idx {
                series = series_mul(&series, &binomial_series(p - z, ez, k));
            }
        }
        total += series[k - 1];
    }
    total
}

/// `g_t(u)` from the Dirichlet expansion of `L` on the contour:
/// `g_t(u) = sum_{n <= 1/u} lambda(n) n^{1/2-it} r(n u)`.
pub fn g_series(
    instance: &AutomorphicInstance,
    table: &CoefficientTable,
    t: f64,
    u: f64,
    hyp: &ZeroHypothesis,
) -> Result<Complex64> {
    let factors = rational_factors(instance, t, hyp);
    g_series_with(&factors, table, t, u)
}

fn g_series_with(factors: &[(Complex64, i32)], table: &CoefficientTable, t: f64, u: f64) -> Result<Complex64> {
    if !(u > 0.0) {
        return Err(Error::domain("g_t needs u > 0"));
    }
    if u >= 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n_top = (1.0 / u).floor() as usize;
    table.ensure_covers(n_top)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=n_top {
        let lam = table.lambda(n);
        if lam.norm() == 0.0 {
            continue;
        }
        let ln_n = (n as f64).ln();
        let weight = lam * (Complex64::new(0.5, -t) * ln_n).exp();
        acc += weight * rational_inverse_mellin(factors, n as f64 * u);
    }
    Ok(acc)
}

pub const G_CACHE_POINTS: usize = 2048;

/// `g_t` tabulated on a geometric grid over `[u_min, 1]`, read back by cubic
/// interpolation in `log u`.
#[derive(Debug, Clone)]
pub struct GCache {
    pub t: f64,
    pub u_min: f64,
    step: f64,
    values: Vec<Complex64>,
    /// Largest interpolation defect observed at the grid midpoints.
    pub interpolation_error: f64,
}

impl GCache {
    pub fn new(
        instance: &AutomorphicInstance,
        table: &CoefficientTable,
        t: f64,
        u_min: f64,
        hyp: &ZeroHypothesis,
    ) -> Result<Self> {
        if !(u_min > 0.0 && u_min < 1.0) {
            return Err(Error::domain("g cache needs 0 < u_min < 1"));
        }
        let factors = rational_factors(instance, t, hyp);
        let n = G_CACHE_POINTS;
        let step = -u_min.ln() / (n - 1) as f64;
        let values = (0..n)
            .map(|k| {
                let u = if k + 1 == n { 1.0 } else { (u_min.ln() + step * k as f64).exp() };
                g_series_with(&factors, table, t, u)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cache = GCache { t, u_min, step, values, interpolation_error: 0.0 };
        let mut worst: f64 = 0.0;
        for k in 0..n - 1 {
            let u = (u_min.ln() + step * (k as f64 + 0.5)).exp();
            let exact = g_series_with(&factors, table, t, u)?;
            worst = worst.max((cache.value(u) - exact).norm());
        }
        cache.interpolation_error = worst;
        Ok(cache)
    }

    pub fn value(&self, u: f64) -> Complex64 {
        if u >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.values.len();
        let pos = ((u.ln() - self.u_min.ln()) / self.step).max(0.0);
        let base = (pos.floor() as usize).saturating_sub(1).min(n - 4);
        let x = pos - base as f64;
        // Lagrange weights on nodes 0, 1, 2, 3
        let w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
        let w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
        let w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
        let w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
        let v = &self.values[base..base + 4];
        v[0] * w0 + v[1] * w1 + v[2] * w2 + v[3] * w3
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JValue {
    pub value: Complex64,
    pub error: f64,
    /// Residue contribution (zero for routes that do not pick one up).
    pub residue: Complex64,
    pub height: f64,
}

fn check_j_inputs(x: f64, hyp: &ZeroHypothesis) -> Result<()> {
    if !(x >= 2.0) {
        return Err(Error::domain("J_t requires x >= 2"));
    }
    if !(hyp.beta() > -0.5 && hyp.beta() < 2.5) {
        return Err(Error::domain("beta_0 must lie in (-1/2, 5/2)"));
    }
    Ok(())
}

fn j_line(instance: &AutomorphicInstance, t: f64, x: f64, hyp: &ZeroHypothesis, c: f64, tol: f64) -> Result<LineIntegral> {
    let m = instance.degree as f64;
    let k = x.powf(c) * 2f64.powf(2.0 + m) / PI;
    let density = 16.max((4.0 * x.ln()).ceil() as usize);
    let spec = ContourSpec::new(c, 4.0 + m, k, tol)?.with_min_height(min_height(t, hyp)).with_nodes_per_unit(density);
    let lx = x.ln();
    line_integral(|w| Ok((w * lx).exp() * explicit_kernel(instance, t, w, hyp)), &spec)
}

/// `J_t(x)` on `Re w = 3` with the explicit post-cancellation integrand.
pub fn j_direct(instance: &AutomorphicInstance, t: f64, x: f64, hyp: &ZeroHypothesis, tol: f64) -> Result<JValue> {
    check_j_inputs(x, hyp)?;
    let li = j_line(instance, t, x, hyp, 3.0, tol)?;
    Ok(JValue { value: li.value, error: li.error(), residue: Complex64::new(0.0, 0.0), height: li.height })
}

/// `x^{w_0} (rho_0 - 1)^delta / ((rho_0 - it + 3/2)^2 (rho_0 + 3/2)^{1+m+delta})`
/// with `w_0 = rho_0 + 1/2 - it`.
pub fn residue_term(instance: &AutomorphicInstance, t: f64, x: f64, hyp: &ZeroHypothesis) -> Complex64 {
    let d = kronecker(instance);
    let m = instance.degree as i32;
    let rho = hyp.rho;
    let num = if d > 0 { rho - 1.0 } else { Complex64::new(1.0, 0.0) };
    let a = rho + Complex64::new(1.5, -t);
    (hyp.pole(t) * x.ln()).exp() * num / (a * a * (rho + 1.5).powi(1 + m + d))
}

/// `J_t(x)` from the `Re w = 0` line plus the residue at `rho_0 + 1/2 - it`.
pub fn j_residue(instance: &AutomorphicInstance, t: f64, x: f64, hyp: &ZeroHypothesis, tol: f64) -> Result<JValue> {
    check_j_inputs(x, hyp)?;
    let li = j_line(instance, t, x, hyp, 0.0, tol)?;
    let residue = residue_term(instance, t, x, hyp);
    Ok(JValue { value: li.value + residue, error: li.error(), residue, height: li.height })
}

/// `J_t(x) = int_1^x M_y(1/2+it) (log y) g_t(y/x) dy` with `g_t` read from a
/// cache. Pieces break at the integers and at `x/n`, where `g_t(y/x)` has
/// reduced smoothness.
pub fn j_convolution(
    instance: &AutomorphicInstance,
    table: &CoefficientTable,
    t: f64,
    x: f64,
    hyp: &ZeroHypothesis,
) -> Result<JValue> {
    check_j_inputs(x, hyp)?;
    let cache = GCache::new(instance, table, t, 1.0 / x, hyp)?;
    let (value, error) = convolve(&cache, table, t, x)?;
    Ok(JValue { value, error, residue: Complex64::new(0.0, 0.0), height: 0.0 })
}

fn convolution_breakpoints(x: f64) -> Vec<f64> {
    let n_top = x.floor() as usize;
    let mut pts: Vec<f64> = (1..=n_top).map(|k| k as f64).chain((1..=n_top).map(|n| x / n as f64)).collect();
    pts.push(x);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    pts
}

fn convolve(cache: &GCache, table: &CoefficientTable, t: f64, x: f64) -> Result<(Complex64, f64)> {
    let sweep = mollifier_sweep(table, t, x)?;
    let (n16, w16) = gauss_legendre(16);
    let (n8, w8) = gauss_legendre(8);
    let pts = convolution_breakpoints(x);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut quad_err = 0.0;
    let mut mass = 0.0;
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let k = (0.5 * (a + b)).floor() as usize;
        let (pa, pb) = (sweep.prefix_a(k), sweep.prefix_b(k));
        let f = |y: f64| (pa * y.ln() - pb) * cache.value(y / x);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let hi: Complex64 = n16.iter().zip(&w16).map(|(s, w)| f(mid + half * s) * *w).sum();
        let lo: Complex64 = n8.iter().zip(&w8).map(|(s, w)| f(mid + half * s) * *w).sum();
        acc += hi * half;
        quad_err += ((hi - lo) * half).norm();
        mass += n8.iter().zip(&w8).map(|(s, w)| (pa * (mid + half * s).ln() - pb).norm() * w).sum::<f64>() * half;
    }
    Ok((acc, quad_err + cache.interpolation_error * mass))
}

/// `int_1^x |M_y(1/2+it)| log y dy`.
pub fn mollifier_log_mass(table: &CoefficientTable, t: f64, x: f64) -> Result<f64> {
    let sweep = mollifier_sweep(table, t, x)?;
    let (n8, w8) = gauss_legendre(8);
    let mut mass = 0.0;
    for pair in convolution_breakpoints(x).windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let k = (0.5 * (a + b)).floor() as usize;
        let (pa, pb) = (sweep.prefix_a(k), sweep.prefix_b(k));
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        mass += n8.iter().zip(&w8).map(|(s, w)| (pa * (mid + half * s).ln() - pb).norm() * w).sum::<f64>() * half;
    }
    Ok(mass)
}

/// Relative difference between `G_t(w) H_t(w)` from separate `L` evaluations and
/// the explicit cancelled integrand.
pub fn cancellation_check(
    instance: &AutomorphicInstance,
    t: f64,
    w: Complex64,
    hyp: &ZeroHypothesis,
    tol: f64,
) -> Result<CheckReport> {
    let g = g_kernel(instance, t, w, hyp)?;
    let h = h_closed(instance, t, w)?;
    let explicit = explicit_kernel(instance, t, w, hyp);
    let rel = (g * h - explicit).norm() / explicit.norm();
    Ok(CheckReport::new(
        "cancellation",
        &[("t", t), ("w_re", w.re), ("w_im", w.im), ("rho_re", hyp.rho.re), ("rho_im", hyp.rho.im)],
        rel,
        0.0,
        tol,
    ))
}
