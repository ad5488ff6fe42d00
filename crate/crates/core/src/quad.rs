//! Gauss–Legendre and Gauss–Kronrod rules with deterministic adaptive subdivision.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const K15_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Weights of the embedded 7-point Gauss rule at the odd-indexed Kronrod nodes.
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// A 15-point Kronrod rule on `[-1, 1]` with the embedded 7-point Gauss weights
/// (zero at nodes the Gauss rule does not use).
#[derive(Debug, Clone)]
pub struct KronrodRule {
    pub nodes: [f64; 15],
    pub weights: [f64; 15],
    pub gauss_weights: [f64; 15],
}

pub fn kronrod15() -> &'static KronrodRule {
    static RULE: OnceLock<KronrodRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; 15];
        let mut weights = [0.0; 15];
        let mut gauss_weights = [0.0; 15];
        for i in 0..7 {
            nodes[i] = -K15_NODES[i];
            nodes[14 - i] = K15_NODES[i];
            weights[i] = K15_WEIGHTS[i];
            weights[14 - i] = K15_WEIGHTS[i];
            if i % 2 == 1 {
                gauss_weights[i] = G7_WEIGHTS[i / 2];
                gauss_weights[14 - i] = G7_WEIGHTS[i / 2];
            }
        }
        weights[7] = K15_WEIGHTS[7];
        gauss_weights[7] = G7_WEIGHTS[3];
        KronrodRule { nodes, weights, gauss_weights }
    })
}

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

pub(crate) fn check_finite(v: Complex64, at: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { location: format!("{at:.12e}") })
    }
}

/// Kronrod value on `[a, b]` and `|K15 - G7|`.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let rule = kronrod15();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for i in 0..15 {
        let x = mid + half * rule.nodes[i];
        let v = check_finite(f(x)?, x)?;
        k += v * rule.weights[i];
        g += v * rule.gauss_weights[i];
    }
    Ok((k * half, ((k - g) * half).norm()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

const MAX_DEPTH: usize = 30;

/// Adaptive G7K15 over `[a, b]`: initial panels of width at most
/// `initial_width`, each bisected until its embedded error is below its share
/// `tol * width / (b - a)` of the tolerance. Panels are summed left to right.
pub fn adaptive<F>(mut f: F, a: f64, b: f64, tol: f64, initial_width: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if b == a {
        return Ok(Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 });
    }
    if !(b > a) || !(tol > 0.0) || !(initial_width > 0.0) {
        return Err(Error::domain("adaptive quadrature needs a < b, tol > 0, width > 0"));
    }
    let range = b - a;
    let count = (range / initial_width).ceil().max(1.0) as usize;
    let step = range / count as f64;
    let mut out = Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 };
    for i in 0..count {
        let lo = a + step * i as f64;
        let hi = if i + 1 == count { b } else { a + step * (i + 1) as f64 };
        refine(&mut f, lo, hi, tol / range, 0, &mut out)?;
    }
    Ok(out)
}

fn refine<F>(f: &mut F, a: f64, b: f64, density: f64, depth: usize, out: &mut Quadrature) -> Result<()>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let (v, e) = gk15(f, a, b)?;
    if e <= density * (b - a) || depth >= MAX_DEPTH {
        out.value += v;
        out.error += e;
        out.panels += 1;
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, density, depth + 1, out)?;
    refine(f, mid, b, density, depth + 1, out)
}

/// Real-valued adaptive quadrature with initial panel width `min(0.25, pi/(4 rate))`.
pub fn quad_panel<F>(mut f: F, a: f64, b: f64, tol: f64, oscillation_rate: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let width = initial_width(oscillation_rate);
    let q = adaptive(|x| f(x).map(|v| Complex64::new(v, 0.0)), a, b, tol, width)?;
    Ok((q.value.re, q.error))
}

/// `min(0.25, pi / (4 rate))`.
pub fn initial_width(oscillation_rate: f64) -> f64 {
    if oscillation_rate > 0.0 {
        (PI / (4.0 * oscillation_rate)).min(0.25)
    } else {
        0.25
    }
}
