//! Hurwitz zeta `zeta(s, a) = sum_{n>=0} (n+a)^{-s}` by Euler–Maclaurin summation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::BERNOULLI_EVEN;

/// Euler–Maclaurin cutoff `shift` (number of directly summed terms) and the
/// number of Bernoulli corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmParams {
    pub shift: usize,
    pub order: usize,
}

impl EmParams {
    /// `max(20, ceil(1.3 |Im s|))` terms, 12 Bernoulli corrections.
    pub fn for_point(s: Complex64) -> Self {
        EmParams { shift: (1.3 * s.im.abs()).ceil().max(20.0) as usize, order: 12 }
    }

    pub fn doubled(self) -> Self {
        EmParams { shift: self.shift * 2, order: (self.order + 1).min(BERNOULLI_EVEN.len() - 1) }
    }
}

/// Value and an absolute error estimate (remainder bound plus rounding).
pub fn hurwitz_zeta_em(s: Complex64, a: f64, params: EmParams) -> Result<(Complex64, f64)> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { what: "Hurwitz zeta", re: 1.0, im: 0.0 });
    }
    em_sum(s, a, params, false)
}

/// `zeta(s, a) - 1/(s - 1)`, entire in `s`.
pub fn hurwitz_zeta_regular(s: Complex64, a: f64, params: EmParams) -> Result<(Complex64, f64)> {
    em_sum(s, a, params, true)
}

/// `(x^{1-s} - 1)/(s - 1)` without cancellation near `s = 1`.
fn pole_term_regular(s: Complex64, lnx: f64) -> Complex64 {
    let u = (1.0 - s) * lnx;
    let ratio = if u.norm() < 1e-4 {
        1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0))
    } else {
        (u.exp() - 1.0) / u
    };
    -lnx * ratio
}

fn em_sum(s: Complex64, a: f64, params: EmParams, regular: bool) -> Result<(Complex64, f64)> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("Hurwitz parameter a={a} outside (0,1]")));
    }
    let order = params.order.min(BERNOULLI_EVEN.len() - 1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for n in 0..params.shift {
        let term = (-s * (n as f64 + a).ln()).exp();
        sum += term;
        abs_sum += term.norm();
    }
    let x = params.shift as f64 + a;
    let lnx = x.ln();
    let x_ms = (-s * lnx).exp();
    let pole = if regular { pole_term_regular(s, lnx) } else { x_ms * x / (s - 1.0) };
    let mut tail = pole + x_ms * 0.5;
    // B_{2k}/(2k)! (s)_{2k-1} x^{-s-2k+1}
    let mut poch = s;
    let mut xpow = x_ms / x;
    let mut fact = 2.0;
    let mut last = Complex64::new(0.0, 0.0);
    for k in 1..=order + 1 {
        let term = poch * xpow * (BERNOULLI_EVEN[k - 1] / fact);
        if k <= order {
            tail += term;
        } else {
            last = term;
        }
        let k2 = 2.0 * k as f64;
        poch *= (s + (k2 - 1.0)) * (s + k2);
        xpow /= x * x;
        fact *= (k2 + 1.0) * (k2 + 2.0);
    }
    let sigma_k = s.re + (2 * order + 1) as f64;
    let growth = if sigma_k > 0.0 {
        ((s + (2 * order + 1) as f64).norm() / sigma_k).max(1.0)
    } else {
        f64::INFINITY
    };
    let value = sum + tail;
    let rounding = 8.0 * f64::EPSILON * (abs_sum + tail.norm() + value.norm());
    Ok((value, last.norm() * growth + rounding))
}

pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    hurwitz_zeta_em(s, a, EmParams::for_point(s)).map(|(v, _)| v)
}
