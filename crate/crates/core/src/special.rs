//! Complex log-gamma and regularized upper incomplete gamma.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `B_2, B_4, ..., B_30`.
pub const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Stieltjes constants `gamma_0, gamma_1, gamma_2, gamma_3`.
pub const STIELTJES: [f64; 4] = [
    0.577_215_664_901_532_9,
    -0.072_815_845_483_676_72,
    -0.009_690_363_192_872_318,
    0.002_053_834_420_303_346,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_RADIUS: f64 = 15.0;
const STIRLING_TERMS: usize = 11;

/// Principal branch of `log Gamma(z)`, analytic on the plane cut along the
/// non-positive real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("log_gamma at non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole { what: "Gamma", re: z.re, im: z.im });
    }
    // shift right until Stirling is accurate; each principal log has its cut on
    // z in (-inf, -k], so the sum stays principal on the cut plane
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 0.0 || w.norm() < STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(z: Complex64) -> Complex64 {
    let mut acc = (z - 0.5) * z.ln() - z + LN_SQRT_2PI;
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut pow = zinv;
    for k in 1..=STIRLING_TERMS {
        let b = BERNOULLI_EVEN[k - 1];
        acc += pow * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        pow *= zinv2;
    }
    acc
}

/// `Gamma(a, z) / Gamma(a)` for complex `a` and `z` off the negative real axis,
/// with `log Gamma(a)` supplied by the caller. Returns the value and an
/// estimate of its absolute rounding error.
///
/// Uses the power series of the lower function when `|z|` is below `|a|` and
/// a Legendre continued fraction otherwise.
pub fn gamma_q_regularized(a: Complex64, z: Complex64, log_gamma_a: Complex64) -> Result<(Complex64, f64)> {
    if z.norm() == 0.0 {
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    let log_pref = -z + a * z.ln() - log_gamma_a;
    let eps = f64::EPSILON;
    if z.norm() < a.norm().max(1.0) + 2.0 {
        // gamma(a, z) = z^a e^{-z} sum_k z^k / (a (a+1) ... (a+k))
        let mut term = a.inv();
        let mut sum = term;
        let mut max_term = term.norm();
        for k in 1..100_000 {
            term *= z / (a + k as f64);
            sum += term;
            max_term = max_term.max(term.norm());
            if term.norm() <= eps * sum.norm() * 0.1 {
                let lower = log_pref.exp() * sum;
                let err = eps * (log_pref.re.exp() * max_term * (k as f64).sqrt() * 4.0 + 1.0);
                return Ok((Complex64::new(1.0, 0.0) - lower, err));
            }
        }
        return Err(Error::domain(format!("incomplete gamma series did not converge at a={a}, z={z}")));
    }
    // modified Lentz on Gamma(a,z) = e^{-z} z^a / (z+1-a- 1(1-a)/(z+3-a- 2(2-a)/(z+5-a-...)))
    let tiny = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < eps {
            let val = log_pref.exp() * h;
            let err = val.norm() * eps * (i as f64).sqrt() * 4.0;
            return Ok((val, err));
        }
    }
    Err(Error::domain(format!("incomplete gamma continued fraction did not converge at a={a}, z={z}")))
}

/// `log(pi)`.
pub const LN_PI: f64 = 1.144_729_885_849_400_2;

pub(crate) fn ln_2pi() -> f64 {
    (2.0 * PI).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn special_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn recurrence_and_reflection() {
        for z in [c(0.3, 0.7), c(-2.5, 1.0), c(4.0, -30.0), c(0.1, 500.0), c(-7.3, -0.2)] {
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            // equal modulo 2 pi i
            let d = lhs - rhs;
            assert!(d.re.abs() < 1e-12, "{z}");
            let k = (d.im / (2.0 * PI)).round();
            assert!((d.im - 2.0 * PI * k).abs() < 1e-11, "{z}");
            if z.im.abs() > 50.0 {
                continue;
            }
            // Gamma(z) Gamma(1-z) = pi / sin(pi z)
            let refl = (log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap()).exp();
            let expect = PI / (PI * z).sin();
            assert!((refl - expect).norm() < 1e-10 * expect.norm(), "{z}");
        }
    }

    #[test]
    fn incomplete_gamma_limits() {
        // Gamma(1, z) = e^{-z}
        for z in [c(0.5, 0.0), c(3.0, 4.0), c(20.0, -1.0), c(0.2, 5.0)] {
            let a = c(1.0, 0.0);
            let (q, _) = gamma_q_regularized(a, z, c(0.0, 0.0)).unwrap();
            assert!((q - (-z).exp()).norm() < 1e-13, "{z}");
        }
        // Gamma(2, z) = (1+z) e^{-z}
        let z = c(7.0, 9.0);
        let (q, _) = gamma_q_regularized(c(2.0, 0.0), z, c(0.0, 0.0)).unwrap();
        assert!((q - (1.0 + z) * (-z).exp()).norm() < 1e-13);
    }
}
