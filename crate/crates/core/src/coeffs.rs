//! Dirichlet-series coefficients `lambda(n)` of `L(s)` and `mu(n)` of `1/L(s)`,
//! built multiplicatively from local Satake data.

use std::io::Write;

use num_complex::Complex64;

use crate::arith::SpfSieve;
use crate::error::{Error, Result};
use crate::instance::{AutomorphicInstance, InstanceKind};

/// Complete homogeneous symmetric polynomial `h_k(alpha)`, the coefficient of
/// `p^{-ks}` in `prod (1 - alpha_r p^{-s})^{-1}`.
pub fn local_lambda(alpha: &[Complex64], k: usize) -> Complex64 {
    local_lambda_all(alpha, k)[k]
}

/// `h_0..=h_k` via `h^{(r)}_j = h^{(r-1)}_j + alpha_r h^{(r)}_{j-1}`.
pub fn local_lambda_all(alpha: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); k + 1];
    h[0] = Complex64::new(1.0, 0.0);
    if alpha.is_empty() {
        return h;
    }
    // first parameter: h_j = alpha_1^j
    for j in 1..=k {
        h[j] = h[j - 1] * alpha[0];
    }
    for &a in &alpha[1..] {
        for j in 1..=k {
            let prev = h[j - 1];
            h[j] += a * prev;
        }
    }
    h
}

/// `(-1)^k e_k(alpha)`, the coefficient of `p^{-ks}` in `prod (1 - alpha_r p^{-s})`.
/// Exactly zero for `k > m`.
pub fn local_mu(alpha: &[Complex64], k: usize) -> Complex64 {
    if k > alpha.len() {
        return Complex64::new(0.0, 0.0);
    }
    local_mu_all(alpha)[k]
}

/// Coefficients of `prod (1 - alpha_r X)`, degree `m`.
pub fn local_mu_all(alpha: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); alpha.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (r, &a) in alpha.iter().enumerate() {
        for j in (1..=r + 1).rev() {
            let prev = e[j - 1];
            e[j] -= a * prev;
        }
    }
    e
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub label: String,
    pub degree: usize,
    pub n_max: usize,
    /// `lambda[n]` for `n` in `1..=n_max`; index 0 is unused and zero.
    pub lambda: Vec<Complex64>,
    pub mu: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn lambda(&self, n: usize) -> Complex64 {
        self.lambda[n]
    }

    pub fn mu(&self, n: usize) -> Complex64 {
        self.mu[n]
    }

    pub fn ensure_covers(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::TableTooShort { bound: self.n_max, needed: n });
        }
        Ok(())
    }

    /// CSV with header `n,lambda_re,lambda_im,mu_re,mu_im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,lambda_re,lambda_im,mu_re,mu_im")?;
        for n in 1..=self.n_max {
            let (l, m) = (self.lambda[n], self.mu[n]);
            writeln!(out, "{n},{:.12e},{:.12e},{:.12e},{:.12e}", l.re, l.im, m.re, m.im)?;
        }
        Ok(())
    }
}

/// Sieves `lambda` and `mu` up to `n_max` from the Satake parameters.
pub fn build_coefficients(instance: &AutomorphicInstance, n_max: usize) -> Result<CoefficientTable> {
    if n_max == 0 {
        return Err(Error::domain("N_max must be at least 1"));
    }
    let sieve = SpfSieve::new(n_max.max(2));
    let zero = Complex64::new(0.0, 0.0);
    // local factors indexed by prime; only primes are populated
    let mut local_l: Vec<Vec<Complex64>> = vec![Vec::new(); n_max + 1];
    let mut local_m: Vec<Vec<Complex64>> = vec![Vec::new(); n_max + 1];
    for &p in sieve.primes() {
        let p = p as usize;
        if p > n_max {
            break;
        }
        let alpha = instance.satake(p as u64)?;
        let mut kmax = 0;
        let mut pk = 1usize;
        while pk <= n_max / p {
            pk *= p;
            kmax += 1;
        }
        local_l[p] = match &instance.kind {
            // exact integer data avoids rounding in the Hecke recursion
            InstanceKind::Delta(tau) if pk <= tau.bound() => {
                let mut v = vec![Complex64::new(1.0, 0.0)];
                let mut q = 1usize;
                for _ in 0..kmax {
                    q *= p;
                    v.push(Complex64::new(tau.normalized(q)?, 0.0));
                }
                v
            }
            _ => local_lambda_all(&alpha, kmax),
        };
        let e = local_mu_all(&alpha);
        local_m[p] = (0..=kmax).map(|k| e.get(k).copied().unwrap_or(zero)).collect();
    }
    let mut lambda = vec![zero; n_max + 1];
    let mut mu = vec![zero; n_max + 1];
    lambda[1] = Complex64::new(1.0, 0.0);
    mu[1] = Complex64::new(1.0, 0.0);
    for n in 2..=n_max {
        let p = sieve.smallest_factor(n) as usize;
        let mut rest = n;
        let mut k = 0;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        lambda[n] = lambda[rest] * local_l[p][k];
        mu[n] = mu[rest] * local_m[p][k];
    }
    Ok(CoefficientTable { label: instance.label.clone(), degree: instance.degree, n_max, lambda, mu })
}
