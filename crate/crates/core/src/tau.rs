//! Ramanujan's tau function from the q-expansion of the discriminant
//! `q prod (1 - q^n)^24`, in exact integer arithmetic.

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const DEFAULT_TAU_BOUND: usize = 10_000;

/// Exact values `tau(1..=bound)`.
#[derive(Debug, Clone)]
pub struct TauTable {
    tau: Vec<i128>,
}

impl TauTable {
    /// Expands `prod (1-q^n)^24 = (prod (1-q^n)^3)^8` with Jacobi's identity
    /// `prod (1-q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}`.
    pub fn compute(bound: usize) -> Self {
        let len = bound; // coefficients of q^0..q^{bound-1}
        let mut jacobi: Vec<(usize, i128)> = Vec::new();
        let mut k = 0usize;
        loop {
            let e = k * (k + 1) / 2;
            if e >= len {
                break;
            }
            let c = (2 * k + 1) as i128;
            jacobi.push((e, if k.is_multiple_of(2) { c } else { -c }));
            k += 1;
        }
        let mut acc = vec![0i128; len];
        acc[0] = 1;
        for _ in 0..8 {
            let mut next = vec![0i128; len];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for &(e, c) in &jacobi {
                    if i + e >= len {
                        break;
                    }
                    next[i + e] += a * c;
                }
            }
            acc = next;
        }
        let mut tau = Vec::with_capacity(bound + 1);
        tau.push(0);
        tau.extend_from_slice(&acc);
        TauTable { tau }
    }

    /// Process-wide table, extended on demand.
    pub fn shared(bound: usize) -> Arc<TauTable> {
        static CACHE: OnceLock<Mutex<Option<Arc<TauTable>>>> = OnceLock::new();
        let cell = CACHE.get_or_init(|| Mutex::new(None));
        let mut guard = cell.lock().expect("tau cache poisoned");
        match guard.as_ref() {
            Some(t) if t.bound() >= bound => t.clone(),
            _ => {
                let t = Arc::new(TauTable::compute(bound));
                *guard = Some(t.clone());
                t
            }
        }
    }

    pub fn bound(&self) -> usize {
        self.tau.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<i128> {
        if n == 0 || n > self.bound() {
            return Err(Error::TauTableTooShort { bound: self.bound(), needed: n });
        }
        Ok(self.tau[n])
    }

    /// Normalized Hecke eigenvalue `tau(n) / n^{11/2}`.
    pub fn normalized(&self, n: usize) -> Result<f64> {
        Ok(self.get(n)? as f64 / (n as f64).powf(5.5))
    }
}
