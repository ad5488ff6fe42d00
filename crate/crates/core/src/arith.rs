//! Elementary integer arithmetic: smallest-prime-factor sieve, factorization,
//! generalized divisor functions.

/// Smallest prime factor for every integer up to a bound (index 0 and 1 hold 0).
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    pub fn new(bound: usize) -> Self {
        let mut spf = vec![0u32; bound + 1];
        let mut primes = Vec::new();
        for i in 2..=bound {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > si || j > bound {
                    break;
                }
                spf[j] = p;
            }
        }
        SpfSieve { spf, primes }
    }

    pub fn bound(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_factor(&self, n: usize) -> u32 {
        self.spf[n]
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// Prime factorization as `(p, k)` pairs in increasing order of `p`.
    pub fn factor(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p as u64, k));
        }
        out
    }
}

/// Trial-division factorization for integers outside any sieve.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// The `m`-fold divisor function: number of ordered factorizations of `n`
/// into `m` positive integers.
pub fn divisor_tau(m: usize, factorization: &[(u64, u32)]) -> f64 {
    factorization
        .iter()
        .map(|&(_, k)| binomial(k as u64 + m as u64 - 1, m as u64 - 1))
        .product()
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_factors() {
        let s = SpfSieve::new(100);
        assert_eq!(s.factor(84), vec![(2, 2), (3, 1), (7, 1)]);
        assert_eq!(s.factor(97), vec![(97, 1)]);
        assert_eq!(s.primes().len(), 25);
        assert!(s.factor(1).is_empty());
    }

    #[test]
    fn divisor_tau_matches_brute_force() {
        let s = SpfSieve::new(200);
        for n in 1..=200usize {
            let brute2 = (1..=n).filter(|d| n % d == 0).count() as f64;
            assert_eq!(divisor_tau(2, &s.factor(n)), brute2);
            let brute3: usize = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| (1..=n / d).filter(|e| (n / d) % e == 0).count())
                .sum();
            assert_eq!(divisor_tau(3, &s.factor(n)), brute3 as f64);
            assert_eq!(divisor_tau(1, &s.factor(n)), 1.0);
        }
    }

    #[test]
    fn phi_and_powmod() {
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(gcd(12, 18), 6);
    }
}
