//! Dirichlet characters specified by their values on a fixed set of
//! generators of `(Z/qZ)^*`.
//!
//! Generator convention: `q` is split into prime powers in increasing order.
//! An odd prime power `p^k` contributes its smallest primitive root. The
//! power of two contributes nothing for `2`, the class of `-1` for `4`, and
//! the pair (`-1`, `5`) for `2^k` with `k >= 3`. A character is the vector of
//! exponents `e_i` with `chi(g_i) = exp(2 pi i e_i / ord(g_i))`. A single
//! integer index is read as a mixed-radix number over these exponents, the
//! first generator being the least significant digit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arith::{factor_u64, gcd, pow_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    /// Modulus of the prime-power component this generator lives in.
    pub component: u64,
    /// Generator as a residue of the component modulus.
    pub residue: u64,
    pub order: u64,
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    generators: Vec<Generator>,
    /// `chi(a)` for `a` in `0..modulus`.
    values: Vec<Complex64>,
}

/// `exp(2 pi i num / den)`, exact at quarter turns.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let r = num % den;
    if (4 * r).is_multiple_of(den) {
        return match 4 * r / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / den as f64)
}

fn is_primitive_root(g: u64, modulus: u64, phi: u64) -> bool {
    if gcd(g, modulus) != 1 {
        return false;
    }
    factor_u64(phi)
        .iter()
        .all(|&(p, _)| pow_mod(g, phi / p, modulus) != 1)
}

/// Generators of `(Z/qZ)^*` under the documented convention.
pub fn unit_group_generators(modulus: u64) -> Vec<Generator> {
    let mut gens = Vec::new();
    for (p, k) in factor_u64(modulus) {
        let pk = p.pow(k);
        if p == 2 {
            match k {
                1 => {}
                2 => gens.push(Generator { component: 4, residue: 3, order: 2 }),
                _ => {
                    gens.push(Generator { component: pk, residue: pk - 1, order: 2 });
                    gens.push(Generator { component: pk, residue: 5, order: pk / 4 });
                }
            }
        } else {
            let phi = pk / p * (p - 1);
            let g = (2..pk)
                .find(|&g| is_primitive_root(g, pk, phi))
                .expect("odd prime powers have primitive roots");
            gens.push(Generator { component: pk, residue: g, order: phi });
        }
    }
    gens
}

impl DirichletCharacter {
    /// Character from the exponent vector on the conventional generators.
    pub fn from_exponents(modulus: u64, exponents: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("modulus must be positive"));
        }
        let generators = unit_group_generators(modulus);
        if exponents.len() != generators.len() {
            return Err(Error::domain(format!(
                "modulus {modulus} has {} generators, got {} exponents",
                generators.len(),
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(&generators)
            .map(|(&e, g)| e % g.order)
            .collect();

        // discrete-log tables per generator
        let mut logs: Vec<Vec<Option<u64>>> = Vec::with_capacity(generators.len());
        for g in &generators {
            let mut table = vec![None; g.component as usize];
            let mut x = 1u64;
            for j in 0..g.order {
                table[x as usize] = Some(j);
                x = x * g.residue % g.component;
            }
            logs.push(table);
        }

        let mut values = vec![Complex64::new(0.0, 0.0); modulus as usize];
        for a in 0..modulus {
            if gcd(a, modulus) != 1 {
                continue;
            }
            let mut v = Complex64::new(1.0, 0.0);
            let mut i = 0;
            while i < generators.len() {
                let g = generators[i];
                let r = a % g.component;
                if g.component >= 8 && g.component.is_multiple_of(2) {
                    // 2^k, k >= 3: a = (-1)^u 5^w
                    let (u, r5) = if r % 4 == 1 { (0, r) } else { (1, g.component - r) };
                    let g5 = generators[i + 1];
                    let w = logs[i + 1][r5 as usize].expect("5 generates the 1 mod 4 classes");
                    v *= root_of_unity(exponents[i] * u, 2);
                    v *= root_of_unity(exponents[i + 1] * w, g5.order);
                    i += 2;
                } else {
                    let j = logs[i][r as usize].expect("generator covers its component");
                    v *= root_of_unity(exponents[i] * j, g.order);
                    i += 1;
                }
            }
            values[a as usize] = v;
        }
        Ok(DirichletCharacter { modulus, exponents, generators, values })
    }

    /// Character from a single mixed-radix index.
    pub fn from_index(modulus: u64, index: u64) -> Result<Self> {
        let gens = unit_group_generators(modulus);
        let mut rest = index;
        let mut exps = Vec::with_capacity(gens.len());
        for g in &gens {
            exps.push(rest % g.order);
            rest /= g.order;
        }
        if rest != 0 {
            return Err(Error::domain(format!(
                "character index {index} exceeds the group order {} mod {modulus}",
                gens.iter().map(|g| g.order).product::<u64>()
            )));
        }
        Self::from_exponents(modulus, &exps)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn value(&self, a: u64) -> Complex64 {
        self.values[(a % self.modulus) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `true` when `chi(-1) = -1`.
    pub fn is_odd(&self) -> bool {
        self.modulus > 2 && self.value(self.modulus - 1).re < 0.0
    }

    pub fn conjugate(&self) -> Self {
        let exps: Vec<u64> = self
            .exponents
            .iter()
            .zip(&self.generators)
            .map(|(&e, g)| (g.order - e) % g.order)
            .collect();
        Self::from_exponents(self.modulus, &exps).expect("conjugate of a valid character")
    }

    /// Smallest proper divisor modulus the character is induced from, if any.
    pub fn induced_from(&self) -> Option<u64> {
        for (p, _) in factor_u64(self.modulus) {
            let d = self.modulus / p;
            let induced = (1..self.modulus)
                .filter(|&a| gcd(a, self.modulus) == 1 && a % d == 1 % d)
                .all(|a| (self.value(a) - 1.0).norm() < 1e-12);
            if induced {
                return Some(d);
            }
        }
        None
    }

    pub fn is_primitive(&self) -> bool {
        self.induced_from().is_none()
    }

    pub fn gauss_sum(&self) -> Complex64 {
        (1..self.modulus)
            .map(|a| self.value(a) * root_of_unity(a, self.modulus))
            .sum()
    }

    /// Root number `tau(chi) / (i^kappa sqrt(q))`.
    pub fn root_number(&self) -> Complex64 {
        let ik = if self.is_odd() { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
        self.gauss_sum() / (ik * (self.modulus as f64).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_minus_four() {
        let chi = DirichletCharacter::from_index(4, 1).unwrap();
        assert_eq!(chi.value(3), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.value(2), Complex64::new(0.0, 0.0));
        assert!(chi.is_odd());
        assert!(chi.is_primitive());
        assert!((chi.root_number() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn mod_five_brute_force_table() {
        // brute force: 2 generates (Z/5)^*, 2^j mod 5 = 1,2,4,3
        let chi = DirichletCharacter::from_index(5, 1).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let mut expected = [Complex64::new(0.0, 0.0); 5];
        let mut x = 1usize;
        for j in 0..4 {
            expected[x] = i.powu(j);
            x = x * 2 % 5;
        }
        for a in 0..5u64 {
            assert!((chi.value(a) - expected[a as usize]).norm() < 1e-15);
        }
        assert_eq!(chi.value(2), i);
    }

    #[test]
    fn mod_eight_uses_two_generators() {
        let gens = unit_group_generators(8);
        assert_eq!(gens.len(), 2);
        // index 2 -> exponent (0,1): chi(5) = -1, chi(7) = 1; this is chi_8 (primitive, even)
        let chi = DirichletCharacter::from_index(8, 2).unwrap();
        assert_eq!(chi.value(5).re, -1.0);
        assert_eq!(chi.value(7).re, 1.0);
        assert_eq!(chi.value(3).re, -1.0);
        assert!(chi.is_primitive());
        // index 1 -> chi(-1) = -1, chi(5) = 1: induced from chi_{-4}
        let chi = DirichletCharacter::from_index(8, 1).unwrap();
        assert_eq!(chi.induced_from(), Some(4));
    }

    #[test]
    fn characters_are_multiplicative_and_root_numbers_unimodular() {
        for q in [3u64, 5, 7, 8, 9, 12, 15, 16, 25] {
            let order: u64 = unit_group_generators(q).iter().map(|g| g.order).product();
            for idx in 0..order {
                let chi = DirichletCharacter::from_index(q, idx).unwrap();
                for a in 0..q {
                    for b in 0..q {
                        let lhs = chi.value(a * b);
                        let rhs = chi.value(a) * chi.value(b);
                        assert!((lhs - rhs).norm() < 1e-12, "q={q} idx={idx} a={a} b={b}");
                    }
                }
                if chi.is_primitive() {
                    assert!((chi.root_number().norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn principal_mod_three_is_not_primitive() {
        let chi = DirichletCharacter::from_index(3, 0).unwrap();
        assert!(!chi.is_primitive());
        assert!(DirichletCharacter::from_index(5, 4).is_err());
    }
}
