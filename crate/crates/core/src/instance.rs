//! L-function instances: arithmetic and archimedean data of one automorphic
//! representation, with a deterministic Satake-parameter provider.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::factor_u64;
use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::tau::{TauTable, DEFAULT_TAU_BOUND};

/// Which evaluator family an instance belongs to.
#[derive(Debug, Clone)]
pub enum InstanceKind {
    Zeta,
    Dirichlet(Arc<DirichletCharacter>),
    Delta(Arc<TauTable>),
    /// Satake data only; no analytic continuation is available.
    Custom,
}

#[derive(Debug, Clone)]
pub struct AutomorphicInstance {
    pub label: String,
    pub degree: usize,
    pub conductor: u64,
    pub spectral_params: Vec<Complex64>,
    pub pole_order: u32,
    /// `None` means "derive numerically".
    pub root_number: Option<Complex64>,
    pub ramanujan_exponent: f64,
    pub kind: InstanceKind,
    custom_satake: Arc<BTreeMap<u64, Vec<Complex64>>>,
    overrides: BTreeMap<u64, Vec<Complex64>>,
    conjugated: bool,
}

/// Unconditional exponent `1/2 - 1/(m^2 + 1)` towards Ramanujan.
pub fn default_ramanujan_exponent(degree: usize) -> f64 {
    0.5 - 1.0 / ((degree * degree) as f64 + 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatakeViolation {
    pub prime: u64,
    pub index: usize,
    pub modulus: f64,
    pub bound: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    SatakeTooLarge,
    UnramifiedZero,
    SpectralTooNegative,
    WrongLength,
}

pub fn make_zeta() -> AutomorphicInstance {
    AutomorphicInstance {
        label: "zeta".into(),
        degree: 1,
        conductor: 1,
        spectral_params: vec![Complex64::new(0.0, 0.0)],
        pole_order: 1,
        root_number: Some(Complex64::new(1.0, 0.0)),
        ramanujan_exponent: 0.0,
        kind: InstanceKind::Zeta,
        custom_satake: Arc::default(),
        overrides: BTreeMap::new(),
        conjugated: false,
    }
}

/// Degree-one instance of a primitive character given by its mixed-radix index
/// (see [`crate::character`] for the generator convention).
pub fn make_dirichlet(modulus: u64, character_index: u64) -> Result<AutomorphicInstance> {
    let chi = DirichletCharacter::from_index(modulus, character_index)?;
    dirichlet_from_character(chi, format!("chi_{modulus}_{character_index}"))
}

pub fn dirichlet_from_character(
    chi: DirichletCharacter,
    label: String,
) -> Result<AutomorphicInstance> {
    if modulus_is_trivial(&chi) {
        return Err(Error::NonPrimitiveCharacter(
            "the character mod 1 is zeta; use make_zeta".into(),
        ));
    }
    if let Some(d) = chi.induced_from() {
        return Err(Error::NonPrimitiveCharacter(format!(
            "character {:?} mod {} is induced from modulus {d}",
            chi.exponents(),
            chi.modulus()
        )));
    }
    let nu = if chi.is_odd() { 1.0 } else { 0.0 };
    Ok(AutomorphicInstance {
        label,
        degree: 1,
        conductor: chi.modulus(),
        spectral_params: vec![Complex64::new(nu, 0.0)],
        pole_order: 0,
        root_number: Some(chi.root_number()),
        ramanujan_exponent: 0.0,
        kind: InstanceKind::Dirichlet(Arc::new(chi)),
        custom_satake: Arc::default(),
        overrides: BTreeMap::new(),
        conjugated: false,
    })
}

fn modulus_is_trivial(chi: &DirichletCharacter) -> bool {
    chi.modulus() == 1
}

/// The Ramanujan discriminant form, weight 12 level 1, with archimedean
/// parameters `{11/2, 13/2}`.
pub fn make_delta() -> AutomorphicInstance {
    make_delta_with_bound(DEFAULT_TAU_BOUND)
}

pub fn make_delta_with_bound(tau_bound: usize) -> AutomorphicInstance {
    delta_from_table(TauTable::shared(tau_bound))
}

pub fn delta_from_table(tau: Arc<TauTable>) -> AutomorphicInstance {
    AutomorphicInstance {
        label: "delta".into(),
        degree: 2,
        conductor: 1,
        spectral_params: vec![Complex64::new(5.5, 0.0), Complex64::new(6.5, 0.0)],
        pole_order: 0,
        root_number: Some(Complex64::new(1.0, 0.0)),
        ramanujan_exponent: default_ramanujan_exponent(2),
        kind: InstanceKind::Delta(tau),
        custom_satake: Arc::default(),
        overrides: BTreeMap::new(),
        conjugated: false,
    }
}

/// Instance defined by an explicit Satake table; used for experiments with
/// synthetic local data. Primes absent from the table are reported missing.
pub fn make_custom(
    label: impl Into<String>,
    conductor: u64,
    spectral_params: Vec<Complex64>,
    satake: BTreeMap<u64, Vec<Complex64>>,
) -> AutomorphicInstance {
    let degree = spectral_params.len();
    AutomorphicInstance {
        label: label.into(),
        degree,
        conductor,
        spectral_params,
        pole_order: 0,
        root_number: None,
        ramanujan_exponent: default_ramanujan_exponent(degree),
        kind: InstanceKind::Custom,
        custom_satake: Arc::new(satake),
        overrides: BTreeMap::new(),
        conjugated: false,
    }
}

impl AutomorphicInstance {
    /// Satake parameters at the prime `p`.
    pub fn satake(&self, p: u64) -> Result<Vec<Complex64>> {
        let raw = if let Some(v) = self.overrides.get(&p) {
            v.clone()
        } else {
            match &self.kind {
                InstanceKind::Zeta => vec![Complex64::new(1.0, 0.0)],
                InstanceKind::Dirichlet(chi) => vec![chi.value(p)],
                InstanceKind::Delta(tau) => {
                    let lambda = tau.normalized(p as usize).map_err(|_| Error::MissingSatake {
                        prime: p,
                        bound: tau.bound() as u64,
                    })?;
                    delta_satake(lambda)
                }
                InstanceKind::Custom => self
                    .custom_satake
                    .get(&p)
                    .cloned()
                    .ok_or_else(|| Error::MissingSatake {
                        prime: p,
                        bound: self.custom_satake.keys().next_back().copied().unwrap_or(0),
                    })?,
            }
        };
        Ok(if self.conjugated { raw.iter().map(|a| a.conj()).collect() } else { raw })
    }

    /// Largest prime for which Satake data is available, if bounded.
    pub fn prime_bound(&self) -> Option<u64> {
        match &self.kind {
            InstanceKind::Delta(tau) => Some(tau.bound() as u64),
            InstanceKind::Custom => Some(self.custom_satake.keys().next_back().copied().unwrap_or(0)),
            _ => None,
        }
    }

    /// Sets `delta_m = 0` (generalized Ramanujan conjecture) or restores the
    /// unconditional default.
    pub fn with_grc(mut self, grc: bool) -> Self {
        self.ramanujan_exponent = if grc { 0.0 } else { default_ramanujan_exponent(self.degree) };
        if self.degree == 1 {
            self.ramanujan_exponent = 0.0;
        }
        self
    }

    pub fn with_root_number(mut self, w: Option<Complex64>) -> Self {
        self.root_number = w;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Replaces the Satake parameters at one prime.
    pub fn with_satake_override(mut self, p: u64, alpha: Vec<Complex64>) -> Self {
        self.overrides.insert(p, alpha);
        self
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self.kind, InstanceKind::Zeta)
    }

    /// The contragredient: conjugate Satake and spectral data, conjugate root number.
    pub fn contragredient(&self) -> AutomorphicInstance {
        let mut out = self.clone();
        out.label = format!("{}~", self.label);
        out.spectral_params = self.spectral_params.iter().map(|v| v.conj()).collect();
        out.root_number = self.root_number.map(|w| w.conj());
        match &self.kind {
            InstanceKind::Dirichlet(chi) => {
                out.kind = InstanceKind::Dirichlet(Arc::new(chi.conjugate()));
                out.overrides = self
                    .overrides
                    .iter()
                    .map(|(&p, v)| (p, v.iter().map(|a| a.conj()).collect()))
                    .collect();
            }
            _ => out.conjugated = !self.conjugated,
        }
        out
    }

    /// `C(s) = q prod (3 + |s + nu_r|)`.
    pub fn analytic_conductor(&self, s: Complex64) -> f64 {
        self.conductor as f64
            * self
                .spectral_params
                .iter()
                .map(|nu| 3.0 + (s + nu).norm())
                .product::<f64>()
    }

    /// Checks `|alpha| <= p^delta`, nonvanishing at unramified primes,
    /// and `Re nu >= -delta`.
    pub fn verify_satake_bounds(&self, prime_bound: u64) -> Vec<SatakeViolation> {
        let delta = self.ramanujan_exponent;
        let mut out = Vec::new();
        for (r, nu) in self.spectral_params.iter().enumerate() {
            if nu.re < -delta - 1e-12 {
                out.push(SatakeViolation {
                    prime: 0,
                    index: r,
                    modulus: nu.re,
                    bound: -delta,
                    kind: ViolationKind::SpectralTooNegative,
                });
            }
        }
        let ramified: Vec<u64> = factor_u64(self.conductor).into_iter().map(|(p, _)| p).collect();
        let sieve = crate::arith::SpfSieve::new(prime_bound.max(2) as usize);
        for &p in sieve.primes() {
            let p = p as u64;
            let Ok(alpha) = self.satake(p) else { break };
            if alpha.len() != self.degree {
                out.push(SatakeViolation {
                    prime: p,
                    index: 0,
                    modulus: alpha.len() as f64,
                    bound: self.degree as f64,
                    kind: ViolationKind::WrongLength,
                });
                continue;
            }
            let bound = (p as f64).powf(delta);
            for (r, a) in alpha.iter().enumerate() {
                let m = a.norm();
                if m > bound * (1.0 + 1e-12) + 1e-12 {
                    out.push(SatakeViolation { prime: p, index: r, modulus: m, bound, kind: ViolationKind::SatakeTooLarge });
                }
                if m == 0.0 && !ramified.contains(&p) {
                    out.push(SatakeViolation { prime: p, index: r, modulus: m, bound, kind: ViolationKind::UnramifiedZero });
                }
            }
        }
        out
    }
}

/// Roots of `X^2 - lambda X + 1`.
fn delta_satake(lambda: f64) -> Vec<Complex64> {
    let disc = Complex64::new(lambda * lambda - 4.0, 0.0).sqrt();
    vec![(lambda + disc) / 2.0, (lambda - disc) / 2.0]
}

/// Serializable instance definition, as read from run configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDef {
    pub label: Option<String>,
    /// `zeta`, `dirichlet`, or `delta`.
    pub kind: String,
    pub modulus: Option<u64>,
    pub index: Option<u64>,
    /// Exponents on the conventional generators; alternative to `index`.
    pub generators: Option<Vec<u64>>,
    pub tau_bound: Option<usize>,
    /// Optional expected values, validated against the derived instance.
    pub degree: Option<usize>,
    pub conductor: Option<u64>,
    pub spectral_params: Option<Vec<[f64; 2]>>,
}

impl InstanceDef {
    pub fn build(&self, grc: bool) -> Result<AutomorphicInstance> {
        let mut inst = match self.kind.as_str() {
            "zeta" => make_zeta(),
            "dirichlet" => {
                let q = self.modulus.ok_or_else(|| Error::domain("dirichlet instance needs `modulus`"))?;
                match (&self.generators, self.index) {
                    (Some(exps), None) => {
                        let chi = DirichletCharacter::from_exponents(q, exps)?;
                        dirichlet_from_character(chi, format!("chi_{q}_{exps:?}"))?
                    }
                    (None, Some(idx)) => make_dirichlet(q, idx)?,
                    _ => return Err(Error::domain("dirichlet instance needs exactly one of `index`, `generators`")),
                }
            }
            "delta" => make_delta_with_bound(self.tau_bound.unwrap_or(DEFAULT_TAU_BOUND)),
            other => return Err(Error::domain(format!("unknown instance kind `{other}`"))),
        };
        if let Some(label) = &self.label {
            inst.label = label.clone();
        }
        if let Some(d) = self.degree {
            if d != inst.degree {
                return Err(Error::domain(format!("{}: declared degree {d}, derived {}", inst.label, inst.degree)));
            }
        }
        if let Some(q) = self.conductor {
            if q != inst.conductor {
                return Err(Error::domain(format!("{}: declared conductor {q}, derived {}", inst.label, inst.conductor)));
            }
        }
        if let Some(nu) = &self.spectral_params {
            let declared: Vec<Complex64> = nu.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            if declared != inst.spectral_params {
                return Err(Error::domain(format!("{}: declared spectral parameters differ from derived", inst.label)));
            }
        }
        Ok(inst.with_grc(grc))
    }

    pub fn named(kind: &str) -> Self {
        InstanceDef {
            label: None,
            kind: kind.into(),
            modulus: None,
            index: None,
            generators: None,
            tau_bound: None,
            degree: None,
            conductor: None,
            spectral_params: None,
        }
    }
}

/// Resolves the built-in shorthand names used on the command line:
/// `zeta`, `delta`, `chi_<q>_<index>` (also `chi-4` for the character mod 4).
pub fn builtin(name: &str) -> Result<AutomorphicInstance> {
    match name {
        "zeta" => Ok(make_zeta()),
        "delta" => Ok(make_delta()),
        "chi-4" | "chi_-4" => make_dirichlet(4, 1).map(|i| i.with_label(name)),
        _ => {
            let parts: Vec<&str> = name.split('_').collect();
            if let ["chi", q, idx] = parts.as_slice() {
                let q: u64 = q.parse().map_err(|_| Error::domain(format!("bad modulus in `{name}`")))?;
                let idx: u64 = idx.parse().map_err(|_| Error::domain(format!("bad index in `{name}`")))?;
                return make_dirichlet(q, idx);
            }
            Err(Error::domain(format!("unknown instance `{name}`")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_data() {
        let z = make_zeta();
        assert_eq!(z.degree, 1);
        assert_eq!(z.pole_order, 1);
        assert_eq!(z.satake(7).unwrap(), vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(z.clone().with_grc(false).ramanujan_exponent, 0.0);
        assert_eq!(z.analytic_conductor(Complex64::new(0.0, 0.0)), 3.0);
        assert!(z.verify_satake_bounds(100).is_empty());
    }

    #[test]
    fn chi_minus_four_data() {
        let c = make_dirichlet(4, 1).unwrap();
        assert_eq!(c.satake(3).unwrap(), vec![Complex64::new(-1.0, 0.0)]);
        assert_eq!(c.satake(2).unwrap(), vec![Complex64::new(0.0, 0.0)]);
        assert_eq!(c.spectral_params, vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(c.analytic_conductor(Complex64::new(0.0, 0.0)), 16.0);
        assert!(c.verify_satake_bounds(200).is_empty());
    }

    #[test]
    fn mod_five_order_four() {
        let c = make_dirichlet(5, 1).unwrap();
        assert_eq!(c.satake(2).unwrap(), vec![Complex64::new(0.0, 1.0)]);
        assert_eq!(c.contragredient().satake(2).unwrap(), vec![Complex64::new(0.0, -1.0)]);
    }

    #[test]
    fn non_primitive_rejected() {
        let err = make_dirichlet(8, 1).unwrap_err();
        assert!(matches!(err, Error::NonPrimitiveCharacter(_)));
        assert!(make_dirichlet(5, 0).is_err());
    }

    #[test]
    fn delta_data() {
        let d = make_delta();
        let a = d.satake(2).unwrap();
        let lambda2 = -24.0 / 2f64.powf(5.5);
        assert!(((a[0] + a[1]).re - lambda2).abs() < 1e-14);
        assert!((a[0] * a[1] - 1.0).norm() < 1e-14);
        assert!((lambda2 + 0.5303300859).abs() < 1e-10);
        assert!((d.analytic_conductor(Complex64::new(0.0, 0.0)) - 80.75).abs() < 1e-12);
        let grc = d.clone().with_grc(true);
        assert!(grc.verify_satake_bounds(1000).is_empty());
        assert!(matches!(d.satake(10_007), Err(Error::MissingSatake { .. })));
    }

    #[test]
    fn injected_violation_is_reported() {
        let z = make_zeta().with_satake_override(2, vec![Complex64::new(3.0, 0.0)]);
        let v = z.verify_satake_bounds(50);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].prime, 2);
        assert_eq!(v[0].kind, ViolationKind::SatakeTooLarge);
    }

    #[test]
    fn instance_def_validation() {
        let mut def = InstanceDef::named("dirichlet");
        def.modulus = Some(4);
        def.index = Some(1);
        def.degree = Some(1);
        assert_eq!(def.build(false).unwrap().conductor, 4);
        def.conductor = Some(5);
        assert!(def.build(false).is_err());
        let mut g = InstanceDef::named("dirichlet");
        g.modulus = Some(5);
        g.generators = Some(vec![1]);
        assert_eq!(g.build(false).unwrap().satake(2).unwrap()[0], Complex64::new(0.0, 1.0));
        assert!(builtin("chi_5_2").is_ok());
        assert!(builtin("nope").is_err());
    }
}
