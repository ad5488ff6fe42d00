//! Run configuration: an optional TOML file, overridden by command-line flags.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

use thetalab::instance::{builtin, AutomorphicInstance, InstanceDef};

pub const CONFIG_ENV: &str = "THETALAB_CONFIG";

/// Keys accepted in a configuration file. Every numeric key can also be given
/// as a flag of the same name; flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub instance: Option<String>,
    #[serde(default)]
    pub instances: Vec<InstanceDef>,
    pub grc: Option<bool>,
    pub riemann_siegel: Option<bool>,
    pub threads: Option<usize>,
    pub cache: Option<bool>,
    pub timing: Option<bool>,
    pub tol: Option<f64>,
    pub sigma: Option<f64>,
    pub theta: Option<f64>,
    pub epsilon: Option<f64>,
    pub constant: Option<f64>,
    #[serde(rename = "T1")]
    pub t1: Option<f64>,
    #[serde(rename = "T2")]
    pub t2: Option<f64>,
    pub grid: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
}

/// A configuration error; reported with exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

pub fn parse_config_str(text: &str, origin: &str) -> Result<FileConfig> {
    toml::from_str(text).map_err(|e| config_error(format!("{origin}: {e}")))
}

pub fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    let path = match path {
        Some(p) => p.to_path_buf(),
        None => match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => PathBuf::from(p),
            _ => return Ok(FileConfig::default()),
        },
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_str(&text, &path.display().to_string())
}

/// Flag values overriding the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub instance: Option<String>,
    pub grc: bool,
    pub threads: Option<usize>,
    pub no_cache: bool,
    pub timing: bool,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
}

/// Validated configuration handed to the commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub file: FileConfig,
    pub instance: Option<String>,
    pub grc: bool,
    pub threads: usize,
    pub cache: bool,
    pub timing: bool,
    pub tol: f64,
    pub output: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
}

pub const DEFAULT_TOL: f64 = 1e-8;

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self> {
        if file.riemann_siegel == Some(true) {
            bail!(config_error("riemann_siegel = true is not supported; the evaluator has no Riemann-Siegel path"));
        }
        let tol = flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if tol.is_nan() || tol <= 0.0 {
            bail!(config_error(format!("tol must be positive, got {tol}")));
        }
        let threads = flags.threads.or(file.threads).unwrap_or(1);
        if threads == 0 {
            bail!(config_error("threads must be at least 1"));
        }
        let mut labels = std::collections::BTreeSet::new();
        for def in &file.instances {
            if let Some(l) = &def.label {
                if !labels.insert(l.clone()) {
                    bail!(config_error(format!("duplicate instance label `{l}`")));
                }
            }
        }
        let cfg = RunConfig {
            instance: flags.instance.or_else(|| file.instance.clone()),
            grc: flags.grc || file.grc.unwrap_or(false),
            threads,
            cache: !flags.no_cache && file.cache.unwrap_or(true),
            timing: flags.timing || file.timing.unwrap_or(false),
            tol,
            output: flags.output.or_else(|| file.output.clone()),
            plot_data: flags.plot_data.or_else(|| file.plot_data.clone()),
            file,
        };
        if let Some(name) = &cfg.instance {
            cfg.resolve_instance(name)?;
        }
        Ok(cfg)
    }

    /// Instances defined in the file are looked up by label first, then
    /// built-in names (`zeta`, `delta`, `chi_<q>_<index>`, `chi-4`).
    pub fn resolve_instance(&self, name: &str) -> Result<AutomorphicInstance> {
        for def in &self.file.instances {
            if def.label.as_deref() == Some(name) {
                return def.build(self.grc).map_err(|e| config_error(format!("instance `{name}`: {e}")));
            }
        }
        let inst = builtin(name).map_err(|e| config_error(e.to_string()))?;
        Ok(inst.with_grc(self.grc))
    }

    pub fn instance(&self) -> Result<AutomorphicInstance> {
        match &self.instance {
            Some(name) => self.resolve_instance(name),
            None => Err(config_error("no instance given (use --instance or `instance` in the config)")),
        }
    }

    pub fn require(&self, flag: Option<f64>, file: Option<f64>, name: &str) -> Result<f64> {
        flag.or(file).ok_or_else(|| config_error(format!("missing parameter `{name}`")))
    }

    pub fn grid(&self, flag: &Option<Vec<f64>>) -> Result<Vec<f64>> {
        flag.clone()
            .or_else(|| self.file.grid.clone())
            .ok_or_else(|| config_error("missing parameter `grid`"))
    }
}

/// Family files list their members as instance definitions.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    #[serde(default)]
    pub description: String,
    pub members: Vec<InstanceDef>,
}

pub fn load_family(path: &Path) -> Result<FamilyFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read family spec {}", path.display()))
        .map_err(|e| config_error(format!("{e:#}")))?;
    toml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config_str("thetaa = 1.0\n", "cfg.toml").unwrap_err();
        assert!(err.to_string().contains("thetaa"), "{err}");
        assert!(err.downcast_ref::<ConfigError>().is_some());
    }

    #[test]
    fn flags_win_over_file() {
        let file = parse_config_str("tol = 1e-6\ninstance = \"zeta\"\n", "cfg").unwrap();
        let flags = Overrides { tol: Some(1e-9), instance: Some("delta".into()), ..Default::default() };
        let cfg = RunConfig::resolve(file, flags).unwrap();
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.instance.as_deref(), Some("delta"));
    }

    #[test]
    fn grc_rebuilds_instances() {
        let file = parse_config_str("grc = true\n[[instances]]\nlabel = \"d\"\nkind = \"delta\"\n", "cfg").unwrap();
        let cfg = RunConfig::resolve(file, Overrides::default()).unwrap();
        assert_eq!(cfg.resolve_instance("d").unwrap().ramanujan_exponent, 0.0);
        assert_eq!(cfg.resolve_instance("zeta").unwrap().ramanujan_exponent, 0.0);
    }

    #[test]
    fn riemann_siegel_rejected() {
        let file = parse_config_str("riemann_siegel = true\n", "cfg").unwrap();
        assert!(RunConfig::resolve(file, Overrides::default()).is_err());
        let file = parse_config_str("tol = -1.0\n", "cfg").unwrap();
        assert!(RunConfig::resolve(file, Overrides::default()).is_err());
    }
}
