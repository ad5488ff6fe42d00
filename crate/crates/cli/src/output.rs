//! Output plumbing: fixed float formatting and a record of files written.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;

/// Floats in CSV and plot files, printf-style `%.12e` (`1.500000000000e+00`).
pub fn fmt(x: f64) -> String {
    let s = format!("{x:.12e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::fmt;

    #[test]
    fn printf_style() {
        assert_eq!(fmt(1.5), "1.500000000000e+00");
        assert_eq!(fmt(-2.5e-7), "-2.500000000000e-07");
        assert_eq!(fmt(6.02e123), "6.020000000000e+123");
        assert_eq!(fmt(0.0), "0.000000000000e+00");
        assert_eq!(fmt(f64::NAN), "NaN");
    }
}

#[derive(Debug, Default)]
pub struct Sink {
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn written(&self) -> Vec<String> {
        self.written.iter().map(|p| p.display().to_string()).collect()
    }

    pub fn file(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        std::fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    /// The command's main artifact, to `--output` or stdout.
    pub fn primary(&mut self, cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
        match &cfg.output {
            Some(p) => self.file(p, bytes),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }

    pub fn plot(&mut self, cfg: &RunConfig, text: &str) -> Result<()> {
        match &cfg.plot_data {
            Some(p) => self.file(p, text.as_bytes()),
            None => Ok(()),
        }
    }
}
