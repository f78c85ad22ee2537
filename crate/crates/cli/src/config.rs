//! Run configuration: a flat TOML table with typed keys.
//!
//! ```toml
//! fcidump = "fixtures/h2/h2_0.7.fcidump"
//! mapping = "bravyi_kitaev"
//! grouping = "abab"
//! reduce_stationary = true
//! p_cut = 0.05
//! backend = "exact"
//! seed = 7
//! output = "out/h2_0.7"
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use miqcc_core::fermion::{EncodingSpec, Grouping, Mapping};
use miqcc_core::{AdaptiveConfig, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Spin-penalty weight used when the penalty is switched on without a value.
pub const DEFAULT_SPIN_PENALTY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact,
    Mps,
    Import,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    Reduced,
    Unreduced,
}

/// `spin_penalty = true` or `spin_penalty = 0.3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpinPenalty {
    Enabled(bool),
    Weight(f64),
}

impl SpinPenalty {
    pub fn weight(self) -> Option<f64> {
        match self {
            SpinPenalty::Enabled(true) => Some(DEFAULT_SPIN_PENALTY),
            SpinPenalty::Enabled(false) => None,
            SpinPenalty::Weight(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub fcidump: Option<PathBuf>,
    /// Qubit Hamiltonian in the Pauli text format.
    pub pauli: Option<PathBuf>,
    /// Reference bitstring for a Pauli-text Hamiltonian, qubit 0 first.
    pub reference: Option<String>,
    pub mapping: Mapping,
    pub grouping: Grouping,
    pub reduce_stationary: bool,
    pub p_cut: Option<f64>,
    pub backend: Backend,
    pub chi: usize,
    pub sweeps: usize,
    pub mi_file: Option<PathBuf>,
    pub descent_fraction: f64,
    pub hops: usize,
    pub temperature: f64,
    pub step_size: f64,
    pub gtol: f64,
    pub spin_penalty: Option<SpinPenalty>,
    pub max_steps: usize,
    pub tolerance: f64,
    /// Overrides the exact ground energy used for the convergence test.
    pub reference_energy: Option<f64>,
    pub baseline: BaselineKind,
    pub seed: u64,
    pub output: PathBuf,
    /// Label used in sweep tables.
    pub tag: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let opt = OptimizerConfig::default();
        let adaptive = AdaptiveConfig::default();
        Self {
            fcidump: None,
            pauli: None,
            reference: None,
            mapping: Mapping::JordanWigner,
            grouping: Grouping::Abab,
            reduce_stationary: false,
            p_cut: None,
            backend: Backend::Exact,
            chi: 16,
            sweeps: 10,
            mi_file: None,
            descent_fraction: adaptive.descent_fraction,
            hops: opt.hops,
            temperature: opt.temperature,
            step_size: opt.step_size,
            gtol: opt.gtol,
            spin_penalty: None,
            max_steps: adaptive.max_steps,
            tolerance: adaptive.tolerance,
            reference_energy: None,
            baseline: BaselineKind::Reduced,
            seed: 0,
            output: PathBuf::from("out"),
            tag: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a config file and resolves its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.fcidump);
        fix(&mut self.pauli);
        fix(&mut self.mi_file);
        if self.output.is_relative() {
            self.output = base.join(&self.output);
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        match (&self.fcidump, &self.pauli) {
            (Some(_), Some(_)) => return bad("set exactly one of fcidump and pauli, not both".into()),
            (None, None) => return bad("no Hamiltonian source: set fcidump or pauli".into()),
            _ => {}
        }
        if let Some(p) = self.p_cut {
            if !(p > 0.0 && p <= 1.0) {
                return bad(format!("p_cut must lie in (0, 1], got {p}"));
            }
        }
        if self.backend == Backend::Import && self.mi_file.is_none() {
            return bad("backend = \"import\" needs mi_file".into());
        }
        if self.backend == Backend::Mps && self.chi == 0 {
            return bad("chi must be at least 1".into());
        }
        if let Some(w) = self.spin_penalty.and_then(SpinPenalty::weight) {
            if !(w >= 0.0) || !w.is_finite() {
                return bad(format!("spin_penalty must be non-negative, got {w}"));
            }
        }
        if self.pauli.is_some() && self.spin_penalty.and_then(SpinPenalty::weight).is_some() {
            return bad("spin_penalty needs an fcidump source".into());
        }
        if !(self.descent_fraction > 0.0 && self.descent_fraction <= 1.0) {
            return bad(format!("descent_fraction must lie in (0, 1], got {}", self.descent_fraction));
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive".into());
        }
        self.optimizer().validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn encoding(&self) -> EncodingSpec {
        EncodingSpec {
            mapping: self.mapping,
            grouping: self.grouping,
            reduce_stationary: self.reduce_stationary,
        }
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            hops: self.hops,
            temperature: self.temperature,
            step_size: self.step_size,
            gtol: self.gtol,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }

    pub fn adaptive(&self, reference_energy: Option<f64>) -> AdaptiveConfig {
        AdaptiveConfig {
            descent_fraction: self.descent_fraction,
            max_steps: self.max_steps,
            tolerance: self.tolerance,
            reference_energy,
            optimizer: self.optimizer(),
            ..AdaptiveConfig::default()
        }
    }

    pub fn spin_penalty_weight(&self) -> Option<f64> {
        self.spin_penalty.and_then(SpinPenalty::weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_round_trip() {
        let cfg = RunConfig::from_toml("fcidump = \"a.fcidump\"\nmapping = \"bk\"\np_cut = 0.1\n").unwrap();
        assert_eq!(cfg.mapping, Mapping::BravyiKitaev);
        assert_eq!(cfg.p_cut, Some(0.1));
        assert_eq!(cfg.hops, 10);
        assert_eq!(cfg.temperature, 0.5);
        assert_eq!(cfg.step_size, 1e-6);
        assert_eq!(cfg.descent_fraction, 0.3);
        assert_eq!(cfg.tolerance, 1e-3);
        cfg.validate().unwrap();
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn spin_penalty_forms() {
        let on = RunConfig::from_toml("fcidump = \"a\"\nspin_penalty = true\n").unwrap();
        assert_eq!(on.spin_penalty_weight(), Some(DEFAULT_SPIN_PENALTY));
        let w = RunConfig::from_toml("fcidump = \"a\"\nspin_penalty = 0.25\n").unwrap();
        assert_eq!(w.spin_penalty_weight(), Some(0.25));
        let off = RunConfig::from_toml("fcidump = \"a\"\nspin_penalty = false\n").unwrap();
        assert_eq!(off.spin_penalty_weight(), None);
    }

    #[test]
    fn validation_errors() {
        let check = |s: &str| RunConfig::from_toml(s).and_then(|c| c.validate());
        assert!(check("").is_err());
        assert!(check("fcidump = \"a\"\npauli = \"b\"\n").is_err());
        assert!(check("fcidump = \"a\"\np_cut = 0.0\n").is_err());
        assert!(check("fcidump = \"a\"\np_cut = 1.5\n").is_err());
        assert!(check("fcidump = \"a\"\nbackend = \"import\"\n").is_err());
        assert!(check("fcidump = \"a\"\ntemperature = -1.0\n").is_err());
        assert!(check("fcidump = \"a\"\nunknown_key = 1\n").is_err());
        assert!(check("fcidump = \"a\"\nmapping = \"xyz\"\n").is_err());
    }

    #[test]
    fn relative_paths_resolve_against_config_dir() {
        let mut cfg = RunConfig::from_toml("fcidump = \"h2.fcidump\"\noutput = \"out\"\n").unwrap();
        cfg.resolve_paths(Path::new("/data/runs"));
        assert_eq!(cfg.fcidump.unwrap(), PathBuf::from("/data/runs/h2.fcidump"));
        assert_eq!(cfg.output, PathBuf::from("/data/runs/out"));
    }
}
