#![allow(dead_code)]

use std::path::{Path, PathBuf};

use miqcc_cli::RunConfig;
use miqcc_core::fermion::{Grouping, Mapping};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

/// A fast 6-qubit H2 configuration writing into `out`.
pub fn h2_config(bond: &str, out: &Path) -> RunConfig {
    RunConfig {
        fcidump: Some(fixture(&format!("h2/h2_{bond}.fcidump"))),
        mapping: Mapping::Parity,
        grouping: Grouping::Aabb,
        reduce_stationary: true,
        output: out.to_path_buf(),
        ..RunConfig::default()
    }
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
