//! Batches of runs sharing a base configuration.
//!
//! ```toml
//! jobs = 4
//! output = "out/sweep"
//!
//! [base]
//! mapping = "parity"
//! grouping = "aabb"
//! reduce_stationary = true
//!
//! [[run]]
//! fcidump = "fixtures/h2/h2_0.7.fcidump"
//!
//! [[run]]
//! tag = "stretched"
//! fcidump = "fixtures/h2/h2_1.8.fcidump"
//! p_cut = 0.1
//! ```
//!
//! Each `[[run]]` table overrides keys of `[base]`. A run without a tag is
//! labelled by the stem of its Hamiltonian file, and a run without an output
//! directory writes into `<output>/<tag>`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use miqcc_core::format::sig12;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{to_json, ArtifactDir};
use crate::pipeline::run_pipeline;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    jobs: Option<usize>,
    output: Option<PathBuf>,
    #[serde(default)]
    base: toml::Table,
    #[serde(default)]
    run: Vec<toml::Table>,
}

/// Fully resolved runs of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub jobs: usize,
    pub output: PathBuf,
    pub runs: Vec<RunConfig>,
}

/// One line of the sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub tag: String,
    pub p_max: Option<f64>,
    pub p_avg: Option<f64>,
    pub n_ent: usize,
    pub converged: bool,
    pub final_energy: Option<f64>,
    pub reference_energy: Option<f64>,
    pub error: Option<String>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn finish_runs(mut runs: Vec<RunConfig>, output: &Path, explicit_output: &[bool]) -> Result<Vec<RunConfig>> {
    let mut seen = BTreeSet::new();
    for (cfg, &explicit) in runs.iter_mut().zip(explicit_output) {
        let tag = match &cfg.tag {
            Some(t) => t.clone(),
            None => cfg
                .fcidump
                .as_deref()
                .or(cfg.pauli.as_deref())
                .map(stem)
                .ok_or_else(|| CliError::Config("sweep run without a Hamiltonian source".into()))?,
        };
        if !seen.insert(tag.clone()) {
            return Err(CliError::Config(format!("duplicate sweep tag {tag:?}")));
        }
        if !explicit {
            cfg.output = output.join(&tag);
        }
        cfg.tag = Some(tag);
    }
    Ok(runs)
}

impl SweepPlan {
    /// Parses a sweep file; relative paths are taken from `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let file: SweepFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if file.run.is_empty() {
            return Err(CliError::Config("sweep has no [[run]] entries".into()));
        }
        let mut runs = Vec::with_capacity(file.run.len());
        let mut explicit = Vec::with_capacity(file.run.len());
        for delta in file.run {
            let mut merged = file.base.clone();
            explicit.push(delta.contains_key("output"));
            merged.extend(delta);
            let mut cfg: RunConfig = merged
                .try_into()
                .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
            cfg.resolve_paths(base_dir);
            runs.push(cfg);
        }
        let output = base_dir.join(file.output.unwrap_or_else(|| PathBuf::from("out")));
        Ok(Self {
            jobs: file.jobs.unwrap_or_else(default_jobs).max(1),
            runs: finish_runs(runs, &output, &explicit)?,
            output,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// One run per Hamiltonian file on top of a shared configuration.
    pub fn from_files(base: &RunConfig, files: &[PathBuf], output: &Path, jobs: Option<usize>) -> Result<Self> {
        if files.is_empty() {
            return Err(CliError::Config("sweep needs at least one fcidump file".into()));
        }
        let runs: Vec<RunConfig> = files
            .iter()
            .map(|f| RunConfig {
                fcidump: Some(f.clone()),
                pauli: None,
                tag: None,
                ..base.clone()
            })
            .collect();
        let explicit = vec![false; runs.len()];
        Ok(Self {
            jobs: jobs.unwrap_or_else(default_jobs).max(1),
            runs: finish_runs(runs, output, &explicit)?,
            output: output.to_path_buf(),
        })
    }

    /// Runs everything, `jobs` at a time. Rows keep the plan order; a failed
    /// run becomes a non-converged row carrying its error.
    pub fn execute(&self) -> Result<Vec<SweepRow>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        let rows: Vec<SweepRow> = pool.install(|| self.runs.par_iter().map(run_row).collect());
        let mut out = ArtifactDir::create(&self.output)?;
        out.write("sweep.csv", &rows_csv(&rows))?;
        out.write("sweep.json", &to_json(&rows))?;
        Ok(rows)
    }
}

fn run_row(cfg: &RunConfig) -> SweepRow {
    let tag = cfg.tag.clone().unwrap_or_default();
    match run_pipeline(cfg) {
        Ok(outcome) => {
            let run = &outcome.report.run;
            SweepRow {
                tag,
                p_max: run.p_max,
                p_avg: run.p_avg,
                n_ent: run.n_ent,
                converged: run.converged,
                final_energy: Some(run.final_energy),
                reference_energy: run.reference_energy,
                error: None,
            }
        }
        Err(e) => SweepRow {
            tag,
            p_max: None,
            p_avg: None,
            n_ent: 0,
            converged: false,
            final_energy: None,
            reference_energy: None,
            error: Some(e.to_string()),
        },
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn rows_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("tag,p_max,p_avg,n_ent,converged,final_energy,reference_energy,error\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            quote(&r.tag),
            opt(r.p_max),
            opt(r.p_avg),
            r.n_ent,
            r.converged,
            opt(r.final_energy),
            opt(r.reference_energy),
            quote(r.error.as_deref().unwrap_or("")),
        ));
    }
    s
}
