//! How much the entangler percentiles move when the MI comes from a
//! truncated MPS instead of the exact ground state.
//!
//! The adaptive run is done once, on the full pool with exact MI. The words it
//! selects are then re-scored under the MI of every requested setting.

use std::fmt;
use std::str::FromStr;

use miqcc_core::adaptive::{run_adaptive, AdaptiveProblem};
use miqcc_core::format::sig12;
use miqcc_core::reference::{mps_ground_state, mutual_information, spearman, DmrgOptions, MiMatrix};
use miqcc_core::screening::strengths;
use serde::Serialize;

use crate::config::{Backend, RunConfig};
use crate::error::{CliError, Result, StageExt};
use crate::output::{to_json, ArtifactDir};
use crate::pipeline::{baseline_for, prepare, working_pool};

/// Source of the MI matrix in a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MiSetting {
    Exact,
    Mps { chi: usize, sweeps: usize },
}

impl fmt::Display for MiSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MiSetting::Exact => f.write_str("exact"),
            MiSetting::Mps { chi, sweeps } => write!(f, "mps_chi{chi}_sweeps{sweeps}"),
        }
    }
}

/// `exact`, `CHI` or `CHI:SWEEPS`.
impl FromStr for MiSetting {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Config(format!("MI setting must be `exact`, `CHI` or `CHI:SWEEPS`, got {s:?}"));
        if s == "exact" {
            return Ok(MiSetting::Exact);
        }
        let (chi, sweeps) = match s.split_once(':') {
            Some((c, w)) => (c, Some(w)),
            None => (s, None),
        };
        let chi: usize = chi.trim().parse().map_err(|_| bad())?;
        let sweeps = match sweeps {
            Some(w) => w.trim().parse().map_err(|_| bad())?,
            None => DmrgOptions::default().sweeps,
        };
        if chi == 0 || sweeps == 0 {
            return Err(bad());
        }
        Ok(MiSetting::Mps { chi, sweeps })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingResult {
    pub label: String,
    pub setting: MiSetting,
    pub energy: f64,
    /// Energy above the exact ground state.
    pub energy_gap: f64,
    pub max_mi_difference: f64,
    /// Rank correlation of pool strengths under this MI and the exact MI.
    pub spearman: Option<f64>,
    /// Percentile of each selected word under this MI.
    pub trace: Vec<f64>,
    pub p_max: Option<f64>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub mi: MiMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiReport {
    pub n_qubits: usize,
    pub exact_energy: f64,
    pub baseline: String,
    /// Words selected by the exact-MI full-pool run.
    pub words: Vec<String>,
    pub settings: Vec<SettingResult>,
}

fn max_abs_diff(a: &MiMatrix, b: &MiMatrix) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs the comparison. `cfg.backend` and `cfg.p_cut` are ignored.
pub fn mi_report(cfg: &RunConfig, settings: &[MiSetting]) -> Result<MiReport> {
    if settings.is_empty() {
        return Err(CliError::Config("mi-report needs at least one setting".into()));
    }
    let exact_cfg = RunConfig {
        backend: Backend::Exact,
        p_cut: None,
        ..cfg.clone()
    };
    let prepared = prepare(&exact_cfg)?;
    let problem = &prepared.problem;
    let h = &problem.hamiltonian;
    let pool = working_pool(problem)?;
    let baseline = baseline_for(cfg.baseline, problem, &pool, &prepared.mi)?;
    let adaptive = AdaptiveProblem {
        hamiltonian: h,
        reference: &problem.reference,
        pool: &pool,
        mi: &prepared.mi,
        baseline: &baseline,
    };
    let reference_energy = cfg.reference_energy.unwrap_or(prepared.exact_energy);
    let (_, ansatz) = run_adaptive(&adaptive, &cfg.adaptive(Some(reference_energy))).stage("adapt")?;
    let words: Vec<_> = ansatz.layers.iter().map(|(w, _)| *w).collect();
    let exact_strengths = strengths(&pool, &prepared.mi).stage("screen")?;

    let mut results = Vec::with_capacity(settings.len());
    for &setting in settings {
        let (energy, mi, warnings) = match setting {
            MiSetting::Exact => (prepared.exact_energy, prepared.mi.clone(), Vec::new()),
            MiSetting::Mps { chi, sweeps } => {
                let opts = DmrgOptions {
                    chi,
                    sweeps,
                    seed: cfg.seed,
                    ..DmrgOptions::default()
                };
                let mps = mps_ground_state(h, &opts).stage("reference")?;
                let mi = mutual_information(&mps).stage("reference")?.rounded();
                (mps.energy(), mi, mps.warnings().to_vec())
            }
        };
        let b = baseline_for(cfg.baseline, problem, &pool, &mi)?;
        let trace = words.iter().map(|w| b.percentile(w)).collect::<miqcc_core::Result<Vec<f64>>>().stage("screen")?;
        let s = strengths(&pool, &mi).stage("screen")?;
        results.push(SettingResult {
            label: setting.to_string(),
            setting,
            energy,
            energy_gap: energy - prepared.exact_energy,
            max_mi_difference: max_abs_diff(&mi, &prepared.mi),
            spearman: spearman(&exact_strengths, &s),
            p_max: trace.iter().copied().reduce(f64::max),
            trace,
            warnings,
            mi,
        });
    }
    Ok(MiReport {
        n_qubits: h.n_qubits(),
        exact_energy: prepared.exact_energy,
        baseline: baseline.label().to_string(),
        words: words.iter().map(|w| w.to_string()).collect(),
        settings: results,
    })
}

impl MiReport {
    /// `step,word,<label>...` with one percentile column per setting.
    pub fn traces_csv(&self) -> String {
        let mut s = String::from("step,word");
        for r in &self.settings {
            s.push(',');
            s.push_str(&r.label);
        }
        s.push('\n');
        for (k, w) in self.words.iter().enumerate() {
            s.push_str(&format!("{},{}", k + 1, w));
            for r in &self.settings {
                s.push(',');
                s.push_str(&sig12(r.trace[k]));
            }
            s.push('\n');
        }
        s
    }

    pub fn settings_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(sig12).unwrap_or_default();
        let mut s = String::from("label,chi,sweeps,energy,energy_gap,max_mi_difference,spearman,p_max\n");
        for r in &self.settings {
            let (chi, sweeps) = match r.setting {
                MiSetting::Exact => (String::new(), String::new()),
                MiSetting::Mps { chi, sweeps } => (chi.to_string(), sweeps.to_string()),
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.label,
                chi,
                sweeps,
                sig12(r.energy),
                sig12(r.energy_gap),
                sig12(r.max_mi_difference),
                opt(r.spearman),
                opt(r.p_max),
            ));
        }
        s
    }

    /// Writes the JSON report, both tables and one MI CSV per setting.
    pub fn write(&self, out: &mut ArtifactDir) -> Result<()> {
        out.write("mi_report.json", &to_json(self))?;
        out.write("traces.csv", &self.traces_csv())?;
        out.write("settings.csv", &self.settings_csv())?;
        for r in &self.settings {
            out.write(&format!("mi_{}.csv", r.label), &r.mi.to_csv())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings_parse() {
        assert_eq!("exact".parse::<MiSetting>().unwrap(), MiSetting::Exact);
        assert_eq!("4:2".parse::<MiSetting>().unwrap(), MiSetting::Mps { chi: 4, sweeps: 2 });
        assert_eq!(
            "8".parse::<MiSetting>().unwrap(),
            MiSetting::Mps {
                chi: 8,
                sweeps: DmrgOptions::default().sweeps
            }
        );
        assert!("0:3".parse::<MiSetting>().is_err());
        assert!("x".parse::<MiSetting>().is_err());
        assert_eq!(MiSetting::Mps { chi: 2, sweeps: 1 }.to_string(), "mps_chi2_sweeps1");
    }
}
