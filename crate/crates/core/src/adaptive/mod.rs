//! Adaptive ansatz construction over a (possibly screened) entangler pool.
//!
//! Each step scores every pool word against the current state, keeps the
//! words whose energy descent is at least a fixed fraction of the best one,
//! appends the strongest-correlated of those and re-optimizes all angles
//! together. The percentiles of the adopted words give the screening rates
//! `p_max` and `p_avg`.

mod optimizer;
mod scoring;

use serde::{Deserialize, Serialize};

pub use optimizer::{basin_hopping, bfgs, joint_optimize, LocalMinimum, OptimizerConfig};
pub use scoring::{score_entangler, score_entangler_by_samples, FrozenState, Sinusoid};

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};
use crate::reference::MiMatrix;
use crate::screening::{correlation_strength, strengths, EntanglerPool, PercentileTable, PoolProvenance};
use crate::simulator::Ansatz;

/// Descents at or below this count as no improvement.
pub const DESCENT_FLOOR: f64 = 1e-10;

/// A scored trial entangler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub word: PauliWord,
    pub descent: f64,
    pub tau: f64,
    pub strength: f64,
}

/// The selected candidate and the size of the acceptable set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub acceptable: usize,
}

/// Picks the strongest-correlated word among those whose descent is at least
/// `fraction` of the largest descent.
///
/// Ties go to the larger descent, then to the canonically smaller word.
/// Returns `None` when no descent exceeds [`DESCENT_FLOOR`].
pub fn select_entangler(candidates: &[Candidate], fraction: f64) -> Option<Selection> {
    let max = candidates.iter().map(|c| c.descent).fold(f64::NEG_INFINITY, f64::max);
    if !(max > DESCENT_FLOOR) {
        return None;
    }
    let threshold = fraction * max;
    let mut acceptable = 0;
    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if c.descent < threshold || c.descent <= DESCENT_FLOOR {
            continue;
        }
        acceptable += 1;
        let better = match best {
            None => true,
            Some(b) => {
                let o = &candidates[b];
                c.strength
                    .total_cmp(&o.strength)
                    .then(c.descent.total_cmp(&o.descent))
                    .then(o.word.cmp(&c.word))
                    .is_gt()
            }
        };
        if better {
            best = Some(i);
        }
    }
    best.map(|index| Selection { index, acceptable })
}

/// The pool against which percentiles are reported.
#[derive(Debug, Clone)]
pub struct Baseline {
    table: PercentileTable,
    index_map: Option<Vec<usize>>,
    label: String,
}

impl Baseline {
    /// Percentiles against `pool` on the working register.
    pub fn new(pool: &EntanglerPool, mi: &MiMatrix) -> Result<Self> {
        Ok(Self {
            table: PercentileTable::new(pool, mi)?,
            index_map: None,
            label: "reduced".into(),
        })
    }

    /// Percentiles against `pool` on a larger register that the working
    /// qubits embed into via `index_map`; `mi` lives on the larger register.
    pub fn lifted(pool: &EntanglerPool, mi: &MiMatrix, index_map: Vec<usize>) -> Result<Self> {
        Ok(Self {
            table: PercentileTable::new(pool, mi)?,
            index_map: Some(index_map),
            label: "unreduced".into(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.table.baseline_size()
    }

    pub fn percentile(&self, word: &PauliWord) -> Result<f64> {
        let w = match &self.index_map {
            Some(map) => word.embed(map, self.table.n_qubits())?,
            None => *word,
        };
        Ok(self.table.score(&w)?.percentile)
    }
}

/// Settings for [`run_adaptive`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConfig {
    pub descent_fraction: f64,
    pub max_steps: usize,
    /// Allowed `|E − E_ref|` in hartree.
    pub tolerance: f64,
    /// Exact ground energy; without it the stall rule decides convergence.
    pub reference_energy: Option<f64>,
    /// Per-step energy gain below which a step counts as stalled.
    pub stall_threshold: f64,
    pub stall_steps: usize,
    pub optimizer: OptimizerConfig,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            descent_fraction: 0.3,
            max_steps: 30,
            tolerance: 1e-3,
            reference_energy: None,
            stall_threshold: 1e-6,
            stall_steps: 3,
            optimizer: OptimizerConfig::default(),
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    Stalled,
    NoImprovingEntangler,
    MaxSteps,
}

/// One adaptive step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub word: String,
    /// Trial optimum of the new angle before joint optimization.
    pub tau: f64,
    /// Energy after joint optimization.
    pub energy: f64,
    /// Trial descent of the chosen word.
    pub descent: f64,
    pub strength: f64,
    pub percentile: f64,
    pub acceptable: usize,
}

/// Summary of an adaptive run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub steps: Vec<StepRecord>,
    pub n_ent: usize,
    pub p_max: Option<f64>,
    pub p_avg: Option<f64>,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub reference_energy: Option<f64>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub parameters: Vec<f64>,
    pub pool_provenance: PoolProvenance,
    pub pool_size: usize,
    pub baseline: String,
    pub baseline_size: usize,
}

impl RunReport {
    /// CSV step table `step,word,tau,energy,descent,percentile`.
    pub fn steps_csv(&self) -> String {
        use crate::format::sig12;
        let mut out = String::from("step,word,tau,energy,descent,percentile\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.step,
                s.word,
                sig12(s.tau),
                sig12(s.energy),
                sig12(s.descent),
                sig12(s.percentile)
            ));
        }
        out
    }
}

/// Everything [`run_adaptive`] works on.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveProblem<'a> {
    pub hamiltonian: &'a PauliSum,
    pub reference: &'a [bool],
    pub pool: &'a EntanglerPool,
    pub mi: &'a MiMatrix,
    pub baseline: &'a Baseline,
}

/// Runs the adaptive loop and returns the report with the final ansatz.
pub fn run_adaptive(problem: &AdaptiveProblem<'_>, cfg: &AdaptiveConfig) -> Result<(RunReport, Ansatz)> {
    let h = problem.hamiltonian;
    let n = h.n_qubits();
    if problem.reference.len() != n {
        return Err(Error::QubitMismatch {
            left: n,
            right: problem.reference.len(),
        });
    }
    if problem.pool.n_qubits() != n {
        return Err(Error::QubitMismatch {
            left: n,
            right: problem.pool.n_qubits(),
        });
    }
    if !(cfg.descent_fraction > 0.0 && cfg.descent_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "descent fraction must lie in (0, 1], got {}",
            cfg.descent_fraction
        )));
    }
    cfg.optimizer.validate()?;

    let pool_strengths = strengths(problem.pool, problem.mi)?;
    let mut ansatz = Ansatz::new(problem.reference.to_vec());
    let initial_energy = ansatz.state()?.expectation(h)?;
    let mut energy = initial_energy;
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut stalled = 0;

    let close_enough = |e: f64| cfg.reference_energy.is_some_and(|r| (e - r).abs() <= cfg.tolerance);
    let mut stop = if close_enough(energy) {
        Some(StopReason::Converged)
    } else {
        None
    };

    let mut step = 0;
    while stop.is_none() {
        if step == cfg.max_steps {
            stop = Some(StopReason::MaxSteps);
            break;
        }
        step += 1;
        let frozen = FrozenState::new(ansatz.state()?, h)?;
        let scores = frozen.score_all(problem.pool.words())?;
        let candidates: Vec<Candidate> = problem
            .pool
            .words()
            .iter()
            .zip(&scores)
            .zip(&pool_strengths)
            .map(|((w, &(descent, tau)), &strength)| Candidate {
                word: *w,
                descent,
                tau,
                strength,
            })
            .collect();
        let Some(sel) = select_entangler(&candidates, cfg.descent_fraction) else {
            stop = Some(StopReason::NoImprovingEntangler);
            break;
        };
        let chosen = candidates[sel.index];
        ansatz.push(chosen.word, chosen.tau);
        let opt = OptimizerConfig {
            seed: step_seed(cfg.optimizer.seed, step),
            ..cfg.optimizer
        };
        let (params, e_new) = joint_optimize(&ansatz, h, &opt)?;
        ansatz.set_parameters(&params);
        let gain = energy - e_new;
        energy = e_new;
        steps.push(StepRecord {
            step,
            word: chosen.word.to_string(),
            tau: chosen.tau,
            energy,
            descent: chosen.descent,
            strength: correlation_strength(&chosen.word, problem.mi),
            percentile: problem.baseline.percentile(&chosen.word)?,
            acceptable: sel.acceptable,
        });
        if close_enough(energy) {
            stop = Some(StopReason::Converged);
        } else if cfg.reference_energy.is_none() {
            stalled = if gain < cfg.stall_threshold { stalled + 1 } else { 0 };
            if stalled >= cfg.stall_steps {
                stop = Some(StopReason::Stalled);
            }
        }
    }
    let stop_reason = stop.expect("loop exits with a reason");
    let percentiles: Vec<f64> = steps.iter().map(|s| s.percentile).collect();
    let p_max = percentiles.iter().copied().reduce(f64::max);
    let p_avg = (!percentiles.is_empty()).then(|| percentiles.iter().sum::<f64>() / percentiles.len() as f64);
    let report = RunReport {
        n_ent: steps.len(),
        steps,
        p_max,
        p_avg,
        converged: match stop_reason {
            StopReason::Converged | StopReason::Stalled => true,
            StopReason::NoImprovingEntangler => cfg.reference_energy.is_none(),
            StopReason::MaxSteps => false,
        },
        stop_reason,
        reference_energy: cfg.reference_energy,
        initial_energy,
        final_energy: energy,
        parameters: ansatz.parameters(),
        pool_provenance: problem.pool.provenance(),
        pool_size: problem.pool.len(),
        baseline: problem.baseline.label().to_string(),
        baseline_size: problem.baseline.size(),
    };
    Ok((report, ansatz))
}

fn step_seed(seed: u64, step: usize) -> u64 {
    seed ^ (step as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}
