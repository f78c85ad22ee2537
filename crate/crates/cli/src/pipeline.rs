//! The end-to-end run: integrals to screened adaptive ansatz and reports.

use std::path::Path;

use miqcc_core::adaptive::{run_adaptive, AdaptiveProblem, Baseline, RunReport};
use miqcc_core::fermion::{build_qubit_problem, from_encoded, parse_fcidump, scan_sectors, QubitProblem, SectorScan};
use miqcc_core::pauli::{format_pauli_term, PauliWord};
use miqcc_core::reference::{exact_ground_state, mps_ground_state, mutual_information, DmrgOptions, MiMatrix, EXACT_MAX_QUBITS};
use miqcc_core::screening::{generate_pool, percentiles, screen_pool, screening_report, EntanglerPool, PoolProvenance};
use miqcc_core::{PauliSum, Error as CoreError};
use serde::Serialize;

use crate::config::{Backend, BaselineKind, RunConfig};
use crate::error::{CliError, Result, StageExt};
use crate::output::{sha256_file, to_json, ArtifactDir, FileDigest};

/// Energies within this of each other count as the same sector minimum.
const SECTOR_TOLERANCE: f64 = 1e-10;

/// The Hamiltonian, reference state and mutual information a run starts from.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: QubitProblem,
    pub exact_energy: f64,
    pub mi: MiMatrix,
    pub mi_source: MiSource,
    pub sector_scan: Option<SectorScan>,
    pub warnings: Vec<String>,
    pub inputs: Vec<FileDigest>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MiSource {
    Exact,
    Mps {
        chi: usize,
        sweeps: usize,
        energy: f64,
        energy_gap: f64,
        sweep_energies: Vec<f64>,
    },
    Import {
        file: String,
    },
}

/// Everything written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub tag: Option<String>,
    pub source: String,
    pub mapping: String,
    pub grouping: String,
    pub reduce_stationary: bool,
    pub spin_penalty: Option<f64>,
    pub n_qubits: usize,
    pub n_full_qubits: usize,
    pub removed_qubits: Vec<(usize, i8)>,
    pub reference_bits: String,
    pub exact_energy: f64,
    pub mi_source: MiSource,
    pub sector_scan: Option<SectorScan>,
    pub p_cut: Option<f64>,
    pub warnings: Vec<String>,
    pub run: RunReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    status: &'static str,
    failed_stage: Option<&'static str>,
    error: Option<String>,
    seed: u64,
    config: &'a RunConfig,
    inputs: &'a [FileDigest],
    artifacts: &'a [FileDigest],
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn parse_bits(s: &str, n: usize) -> Result<Vec<bool>> {
    let bits: Vec<bool> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Config(format!("reference bits must be 0/1, got {s:?}"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != n {
        return Err(CliError::Config(format!("reference has {} bits for {n} qubits", bits.len())));
    }
    Ok(bits)
}

/// Reads the Hamiltonian and builds the working qubit problem.
pub fn load_problem(cfg: &RunConfig) -> Result<(QubitProblem, Vec<FileDigest>)> {
    let mut inputs = Vec::new();
    let problem = if let Some(path) = &cfg.fcidump {
        let text = read(path)?;
        inputs.push(FileDigest {
            name: file_name(path),
            sha256: sha256_file(path)?,
        });
        let ints = parse_fcidump(&text).stage("parse")?;
        build_qubit_problem(&ints, &cfg.encoding(), cfg.spin_penalty_weight()).stage("encode")?
    } else if let Some(path) = &cfg.pauli {
        let text = read(path)?;
        inputs.push(FileDigest {
            name: file_name(path),
            sha256: sha256_file(path)?,
        });
        let h = PauliSum::from_text(&text).stage("parse")?;
        let reference = match &cfg.reference {
            Some(bits) => parse_bits(bits, h.n_qubits())?,
            None => vec![false; h.n_qubits()],
        };
        from_encoded(h, reference, cfg.reduce_stationary).stage("encode")?
    } else {
        return Err(CliError::Config("no Hamiltonian source".into()));
    };
    if let Some(path) = &cfg.mi_file {
        if cfg.backend == Backend::Import {
            inputs.push(FileDigest {
                name: file_name(path),
                sha256: sha256_file(path)?,
            });
        }
    }
    Ok((problem, inputs))
}

fn exact_energy_of(h: &PauliSum) -> miqcc_core::Result<f64> {
    exact_ground_state(h).map(|(e, _)| e)
}

/// Parses, encodes, solves for the reference state and computes the MI.
///
/// Computed MI is rounded to the precision of `mi.csv`, so importing that
/// file reproduces the run exactly.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    cfg.validate()?;
    let (problem, inputs) = load_problem(cfg)?;
    let mut warnings = Vec::new();
    let h = &problem.hamiltonian;

    let sector_scan = if problem.is_reduced() && problem.n_full_qubits() <= EXACT_MAX_QUBITS {
        let scan = scan_sectors(&problem.full_hamiltonian, &problem.full_reference, exact_energy_of)
            .stage("reference")?;
        if scan.energies[scan.lowest] < scan.energies[0] - SECTOR_TOLERANCE {
            warnings.push(format!(
                "the Hartree-Fock sector minimum {} lies above sector {} at {}; the reduced run cannot reach the global ground state",
                scan.energies[0], scan.lowest, scan.energies[scan.lowest]
            ));
        }
        Some(scan)
    } else {
        None
    };

    let (exact_energy, psi) = exact_ground_state(h).stage("reference")?;
    let (mi, mi_source) = match cfg.backend {
        Backend::Exact => (mutual_information(&psi).stage("reference")?.rounded(), MiSource::Exact),
        Backend::Mps => {
            let opts = DmrgOptions {
                chi: cfg.chi,
                sweeps: cfg.sweeps,
                seed: cfg.seed,
                ..DmrgOptions::default()
            };
            let mps = mps_ground_state(h, &opts).stage("reference")?;
            warnings.extend(mps.warnings().iter().map(|w| format!("dmrg: {w}")));
            let mi = mutual_information(&mps).stage("reference")?.rounded();
            (
                mi,
                MiSource::Mps {
                    chi: cfg.chi,
                    sweeps: cfg.sweeps,
                    energy: mps.energy(),
                    energy_gap: mps.energy() - exact_energy,
                    sweep_energies: mps.sweep_energies().to_vec(),
                },
            )
        }
        Backend::Import => {
            let path = cfg.mi_file.as_ref().expect("validated");
            let mi = MiMatrix::from_csv(&read(path)?).stage("parse")?;
            if mi.n_qubits() != h.n_qubits() {
                return Err(CliError::Stage {
                    stage: "parse",
                    source: CoreError::QubitMismatch {
                        left: h.n_qubits(),
                        right: mi.n_qubits(),
                    },
                });
            }
            (mi, MiSource::Import { file: file_name(path) })
        }
    };
    Ok(Prepared {
        problem,
        exact_energy,
        mi,
        mi_source,
        sector_scan,
        warnings,
        inputs,
    })
}

/// The working pool before screening.
pub fn working_pool(problem: &QubitProblem) -> Result<EntanglerPool> {
    let pool = generate_pool(problem.n_qubits()).stage("pool")?;
    Ok(if problem.is_reduced() {
        pool.with_provenance(PoolProvenance::StationaryReduced {
            removed: problem.removed.len(),
        })
    } else {
        pool
    })
}

/// The pool percentiles are reported against.
pub fn baseline_for(kind: BaselineKind, problem: &QubitProblem, pool: &EntanglerPool, mi: &MiMatrix) -> Result<Baseline> {
    match kind {
        BaselineKind::Reduced => Baseline::new(pool, mi).stage("pool"),
        BaselineKind::Unreduced => {
            let n_full = problem.n_full_qubits();
            let full_pool = generate_pool(n_full).stage("pool")?;
            let full_mi = mi.embed(&problem.index_map, n_full).stage("pool")?;
            Baseline::lifted(&full_pool, &full_mi, problem.index_map.clone()).stage("pool")
        }
    }
}

/// Result of [`run_pipeline`].
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub report: PipelineReport,
    pub words: Vec<PauliWord>,
}

impl PipelineOutcome {
    pub fn converged(&self) -> bool {
        self.report.run.converged
    }
}

/// Runs every stage and writes the artifacts into `cfg.output`.
///
/// On failure a manifest with `status = "failed"` is still written when the
/// output directory can be created.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineOutcome> {
    let mut out = ArtifactDir::create(&cfg.output)?;
    let mut inputs = Vec::new();
    let result = execute(cfg, &mut out, &mut inputs);
    let (status, failed_stage, error) = match &result {
        Ok(_) => ("complete", None, None),
        Err(e) => (
            "failed",
            Some(match e {
                CliError::Stage { stage, .. } => *stage,
                CliError::Config(_) => "config",
                CliError::Io { .. } => "io",
            }),
            Some(e.to_string()),
        ),
    };
    let artifacts = out.written().to_vec();
    let manifest = Manifest {
        tool: "miqcc",
        version: env!("CARGO_PKG_VERSION"),
        status,
        failed_stage,
        error,
        seed: cfg.seed,
        config: cfg,
        inputs: &inputs,
        artifacts: &artifacts,
    };
    let manifest_json = to_json(&manifest);
    out.write("manifest.json", &manifest_json)?;
    result
}

fn execute(cfg: &RunConfig, out: &mut ArtifactDir, inputs: &mut Vec<FileDigest>) -> Result<PipelineOutcome> {
    let prepared = prepare(cfg)?;
    inputs.clone_from(&prepared.inputs);
    let problem = &prepared.problem;
    out.write("mi.csv", &prepared.mi.to_csv())?;

    let pool = working_pool(problem)?;
    let baseline = baseline_for(cfg.baseline, problem, &pool, &prepared.mi)?;
    let scored = percentiles(&pool, &prepared.mi).stage("screen")?;
    let active = match cfg.p_cut {
        Some(p) => screen_pool(&pool, &prepared.mi, p).stage("screen")?,
        None => pool.clone(),
    };
    out.write("screening.csv", &screening_report(&scored, cfg.p_cut.unwrap_or(1.0)))?;
    out.write("pool.txt", &active.to_text())?;

    let reference_energy = cfg.reference_energy.unwrap_or(prepared.exact_energy);
    let adaptive = AdaptiveProblem {
        hamiltonian: &problem.hamiltonian,
        reference: &problem.reference,
        pool: &active,
        mi: &prepared.mi,
        baseline: &baseline,
    };
    let (run, ansatz) = run_adaptive(&adaptive, &cfg.adaptive(Some(reference_energy))).stage("adapt")?;

    let mut ansatz_text = format!(
        "# angle word\nqubits: {}\n# reference: {}\n",
        ansatz.n_qubits(),
        bit_string(&ansatz.reference)
    );
    for (w, t) in &ansatz.layers {
        ansatz_text.push_str(&format_pauli_term(*t, w));
        ansatz_text.push('\n');
    }
    out.write("ansatz.txt", &ansatz_text)?;
    out.write("steps.csv", &run.steps_csv())?;

    let source = cfg
        .fcidump
        .as_deref()
        .or(cfg.pauli.as_deref())
        .map(file_name)
        .unwrap_or_default();
    let report = PipelineReport {
        tag: cfg.tag.clone(),
        source,
        mapping: cfg.mapping.to_string(),
        grouping: cfg.grouping.to_string(),
        reduce_stationary: cfg.reduce_stationary,
        spin_penalty: cfg.spin_penalty_weight(),
        n_qubits: problem.n_qubits(),
        n_full_qubits: problem.n_full_qubits(),
        removed_qubits: problem.removed.clone(),
        reference_bits: bit_string(&problem.reference),
        exact_energy: prepared.exact_energy,
        mi_source: prepared.mi_source.clone(),
        sector_scan: prepared.sector_scan.clone(),
        p_cut: cfg.p_cut,
        warnings: prepared.warnings.clone(),
        run,
    };
    out.write("report.json", &to_json(&report))?;
    Ok(PipelineOutcome {
        words: ansatz.layers.iter().map(|(w, _)| *w).collect(),
        report,
    })
}
