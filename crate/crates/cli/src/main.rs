use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use miqcc_cli::config::{Backend, BaselineKind, RunConfig, SpinPenalty};
use miqcc_cli::error::{CliError, Result};
use miqcc_cli::mi_report::{mi_report, MiSetting};
use miqcc_cli::output::ArtifactDir;
use miqcc_cli::pipeline::{load_problem, run_pipeline};
use miqcc_cli::sweep::SweepPlan;
use miqcc_core::fermion::{Grouping, Mapping};
use miqcc_core::reference::MiMatrix;
use miqcc_core::screening::{generate_pool, percentiles, screen_pool, screening_report, EntanglerPool};

/// Mutual-information screened adaptive QCC-VQE.
#[derive(Debug, Parser)]
#[command(name = "miqcc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline for one Hamiltonian.
    Run(RunArgs),
    /// Run many configurations and tabulate their screening rates.
    Sweep(SweepArgs),
    /// Compare entangler percentiles under exact and MPS mutual information.
    MiReport(MiReportArgs),
    /// Encode an FCIDUMP file into a qubit Hamiltonian in Pauli text.
    Encode(EncodeArgs),
    /// Generate or screen entangler pools.
    #[command(subcommand)]
    Pool(PoolCommand),
}

/// Command-line overrides of the config file keys.
#[derive(Debug, Default, Args)]
struct ConfigArgs {
    /// TOML config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    fcidump: Option<PathBuf>,
    #[arg(long)]
    pauli: Option<PathBuf>,
    /// Reference bitstring for a Pauli Hamiltonian, qubit 0 first.
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    mapping: Option<Mapping>,
    #[arg(long)]
    grouping: Option<Grouping>,
    #[arg(long)]
    reduce_stationary: bool,
    #[arg(long)]
    p_cut: Option<f64>,
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,
    #[arg(long)]
    chi: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    mi_file: Option<PathBuf>,
    #[arg(long)]
    descent_fraction: Option<f64>,
    #[arg(long)]
    hops: Option<usize>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    step_size: Option<f64>,
    #[arg(long)]
    gtol: Option<f64>,
    /// Add a spin penalty; without a value the default weight is used.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_parser = parse_spin_penalty)]
    spin_penalty: Option<SpinPenalty>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    reference_energy: Option<f64>,
    #[arg(long, value_parser = parse_baseline)]
    baseline: Option<BaselineKind>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    tag: Option<String>,
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    match s {
        "exact" => Ok(Backend::Exact),
        "mps" => Ok(Backend::Mps),
        "import" => Ok(Backend::Import),
        _ => Err(format!("unknown backend {s:?}")),
    }
}

fn parse_baseline(s: &str) -> std::result::Result<BaselineKind, String> {
    match s {
        "reduced" => Ok(BaselineKind::Reduced),
        "unreduced" => Ok(BaselineKind::Unreduced),
        _ => Err(format!("unknown baseline {s:?}")),
    }
}

fn parse_spin_penalty(s: &str) -> std::result::Result<SpinPenalty, String> {
    match s {
        "true" => Ok(SpinPenalty::Enabled(true)),
        "false" => Ok(SpinPenalty::Enabled(false)),
        _ => s.parse().map(SpinPenalty::Weight).map_err(|_| format!("bad spin penalty {s:?}")),
    }
}

impl ConfigArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        macro_rules! set_opt {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    cfg.$field = self.$field;
                }
            )*};
        }
        set!(mapping, grouping, backend, chi, sweeps, descent_fraction, hops, temperature, step_size, gtol);
        set!(max_steps, tolerance, baseline, seed, output);
        set_opt!(reference, p_cut, mi_file, spin_penalty, reference_energy, tag);
        if self.fcidump.is_some() {
            cfg.fcidump = self.fcidump;
            cfg.pauli = None;
        }
        if self.pauli.is_some() {
            cfg.pauli = self.pauli;
            cfg.fcidump = None;
        }
        if self.reduce_stationary {
            cfg.reduce_stationary = true;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Sweep file with `[base]` and `[[run]]` tables.
    plan: Option<PathBuf>,
    /// Shared config for a sweep over `--fcidump` files.
    #[arg(long, conflicts_with = "plan")]
    config: Option<PathBuf>,
    #[arg(long = "fcidump", conflicts_with = "plan")]
    fcidumps: Vec<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Runs executed at the same time.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct MiReportArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// `exact`, `CHI` or `CHI:SWEEPS`; repeat for several settings.
    #[arg(long = "setting", required = true)]
    settings: Vec<MiSetting>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[arg(long)]
    fcidump: PathBuf,
    #[arg(long, default_value = "jordan_wigner")]
    mapping: Mapping,
    #[arg(long, default_value = "abab")]
    grouping: Grouping,
    #[arg(long)]
    reduce_stationary: bool,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_parser = parse_spin_penalty)]
    spin_penalty: Option<SpinPenalty>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum PoolCommand {
    /// Every QCC entangler on `qubits` qubits.
    Generate {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Keep the words whose MI percentile is within `p_cut`.
    Screen {
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        mi: PathBuf,
        #[arg(long)]
        p_cut: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Per-word strengths and percentiles as CSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn core<T>(stage: &'static str, r: miqcc_core::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::Stage { stage, source })
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let cfg = args.config.into_config()?;
    if args.print_config {
        print!("{}", cfg.to_toml());
        return Ok(ExitCode::SUCCESS);
    }
    let outcome = run_pipeline(&cfg)?;
    let r = &outcome.report.run;
    for w in &outcome.report.warnings {
        eprintln!("warning: {w}");
    }
    let pct = |p: Option<f64>| p.map_or("-".to_string(), |p| format!("{:.2}%", 100.0 * p));
    println!(
        "{}: {} entanglers, E = {:.10}, exact = {:.10}, p_max = {}, p_avg = {}, {:?}",
        if r.converged { "converged" } else { "not converged" },
        r.n_ent,
        r.final_energy,
        outcome.report.exact_energy,
        pct(r.p_max),
        pct(r.p_avg),
        r.stop_reason,
    );
    Ok(if r.converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let mut plan = match (&args.plan, &args.config) {
        (Some(path), _) => SweepPlan::load(path)?,
        (None, cfg_path) => {
            let base = match cfg_path {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            let output = args.output.clone().unwrap_or_else(|| PathBuf::from("out/sweep"));
            SweepPlan::from_files(&base, &args.fcidumps, &output, args.jobs)?
        }
    };
    if let Some(j) = args.jobs {
        plan.jobs = j.max(1);
    }
    if let (Some(out), Some(_)) = (&args.output, &args.plan) {
        let old = plan.output.clone();
        for r in &mut plan.runs {
            if let Ok(rel) = r.output.strip_prefix(&old) {
                r.output = out.join(rel);
            }
        }
        plan.output = out.clone();
    }
    let rows = plan.execute()?;
    print!("{}", miqcc_cli::sweep::rows_csv(&rows));
    Ok(if rows.iter().all(|r| r.converged) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn report(args: MiReportArgs) -> Result<ExitCode> {
    let cfg = args.config.into_config()?;
    let report = mi_report(&cfg, &args.settings)?;
    let mut out = ArtifactDir::create(&cfg.output)?;
    report.write(&mut out)?;
    print!("{}", report.settings_csv());
    Ok(ExitCode::SUCCESS)
}

fn encode(args: EncodeArgs) -> Result<ExitCode> {
    let cfg = RunConfig {
        fcidump: Some(args.fcidump),
        mapping: args.mapping,
        grouping: args.grouping,
        reduce_stationary: args.reduce_stationary,
        spin_penalty: args.spin_penalty,
        ..RunConfig::default()
    };
    let (problem, _) = load_problem(&cfg)?;
    let bits: String = problem.reference.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let mut text = format!("# reference: {bits}\n");
    if problem.is_reduced() {
        let map: Vec<String> = problem.index_map.iter().map(|q| q.to_string()).collect();
        text.push_str(&format!("# qubits kept from the full register: {}\n", map.join(" ")));
    }
    text.push_str(&problem.hamiltonian.to_text());
    emit(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn pool(cmd: PoolCommand) -> Result<ExitCode> {
    match cmd {
        PoolCommand::Generate { qubits, output } => {
            let pool = core("pool", generate_pool(qubits))?;
            emit(output.as_deref(), &pool.to_text())?;
        }
        PoolCommand::Screen {
            pool,
            mi,
            p_cut,
            output,
            report,
        } => {
            if !(p_cut > 0.0 && p_cut <= 1.0) {
                return Err(CliError::Config(format!("p_cut must lie in (0, 1], got {p_cut}")));
            }
            let pool = core("parse", EntanglerPool::from_text(&read(&pool)?))?;
            let mi = core("parse", MiMatrix::from_csv(&read(&mi)?))?;
            let scored = core("screen", percentiles(&pool, &mi))?;
            let kept = core("screen", screen_pool(&pool, &mi, p_cut))?;
            if let Some(r) = report {
                emit(Some(&r), &screening_report(&scored, p_cut))?;
            }
            emit(output.as_deref(), &kept.to_text())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::MiReport(a) => report(a),
        Command::Encode(a) => encode(a),
        Command::Pool(c) => pool(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
