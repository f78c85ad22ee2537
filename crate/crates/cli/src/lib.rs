//! Driver for screened adaptive QCC runs: configuration, the end-to-end
//! pipeline, parameter sweeps and MI backend comparisons.

pub mod config;
pub mod error;
pub mod mi_report;
pub mod output;
pub mod pipeline;
pub mod sweep;

pub use config::{Backend, BaselineKind, RunConfig, SpinPenalty};
pub use error::{CliError, Result};
pub use pipeline::{run_pipeline, PipelineOutcome, PipelineReport};
pub use mi_report::{mi_report, MiReport, MiSetting};
pub use sweep::{SweepPlan, SweepRow};
