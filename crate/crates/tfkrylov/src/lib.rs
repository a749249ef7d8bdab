//! Experiment harness around `tfkrylov-core`: a key=value configuration
//! format, a parallel (solver, seed) runner, CSV reports, binary PGM images
//! and the invariant suite behind the `verify` command.

pub mod config;
mod error;
pub mod experiment;
pub mod pgm;
pub mod report;
pub mod verify;

pub use config::{parse_config, ExperimentConfig, Problem, SolverKind};
pub use error::HarnessError;
pub use experiment::{run_experiment, summarize, ExperimentOutput, ResultRow, Series, SummaryRow};
