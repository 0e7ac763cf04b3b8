//! Configured, reproducible experiments over the library's modules.

pub mod bundle;
pub mod config;
pub mod csvio;
pub mod run;

pub use bundle::write_atomic;
pub use config::{ExperimentConfig, ExperimentKind, ExperimentSpec, Section, KINDS};
pub use run::{check_fixtures, run_experiment, run_one, Bundle, Check, ExperimentOutcome, OutputFile};
