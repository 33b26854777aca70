//! Monte Carlo sweeps, scheme comparison, CoMP mode and validation suites.

pub mod config;
pub mod stats;
pub mod sweep;
pub mod validate;

pub use config::{Scheme, SimConfig};
pub use sweep::{
    config_dictionary, run_comparison, run_sweep, run_trial, strip_wall_time, BlerPoint,
    ComparisonRow, SweepResult, TrialOutcome, CSV_COLUMNS,
};
pub use validate::{validate, validate_with, CheckResult, ValidationHooks, ValidationReport};
