//! Experiment harness for the `dtc` binary: JSON specs, presets, and deterministic artifacts.

pub mod error;
pub mod output;
pub mod presets;
pub mod run;
pub mod spec;

pub use error::{CliError, CliResult};
pub use presets::{preset, PRESETS};
pub use run::{execute, RunReport};
pub use spec::{load_spec, parse_spec, ExperimentSpec};
