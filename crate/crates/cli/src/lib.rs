//! Experiment harness around `assort-core`: named presets, the end-to-end
//! case runner and run comparison.

pub mod case;
pub mod compare;
pub mod error;
pub mod preset;

pub use case::{run_case, CaseReport};
pub use compare::{compare_runs, Comparison};
pub use error::{CliError, CliResult, Stage};
pub use preset::{preset, preset_names, CaseConfig};
