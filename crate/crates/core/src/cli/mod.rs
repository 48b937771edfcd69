//! Config parsing and run orchestration behind the `fr-alias` binary.

mod config;
mod run;

pub use config::{Case, Cli, Command, Overrides, RunArgs, RunConfig, VALID_KEYS};
pub use run::{run, RunReport, RunStatus, SchemeRun, TimingReport, TimingRow};
