// SPDX-License-Identifier: MIT OR Apache-2.0
//! Scenario manifests, the step runner and structured reports for the
//! `schwarz` command-line tool.
//!
//! A scenario names a coordinate space, an optional matrix group, a set of
//! invariants with their evaluations and a list of steps. Running it yields
//! a JSON report with sorted keys, so two runs are byte-identical.

pub mod context;
pub mod manifest;
pub mod render;
pub mod runner;
pub mod trace;

pub use context::Context;
pub use manifest::{GroupFile, Scenario, Step};
pub use runner::{run_scenario, run_scenario_file, Options, Report};

/// Failure outside the algebra itself: files, manifests, lookups.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("io: {0}")]
    Io(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{0}")]
    Core(#[from] schwarz_core::Error),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}
