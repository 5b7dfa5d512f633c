//! Scenario runner for the hybrid pointer measurement simulator.
//!
//! Each command reads a [`ScenarioConfig`], writes its outputs to a
//! directory, and returns an [`Outcome`] whose code is the process exit
//! status: 0 pass, 1 input error, 2 numerical failure, 3 gate failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{compare, mixture_equiv, sample, simulate, Outcome};
pub use config::{Action, ExportTarget, ScenarioConfig, DEFAULT_CONFIG};
pub use error::CliError;
