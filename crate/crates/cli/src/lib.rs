//! Experiment runner behind the `burstsync` binary.
//!
//! A run is described by an [`ExperimentConfig`], built from flags, a TOML
//! file, or both, and produces a CSV [`Table`] plus a text summary.

pub mod args;
pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

pub use config::{Command, ExperimentConfig};
pub use error::{CliError, Result};
pub use experiments::{run, Report};
pub use table::{fmt_g, Table};
