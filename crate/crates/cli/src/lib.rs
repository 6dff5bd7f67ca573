//! File formats, batch evaluation and the `criticality` command line.

pub mod cli;
pub mod compute;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod filter;
pub mod simulate;
pub mod suitability_io;
pub mod trajectories;

pub use error::{CliError, Result};
