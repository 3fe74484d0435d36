//! Command-line companion to `cslrad-core`: run configuration, spectrum
//! files (CSV, JSON, SVG), λ bounds against bundled limits, oracle
//! verification and parameter sweeps.

pub mod bound;
pub mod config;
pub mod error;
pub mod spectrum;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
