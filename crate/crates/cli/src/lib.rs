//! File formats, experiment drivers and the command-line front end for
//! `planar-limits-core`.

pub mod analysis;
pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod io;
pub mod sweep;

pub use error::{CliError, Result};
