//! Front end for Toda blowup families: Weyl atlases, mass verification,
//! radial profiles and representation summaries.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
