//! Command-line driver and file formats for `qtd-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep_io;

pub use cli::run;
pub use error::CliError;
