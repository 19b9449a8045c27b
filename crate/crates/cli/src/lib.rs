//! Instance files, generators, the benchmark harness and the subcommands
//! of the `geomis` binary.

pub mod bench;
pub mod cli;
pub mod error;
pub mod instance;
pub mod solvers;

pub use error::{CliError, Result};
pub use instance::{Instance, Kind};
