//! Experiment drivers behind the `qsim` command line.

pub mod args;
pub mod error;
pub mod experiments;
pub mod record;

pub use args::{Backend, Cli, Command, Demo, Format};
pub use error::{CliError, ExitCode};
pub use record::ResultRecord;
