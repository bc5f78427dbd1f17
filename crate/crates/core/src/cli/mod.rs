//! Configuration, command dispatch and output formatting behind the `qnd-antenna` binary.

pub mod config;
pub mod format;
pub mod run;

pub use config::{parse_config, RunConfig};
pub use format::{Format, Report};
pub use run::{error_line, execute, exit_code, Command, Sweep};
