//! File formats and batch commands on top of `unitcov-core`.

pub mod error;
pub mod facet_file;
pub mod json;
pub mod run;

pub use error::{CliError, Result};
pub use run::{run, Caps, Command, JobConfig};
