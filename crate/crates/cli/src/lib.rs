//! Command-line front end for `schrograph-core`: the JSON spec format, corpus
//! manifests, and the reports each subcommand writes.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod report;
pub mod spec;
pub mod suite;

pub use cli::{run, Cli};
pub use error::{CliError, Result};
pub use spec::SpecDocument;

/// Exit status when a report was written but its check did not hold.
pub const EXIT_CHECK_FAILED: i32 = 3;
