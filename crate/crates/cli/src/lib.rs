//! Command-line harness around `spca-core`: fit an algorithm on a dataset,
//! write a versioned JSON report with its loadings, and rerun the reference
//! experiments.
//!
//! Exit codes of the `spca` binary: `0` success, `2` rejected arguments or
//! inputs (nothing was fitted), `3` a fit or an output write failed. The
//! error name is printed on standard error as `error[Name]: message`.

pub mod error;
pub mod report;
pub mod reproduce;
pub mod run;
pub mod source;

pub use error::{CliError, CliResult, EXIT_INVALID, EXIT_RUNTIME};
pub use run::{Algorithm, RunSpec};
pub use source::SourceSpec;
