//! Verification harness: runs clique, direction and character-sum checks
//! and emits versioned JSON reports.

pub mod cli;
pub mod commands;
pub mod job;
pub mod report;

pub use commands::{execute, Command};
pub use job::{Family, HarnessError, Job, Params};
pub use report::{Report, Verdict, EXIT_USAGE, REPORT_SCHEMA, SCHEMA_VERSION};
