//! Subcommand implementations. Each command returns a [`RunOutput`]
//! carrying the report text, any artifact files, and the exit code;
//! `main` prints the report and optionally writes the artifacts.
//!
//! [`RunOutput`]: crate::output::RunOutput

pub mod budget;
pub mod geom;
pub mod lab;
pub mod mds;
pub mod protocol;
pub mod stats;
pub mod units;
