//! Library side of the CLI: file schemas, report rendering, and command
//! dispatch, kept separate from the binary so integration tests can drive
//! everything directly.

pub mod commands;
pub mod report;
pub mod schema;
pub mod workspace;
