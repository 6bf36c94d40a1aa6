//! Command-line front end.

pub mod commands;
pub mod problem;
pub mod report;
pub mod schema;
