//! File formats, reports and command implementations for the `noop` tool.

pub mod cmd;
pub mod load;
pub mod report;
pub mod sexpr;
pub mod suites;
