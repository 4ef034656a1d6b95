//! Library side of the `twosample` command-line tool.

pub mod dataset;
pub mod report;
pub mod run;
pub mod simulate;
