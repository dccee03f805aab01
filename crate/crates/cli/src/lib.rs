//! Scenario files for the `emcov` command: parsing, execution and reports.

pub mod report;
pub mod run;
pub mod scenario;
