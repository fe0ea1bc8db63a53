//! Scenario files, the experiment runner and report output for `toeplitz-lab`.

pub mod report;
pub mod runner;
pub mod scenario;
