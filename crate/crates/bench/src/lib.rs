//! Built-in manufactured problems, formulation studies and the `hadgal`
//! command line on top of `hadgal-core`.

pub mod cli;
pub mod error;
pub mod jacobian;
pub mod problems;
pub mod report;
pub mod study;

pub use error::{BenchError, Result};
pub use problems::{builtin_problems, find_problem, BenchmarkProblem};
pub use study::{compare, run_single, run_study, Formulation, RunRecord, StudyConfig};
