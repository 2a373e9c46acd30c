//! Problem loading, worked examples, Matrix Market I/O and the verification
//! pipeline behind the command-line tool.

pub mod builtin;
pub mod mtx;
pub mod problem;
pub mod report;
pub mod verify;

pub use problem::{load_problem, BMode, LoadedProblem, ProblemSpec, Scheme, SmootherRule, Source};
pub use report::{emit_report, CheckRecord, Format, Outcome, VerificationReport};
pub use verify::run_verification;
