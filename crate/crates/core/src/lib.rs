//! Two-grid error analysis in non-standard inner products.
//!
//! The crate works with dense complex matrices and a Hermitian positive
//! definite matrix `B` defining `<x, y>_B = y^H B x`. It provides B-adjoint
//! calculus, tests for B-normality, coarse-grid projections and their
//! B-orthogonality, symmetrized smoothers, constructions of optimal
//! interpolation/restriction pairs, and a harness that checks all of it on a
//! given problem and writes a machine-readable report.

pub mod bnormal;
pub mod bspace;
pub mod coarse;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod random;
pub mod smoother;
pub mod tolerance;
pub mod twogrid;

pub use bspace::{HpdMatrix, Verdict};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use tolerance::ToleranceProfile;
