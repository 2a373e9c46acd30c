//! Numerical thresholds shared by every predicate in the crate.
//!
//! All identities checked here hold exactly in exact arithmetic; in double
//! precision each "matrix equals matrix" test is a relative Frobenius
//! residual compared against one of these values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceProfile {
    /// Hermitian check: `||B - B^H||_F <= herm * ||B||_F`.
    pub herm: f64,
    /// Reconstruction of square-root factors.
    pub recon: f64,
    /// Relative matrix-equality residual.
    pub eq: f64,
    /// Eigenvalue / norm agreement.
    pub eig: f64,
    /// Rank cutoff on `sigma_min / sigma_max`.
    pub rank: f64,
    /// Relative distance under which two eigenvalues are merged into one group.
    pub group: f64,
    /// Eigenvector-matrix condition number above which a matrix counts as defective.
    pub kappa_max: f64,
    /// Largest principal angle (radians) for subspace equality.
    pub angle: f64,
    /// Absolute slack when certifying a sweep minimum against the optimum.
    pub opt: f64,
    /// Absolute slack on the spectral inclusion `sigma in (0, 1]`.
    pub spectrum: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            recon: 1e-12,
            eq: 1e-10,
            eig: 1e-8,
            rank: 1e-12,
            group: 1e-8,
            kappa_max: 1e12,
            angle: 1e-8,
            opt: 1e-8,
            spectrum: 1e-10,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("herm", self.herm),
            ("recon", self.recon),
            ("eq", self.eq),
            ("eig", self.eig),
            ("rank", self.rank),
            ("group", self.group),
            ("kappa_max", self.kappa_max),
            ("angle", self.angle),
            ("opt", self.opt),
            ("spectrum", self.spectrum),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance `{name}` must be finite and strictly positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}
