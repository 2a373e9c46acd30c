//! Problem specifications and loading.

use std::path::{Path, PathBuf};

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::builtin::{self, BuiltinExample};
use super::mtx;
use crate::bnormal;
use crate::bspace::HpdMatrix;
use crate::coarse;
use crate::error::{Error, Result};
use crate::linalg::{self, re, ComplexMatrix};
use crate::smoother;
use crate::tolerance::ToleranceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Central,
    Upwind,
}

/// Where `A` (and possibly `M^-1`, `B`) come from. Exactly one per spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Builtin(u8),
    MatrixMarket {
        a: PathBuf,
        #[serde(default)]
        m_inv: Option<PathBuf>,
        #[serde(default)]
        b: Option<PathBuf>,
    },
    ConvectionDiffusion {
        n: usize,
        beta: f64,
        scheme: Scheme,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BMode {
    /// The `B` carried by the source (builtin or a file).
    Explicit,
    Identity,
    /// `B = A^H A`.
    Aha,
    /// `B = M`, which must be HPD.
    M,
    /// `B = Q A = V Sigma V^H` with `Q = V U^H` from `A = U Sigma V^H`.
    Qa,
    /// A random element of the admissible set of `M^-1 A`.
    SampledAdmissible { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", deny_unknown_fields)]
pub enum SmootherRule {
    /// `M^-1 = omega diag(A)^-1`.
    Jacobi {
        #[serde(default)]
        omega: Option<f64>,
    },
    /// `M^-1 = omega I`.
    Richardson {
        #[serde(default)]
        omega: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub source: Source,
    #[serde(default)]
    pub nc: Option<usize>,
    #[serde(default)]
    pub nu1: Option<usize>,
    #[serde(default)]
    pub nu2: Option<usize>,
    #[serde(default)]
    pub b_mode: Option<BMode>,
    /// Used when the source supplies no `M^-1`.
    #[serde(default)]
    pub smoother: Option<SmootherRule>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub tolerances: ToleranceProfile,
}

fn default_seed() -> u64 {
    42
}

fn default_trials() -> usize {
    200
}

impl ProblemSpec {
    pub fn builtin(id: u8) -> Self {
        Self::from_source(Source::Builtin(id))
    }

    pub fn from_source(source: Source) -> Self {
        Self {
            source,
            nc: None,
            nu1: None,
            nu2: None,
            b_mode: None,
            smoother: None,
            seed: default_seed(),
            trials: default_trials(),
            tolerances: ToleranceProfile::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a JSON spec; relative matrix paths resolve against the spec's
    /// directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut spec = Self::from_json(&std::fs::read_to_string(path)?)?;
        if let (Source::MatrixMarket { a, m_inv, b }, Some(dir)) = (&mut spec.source, path.parent()) {
            let fix = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            };
            fix(a);
            m_inv.as_mut().map(fix);
            b.as_mut().map(fix);
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn describe_source(&self) -> String {
        match &self.source {
            Source::Builtin(id) => format!("builtin-example-{id}"),
            Source::MatrixMarket { a, .. } => format!("matrix-market:{}", a.display()),
            Source::ConvectionDiffusion { n, beta, scheme } => {
                format!("convection-diffusion(n={n}, beta={beta}, scheme={scheme:?})").to_lowercase()
            }
        }
    }
}

/// A validated problem ready for verification.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub a: ComplexMatrix,
    pub m_inv: ComplexMatrix,
    pub b: HpdMatrix,
    pub nc: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub b_mode: BMode,
    pub builtin: Option<BuiltinExample>,
    pub tol: ToleranceProfile,
}

impl LoadedProblem {
    pub fn n(&self) -> usize {
        self.a.nrows()
    }
}

/// 1D `-u'' + beta u'` on `(0, 1)` with homogeneous Dirichlet boundaries and
/// `n` interior points, `h = 1/(n+1)`.
pub fn convection_diffusion(n: usize, beta: f64, scheme: Scheme) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("grid size n = {n} must be at least 2")));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidConfig(format!("Peclet parameter beta = {beta} must be finite")));
    }
    let h = 1.0 / (n + 1) as f64;
    let d = 1.0 / (h * h);
    let (lower, diag, upper) = match scheme {
        Scheme::Central => (-d - beta / (2.0 * h), 2.0 * d, -d + beta / (2.0 * h)),
        Scheme::Upwind if beta >= 0.0 => (-d - beta / h, 2.0 * d + beta / h, -d),
        Scheme::Upwind => (-d, 2.0 * d - beta / h, -d + beta / h),
    };
    let a = Mat::from_fn(n, n, |i, j| {
        re(match j as isize - i as isize {
            -1 => lower,
            0 => diag,
            1 => upper,
            _ => 0.0,
        })
    });
    coarse::require_nonsingular(a.as_ref(), &ToleranceProfile::default())?;
    Ok(a)
}

pub fn smoother_from_rule(a: &ComplexMatrix, rule: &SmootherRule) -> Result<ComplexMatrix> {
    match *rule {
        SmootherRule::Jacobi { omega } => {
            let omega = match omega {
                Some(w) => w,
                None => smoother::default_jacobi_omega(a.as_ref())?,
            };
            smoother::jacobi_smoother(a.as_ref(), omega)
        }
        SmootherRule::Richardson { omega } => {
            let omega = omega.unwrap_or_else(|| smoother::default_richardson_omega(a.as_ref()));
            Ok(smoother::richardson_smoother(a.nrows(), omega))
        }
    }
}

/// `Q = V U^H` from the SVD `A = U Sigma V^H`; `Q A = V Sigma V^H` is HPD for
/// nonsingular `A`.
pub fn polar_factor(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let svd = a
        .svd()
        .map_err(|e| Error::Decomposition(format!("svd: {e:?}")))?;
    Ok(svd.V() * svd.U().adjoint())
}

pub fn b_from_mode(
    mode: &BMode,
    a: &ComplexMatrix,
    m_inv: &ComplexMatrix,
    explicit: Option<ComplexMatrix>,
    tol: &ToleranceProfile,
) -> Result<HpdMatrix> {
    let b = match mode {
        BMode::Explicit => explicit.ok_or_else(|| {
            Error::InvalidConfig("b_mode `explicit` requires a B matrix from the source".into())
        })?,
        BMode::Identity => linalg::identity(a.nrows()),
        BMode::Aha => a.adjoint() * a,
        BMode::M => linalg::inverse(m_inv.as_ref()),
        BMode::Qa => {
            coarse::require_nonsingular(a.as_ref(), tol)?;
            polar_factor(a)? * a
        }
        BMode::SampledAdmissible { seed } => {
            let k = m_inv * a;
            let es = bnormal::diagonalize(k.as_ref(), tol)?;
            return Ok(bnormal::sample_admissible_b(&es, *seed, tol)?.b);
        }
    };
    // Products such as `A^H A` are Hermitian only up to rounding.
    let b = if matches!(mode, BMode::Aha | BMode::Qa) {
        linalg::hermitian_part(b.as_ref())
    } else {
        b
    };
    HpdMatrix::new(b, tol)
}

pub fn load_problem(spec: &ProblemSpec) -> Result<LoadedProblem> {
    let tol = spec.tolerances;
    tol.validate()?;
    let default_rule = SmootherRule::Jacobi { omega: None };
    let rule = spec.smoother.as_ref().unwrap_or(&default_rule);

    let (a, m_inv, explicit_b, builtin, defaults) = match &spec.source {
        Source::Builtin(id) => {
            let ex = builtin::builtin(*id)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown builtin example {id}; expected 1, 2 or 3")))?;
            let m_inv = match &spec.smoother {
                Some(rule) => smoother_from_rule(&ex.a, rule)?,
                None => ex.m_inv.clone(),
            };
            let defaults = (Some(ex.nc), ex.nu1, ex.nu2, BMode::Explicit);
            (ex.a.clone(), m_inv, Some(ex.b.clone()), Some(ex), defaults)
        }
        Source::MatrixMarket { a, m_inv, b } => {
            let a = mtx::read_path(a)?;
            let m_inv = match m_inv {
                Some(p) => mtx::read_path(p)?,
                None => smoother_from_rule(&a, rule)?,
            };
            let b = b.as_ref().map(mtx::read_path).transpose()?;
            let mode = if b.is_some() { BMode::Explicit } else { BMode::Identity };
            (a, m_inv, b, None, (None, 1, 1, mode))
        }
        Source::ConvectionDiffusion { n, beta, scheme } => {
            let a = convection_diffusion(*n, *beta, *scheme)?;
            let m_inv = smoother_from_rule(&a, rule)?;
            (a, m_inv, None, None, (None, 1, 1, BMode::Identity))
        }
    };

    let n = linalg::require_square(a.as_ref(), "system matrix A")?;
    linalg::require_shape(m_inv.as_ref(), n, n, "smoother M^-1")?;
    linalg::require_finite(a.as_ref(), "system matrix A")?;
    linalg::require_finite(m_inv.as_ref(), "smoother M^-1")?;
    if let Some(b) = &explicit_b {
        linalg::require_shape(b.as_ref(), n, n, "B")?;
    }
    let b_mode = spec.b_mode.clone().unwrap_or(defaults.3);
    let b = b_from_mode(&b_mode, &a, &m_inv, explicit_b, &tol)?;

    let nc = spec.nc.or(defaults.0).unwrap_or((n / 2).max(1));
    if nc == 0 || nc >= n {
        return Err(Error::InvalidConfig(format!(
            "coarse dimension n_c = {nc} must satisfy 1 <= n_c < n = {n}"
        )));
    }
    Ok(LoadedProblem {
        a,
        m_inv,
        b,
        nc,
        nu1: spec.nu1.unwrap_or(defaults.1),
        nu2: spec.nu2.unwrap_or(defaults.2),
        b_mode,
        builtin,
        tol,
    })
}
