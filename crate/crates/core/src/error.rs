use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix contains non-finite entries ({context})")]
    NonFinite { context: &'static str },

    #[error("matrix is not Hermitian: relative residual {residual:.3e} exceeds {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not positive definite: eigenvalue range [{min_eig:.3e}, {max_eig:.3e}]")]
    NotHpd { min_eig: f64, max_eig: f64 },

    #[error("square-root factors fail reconstruction: residual {residual:.3e}")]
    ReconstructionFailed { residual: f64 },

    #[error("matrix is defective to working precision: eigenvector condition {cond:.3e}")]
    Defective { cond: f64 },

    #[error("matrix is not B-normal: residual {residual:.3e}")]
    NotBNormal { residual: f64 },

    #[error("coarse matrix R^H A P is singular: sigma_min/sigma_max = {ratio:.3e}")]
    SingularCoarseMatrix { ratio: f64 },

    #[error("{what} is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient {
        what: &'static str,
        rank: usize,
        expected: usize,
    },

    #[error("system matrix A is numerically singular: sigma_min/sigma_max = {ratio:.3e}")]
    NearSingularA { ratio: f64 },

    #[error("smoother M^-1 is numerically singular: sigma_min/sigma_max = {ratio:.3e}")]
    SingularSmoother { ratio: f64 },

    #[error("projection is trivial (zero or identity)")]
    TrivialProjection,

    #[error("matrix is not a projection: idempotence residual {residual:.3e}")]
    NotAProjection { residual: f64 },

    #[error("||Pi||_B = {norm} differs from ||I - Pi||_B = {complement}")]
    ProjectionNormMismatch { norm: f64, complement: f64 },

    #[error("coarse-grid projection is not B-orthogonal: residual {residual:.3e}")]
    ProjectionNotBOrthogonal { residual: f64 },

    #[error("smoothing assumption violated: ||I - M^-1 A||_B = {norm}")]
    SmoothingAssumptionViolated { norm: f64 },

    #[error(
        "eigenvalue ordering is ambiguous at the coarse boundary: |1 - lambda| = {left} vs {right}"
    )]
    OrderingAmbiguous { left: f64, right: f64 },

    #[error("spectral radius {rho} does not match the predicted norm {predicted}")]
    SpectralRadiusMismatch { rho: f64, predicted: f64 },

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
