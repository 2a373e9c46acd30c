//! Geometry of a B-inner product `<x, y>_B = y^H B x` for Hermitian positive
//! definite `B`: vector and operator norms, the B-adjoint `B^-1 A^H B`, and
//! predicates for B-unitary, B-normal and B-orthogonal (B-self-adjoint)
//! matrices.

use faer::linalg::solvers::Llt;
use faer::prelude::Solve;
use faer::{c64, ColRef, Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::linalg::{self, identity, ComplexMatrix};
use crate::tolerance::ToleranceProfile;

/// A certified Hermitian positive definite matrix with its eigendecomposition
/// and square-root factors, computed once at construction.
#[derive(Clone, Debug)]
pub struct HpdMatrix {
    b: ComplexMatrix,
    eigvecs: ComplexMatrix,
    eigvals: Vec<f64>,
    sqrt: ComplexMatrix,
    inv_sqrt: ComplexMatrix,
    llt: Llt<c64>,
}

impl HpdMatrix {
    /// Validates `b` and builds its factors.
    ///
    /// `b` is rejected when it is not Hermitian to `tol.herm`, when its
    /// smallest eigenvalue is not above `tol.rank` times the largest, or when
    /// the square-root factors fail to reconstruct `b` to `tol.recon`.
    pub fn new(b: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let n = linalg::require_square(b.as_ref(), "HPD matrix")?;
        linalg::require_finite(b.as_ref(), "HPD matrix")?;

        let norm = linalg::fro(b.as_ref());
        let asym = linalg::fro((&b - b.adjoint()).as_ref());
        let residual = if norm > 0.0 { asym / norm } else { asym };
        if residual > tol.herm {
            return Err(Error::NotHermitian {
                residual,
                tol: tol.herm,
            });
        }
        let b = linalg::hermitian_part(b.as_ref());

        let evd = b
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Decomposition(format!("hermitian eigensolver: {e:?}")))?;
        let eigvals: Vec<f64> = evd.S().column_vector().iter().map(|z| z.re).collect();
        let eigvecs = evd.U().to_owned();
        let (min_eig, max_eig) = (eigvals[0], eigvals[n - 1]);
        if !(max_eig > 0.0) || min_eig <= tol.rank * max_eig {
            return Err(Error::NotHpd { min_eig, max_eig });
        }

        let root: Vec<c64> = eigvals.iter().map(|&d| c64::new(d.sqrt(), 0.0)).collect();
        let inv_root: Vec<c64> = eigvals
            .iter()
            .map(|&d| c64::new(1.0 / d.sqrt(), 0.0))
            .collect();
        let sqrt = &eigvecs * linalg::diag(&root) * eigvecs.adjoint();
        let inv_sqrt = &eigvecs * linalg::diag(&inv_root) * eigvecs.adjoint();

        let square = linalg::rel_residual((&sqrt * &sqrt).as_ref(), b.as_ref());
        // Backward-error scaling: the inverse factor carries sqrt(cond) amplification.
        let cond_root = (max_eig / min_eig).sqrt();
        let inverse = linalg::fro((&sqrt * &inv_sqrt - identity(n)).as_ref())
            / ((n as f64).sqrt() * cond_root);
        let recon = square.max(inverse);
        if recon > tol.recon {
            return Err(Error::ReconstructionFailed { residual: recon });
        }

        let llt = b
            .llt(Side::Lower)
            .map_err(|_| Error::NotHpd { min_eig, max_eig })?;

        Ok(Self {
            b,
            eigvecs,
            eigvals,
            sqrt,
            inv_sqrt,
            llt,
        })
    }

    /// The identity inner product.
    pub fn identity(n: usize) -> Self {
        Self::new(identity(n), &ToleranceProfile::default())
            .expect("identity is trivially HPD")
    }

    pub fn n(&self) -> usize {
        self.b.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.b.as_ref()
    }

    /// `B^{1/2}`.
    pub fn sqrt(&self) -> MatRef<'_, c64> {
        self.sqrt.as_ref()
    }

    /// `B^{-1/2}`.
    pub fn inv_sqrt(&self) -> MatRef<'_, c64> {
        self.inv_sqrt.as_ref()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn eigenvectors(&self) -> MatRef<'_, c64> {
        self.eigvecs.as_ref()
    }

    pub fn condition(&self) -> f64 {
        self.eigvals[self.eigvals.len() - 1] / self.eigvals[0]
    }

    /// `B^{-1} rhs` by Cholesky solve.
    pub fn solve(&self, rhs: MatRef<'_, c64>) -> ComplexMatrix {
        self.llt.solve(rhs)
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve(identity(self.n()).as_ref())
    }

    /// `B^{1/2} C B^{-1/2}`: the image of `C` in Euclidean coordinates, where
    /// B-norms become spectral norms and B-adjoints become conjugate transposes.
    pub fn to_euclidean(&self, c: MatRef<'_, c64>) -> ComplexMatrix {
        &self.sqrt * c * &self.inv_sqrt
    }

    fn require_operator(&self, c: MatRef<'_, c64>, context: &'static str) -> Result<()> {
        linalg::require_shape(c, self.n(), self.n(), context)
    }
}

/// Outcome of a numerical predicate: the verdict and the residual it was based on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub residual: f64,
}

impl Verdict {
    pub fn from_residual(residual: f64, threshold: f64) -> Self {
        Self {
            holds: residual <= threshold,
            residual,
        }
    }
}

/// `<x, y>_B = y^H B x`.
pub fn b_inner(x: ColRef<'_, c64>, y: ColRef<'_, c64>, b: &HpdMatrix) -> Result<c64> {
    if x.nrows() != b.n() || y.nrows() != b.n() {
        return Err(Error::dims(
            "b_inner",
            b.n(),
            format!("{} and {}", x.nrows(), y.nrows()),
        ));
    }
    Ok(y.adjoint() * b.matrix() * x)
}

/// `||x||_B = ||B^{1/2} x||_2`.
pub fn b_vec_norm(x: ColRef<'_, c64>, b: &HpdMatrix) -> Result<f64> {
    if x.nrows() != b.n() {
        return Err(Error::dims("b_vec_norm", b.n(), x.nrows()));
    }
    Ok((b.sqrt() * x).norm_l2())
}

/// Operator norm induced by the B-norm: the largest singular value of
/// `B^{1/2} C B^{-1/2}`.
pub fn b_mat_norm(c: MatRef<'_, c64>, b: &HpdMatrix) -> Result<f64> {
    b.require_operator(c, "b_mat_norm")?;
    linalg::spectral_norm(b.to_euclidean(c).as_ref())
}

/// `A^+ = B^{-1} A^H B`, via a Cholesky solve rather than an explicit inverse.
pub fn b_adjoint(a: MatRef<'_, c64>, b: &HpdMatrix) -> Result<ComplexMatrix> {
    b.require_operator(a, "b_adjoint")?;
    Ok(b.solve((a.adjoint() * b.matrix()).as_ref()))
}

/// `U^H B U = I_k` for an `n x k` matrix `U`; holds iff the Frobenius
/// residual is at most `tol * k`.
pub fn is_b_unitary(u: MatRef<'_, c64>, b: &HpdMatrix, tol: f64) -> Result<Verdict> {
    if u.nrows() != b.n() || u.ncols() > b.n() || u.ncols() == 0 {
        return Err(Error::dims(
            "is_b_unitary",
            format!("{}xk with 1 <= k <= {}", b.n(), b.n()),
            format!("{}x{}", u.nrows(), u.ncols()),
        ));
    }
    let k = u.ncols();
    let gram = u.adjoint() * b.matrix() * u;
    let residual = linalg::fro((gram - identity(k)).as_ref());
    Ok(Verdict::from_residual(residual, tol * k as f64))
}

/// B-normality `A A^+ = A^+ A`.
///
/// The commutator is measured in Euclidean coordinates: with
/// `T = B^{1/2} A B^{-1/2}` the residual is `||T T^H - T^H T||_F / ||T||_F^2`,
/// which is scale invariant in `A` and does not amplify the conditioning of `B`
/// the way forming `A^+` explicitly would.
pub fn is_b_normal(a: MatRef<'_, c64>, b: &HpdMatrix, tol: f64) -> Result<Verdict> {
    b.require_operator(a, "is_b_normal")?;
    let t = b.to_euclidean(a);
    let scale = linalg::fro(t.as_ref()).powi(2);
    if scale == 0.0 {
        return Ok(Verdict::from_residual(0.0, tol));
    }
    let commutator = &t * t.adjoint() - t.adjoint() * &t;
    Ok(Verdict::from_residual(
        linalg::fro(commutator.as_ref()) / scale,
        tol,
    ))
}

/// B-orthogonality `A^+ = A`; residual `||A^+ - A||_F / ||A||_F`.
pub fn is_b_orthogonal_matrix(a: MatRef<'_, c64>, b: &HpdMatrix, tol: f64) -> Result<Verdict> {
    let adj = b_adjoint(a, b)?;
    Ok(Verdict::from_residual(
        linalg::rel_residual(adj.as_ref(), a),
        tol,
    ))
}

/// The equivalent form `A^H B = B A`; residual `||A^H B - B A||_F / (||B||_F ||A||_F)`.
pub fn b_orthogonality_gram_residual(a: MatRef<'_, c64>, b: &HpdMatrix) -> Result<f64> {
    b.require_operator(a, "b_orthogonality_gram_residual")?;
    let lhs = a.adjoint() * b.matrix();
    let rhs = b.matrix() * a;
    let denom = linalg::fro(b.matrix()) * linalg::fro(a);
    let diff = linalg::fro((lhs - rhs).as_ref());
    Ok(if denom > 0.0 { diff / denom } else { diff })
}

/// Largest eigenvalue of a matrix known to have a real spectrum (e.g. `A^+ A`).
pub fn lambda_max_real(m: MatRef<'_, c64>) -> Result<f64> {
    Ok(linalg::eigenvalues(m)?
        .into_iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Builds `Mat` from a slice of columns; convenience for small examples.
pub fn from_columns(cols: &[Vec<c64>]) -> ComplexMatrix {
    let n = cols.first().map_or(0, Vec::len);
    Mat::from_fn(n, cols.len(), |i, j| cols[j][i])
}
