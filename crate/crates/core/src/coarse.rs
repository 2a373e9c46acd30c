//! Coarse-grid correction `Pi_A(P, R) = P (R^H A P)^-1 R^H A`, the equivalent
//! conditions for its B-orthogonality, and the compatible transfer operators
//! `P* = B^-1 A^H R` and `R* = A^-H B P`.

use faer::{c64, MatRef};
use serde::Serialize;

use crate::bspace::{self, HpdMatrix, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{self, identity, ComplexMatrix};
use crate::tolerance::ToleranceProfile;

/// Interpolation `P` and restriction `R`, both `n x n_c` with full column rank.
#[derive(Clone, Debug)]
pub struct TransferPair {
    pub p: ComplexMatrix,
    pub r: ComplexMatrix,
}

impl TransferPair {
    pub fn new(p: ComplexMatrix, r: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let (n, nc) = (p.nrows(), p.ncols());
        if nc == 0 || nc >= n {
            return Err(Error::dims(
                "transfer pair",
                format!("1 <= n_c < n = {n}"),
                format!("n_c = {nc}"),
            ));
        }
        linalg::require_shape(r.as_ref(), n, nc, "restriction R")?;
        linalg::require_finite(p.as_ref(), "interpolation P")?;
        linalg::require_finite(r.as_ref(), "restriction R")?;
        for (what, m) in [("interpolation P", &p), ("restriction R", &r)] {
            let rank = linalg::rank(m.as_ref(), tol.rank)?;
            if rank != nc {
                return Err(Error::RankDeficient {
                    what,
                    rank,
                    expected: nc,
                });
            }
        }
        Ok(Self { p, r })
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn nc(&self) -> usize {
        self.p.ncols()
    }

    /// `A_c = R^H A P`, certified nonsingular.
    pub fn coarse_matrix(&self, a: MatRef<'_, c64>, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
        linalg::require_shape(a, self.n(), self.n(), "system matrix A")?;
        let ac = self.r.adjoint() * a * &self.p;
        let ratio = linalg::sigma_ratio(ac.as_ref())?;
        if !(ratio > tol.rank) {
            return Err(Error::SingularCoarseMatrix { ratio });
        }
        Ok(ac)
    }
}

/// A matrix certified idempotent.
#[derive(Clone, Debug)]
pub struct Projection {
    pub pi: ComplexMatrix,
}

impl Projection {
    pub fn new(pi: ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        linalg::require_square(pi.as_ref(), "projection")?;
        let residual = linalg::fro((&pi * &pi - &pi).as_ref());
        if residual > tol.eq * (1.0 + linalg::fro(pi.as_ref())) {
            return Err(Error::NotAProjection { residual });
        }
        Ok(Self { pi })
    }

    /// `I - Pi`.
    pub fn complement(&self) -> ComplexMatrix {
        identity(self.pi.nrows()) - &self.pi
    }
}

/// `Pi_A(P, R)`.
pub fn coarse_grid_projection(
    a: MatRef<'_, c64>,
    tp: &TransferPair,
    tol: &ToleranceProfile,
) -> Result<Projection> {
    let ac = tp.coarse_matrix(a, tol)?;
    let rha = tp.r.adjoint() * a;
    let pi = &tp.p * linalg::solve(ac.as_ref(), rha.as_ref());
    Projection::new(pi, tol)
}

/// `Pi_B(P, P) = P (P^H B P)^-1 P^H B`, the B-orthogonal projection onto `R(P)`.
pub fn b_orthogonal_projection(p: MatRef<'_, c64>, b: &HpdMatrix, tol: &ToleranceProfile) -> Result<Projection> {
    let tp = TransferPair::new(p.to_owned(), p.to_owned(), tol)?;
    coarse_grid_projection(b.matrix(), &tp, tol)
}

/// `||Pi||_B`, after checking that `Pi` is nontrivial and that
/// `||Pi||_B = ||I - Pi||_B >= 1`.
pub fn projection_b_norm(pi: &Projection, b: &HpdMatrix, tol: &ToleranceProfile) -> Result<f64> {
    let n = pi.pi.nrows();
    let complement = pi.complement();
    if linalg::fro(pi.pi.as_ref()) <= tol.eq || linalg::fro(complement.as_ref()) <= tol.eq * (n as f64).sqrt() {
        return Err(Error::TrivialProjection);
    }
    let norm = bspace::b_mat_norm(pi.pi.as_ref(), b)?;
    let other = bspace::b_mat_norm(complement.as_ref(), b)?;
    if (norm - other).abs() > tol.eq * norm.max(1.0) || norm < 1.0 - tol.eq {
        return Err(Error::ProjectionNormMismatch {
            norm,
            complement: other,
        });
    }
    Ok(norm)
}

/// `P* = B^-1 A^H R`.
pub fn p_star(a: MatRef<'_, c64>, r: MatRef<'_, c64>, b: &HpdMatrix, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    linalg::require_shape(a, b.n(), b.n(), "system matrix A")?;
    if r.nrows() != b.n() {
        return Err(Error::dims("restriction R", b.n(), r.nrows()));
    }
    let p = b.solve((a.adjoint() * r).as_ref());
    let rank = linalg::rank(p.as_ref(), tol.rank)?;
    if rank != r.ncols() {
        return Err(Error::RankDeficient {
            what: "P*",
            rank,
            expected: r.ncols(),
        });
    }
    Ok(p)
}

/// Certifies `A` as nonsingular by its singular-value ratio.
pub fn require_nonsingular(a: MatRef<'_, c64>, tol: &ToleranceProfile) -> Result<()> {
    let ratio = linalg::sigma_ratio(a)?;
    if !(ratio > tol.rank) {
        return Err(Error::NearSingularA { ratio });
    }
    Ok(())
}

/// `R* = A^-H B P`.
pub fn r_star(a: MatRef<'_, c64>, p: MatRef<'_, c64>, b: &HpdMatrix, tol: &ToleranceProfile) -> Result<ComplexMatrix> {
    linalg::require_shape(a, b.n(), b.n(), "system matrix A")?;
    if p.nrows() != b.n() {
        return Err(Error::dims("interpolation P", b.n(), p.nrows()));
    }
    require_nonsingular(a, tol)?;
    let r = linalg::solve(a.adjoint().to_owned().as_ref(), (b.matrix() * p).as_ref());
    let rank = linalg::rank(r.as_ref(), tol.rank)?;
    if rank != p.ncols() {
        return Err(Error::RankDeficient {
            what: "R*",
            rank,
            expected: p.ncols(),
        });
    }
    Ok(r)
}

/// The seven equivalent conditions for B-orthogonality of `Pi_A(P, R)`.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    /// `B Pi = Pi^H B`.
    pub gram_symmetry: VerdictRecord,
    /// `Pi^+ = Pi`, with `Pi^+` from [`bspace::b_adjoint`].
    pub self_adjoint: VerdictRecord,
    /// `R(Pi)` and `N(Pi)` are B-orthogonal (largest B-cosine between them).
    pub range_null_orthogonal: VerdictRecord,
    /// `||Pi||_B = ||I - Pi||_B = 1`.
    pub unit_norm: VerdictRecord,
    /// `R(B P) = R(A^H R)`.
    pub ranges_bp_ahr: VerdictRecord,
    /// `R(P) = R(B^-1 A^H R)`.
    pub ranges_p_pstar: VerdictRecord,
    /// `N(R^H A) = N(P^H B)`.
    pub null_spaces: VerdictRecord,
    pub norm: f64,
    pub complement_norm: f64,
}

/// Serializable form of a [`Verdict`].
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct VerdictRecord {
    pub holds: bool,
    pub residual: f64,
}

impl From<Verdict> for VerdictRecord {
    fn from(v: Verdict) -> Self {
        Self {
            holds: v.holds,
            residual: v.residual,
        }
    }
}

impl ProjectionReport {
    pub fn conditions(&self) -> [(&'static str, VerdictRecord); 7] {
        [
            ("gram_symmetry", self.gram_symmetry),
            ("self_adjoint", self.self_adjoint),
            ("range_null_orthogonal", self.range_null_orthogonal),
            ("unit_norm", self.unit_norm),
            ("ranges_bp_ahr", self.ranges_bp_ahr),
            ("ranges_p_pstar", self.ranges_p_pstar),
            ("null_spaces", self.null_spaces),
        ]
    }

    pub fn verdicts(&self) -> [bool; 7] {
        self.conditions().map(|(_, v)| v.holds)
    }

    pub fn agree(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&x| x == v[0])
    }
}

/// Evaluates all seven conditions independently of each other.
pub fn check_projection_b_orthogonality(
    a: MatRef<'_, c64>,
    tp: &TransferPair,
    b: &HpdMatrix,
    tol: &ToleranceProfile,
) -> Result<ProjectionReport> {
    let pi = coarse_grid_projection(a, tp, tol)?;
    let (n, nc) = (tp.n(), tp.nc());
    let p = tp.p.as_ref();
    let r = tp.r.as_ref();

    let gram = Verdict::from_residual(bspace::b_orthogonality_gram_residual(pi.pi.as_ref(), b)?, tol.eq);

    let adj = bspace::b_adjoint(pi.pi.as_ref(), b)?;
    let self_adjoint = Verdict::from_residual(linalg::rel_residual(adj.as_ref(), pi.pi.as_ref()), tol.eq);

    // Range and null space of Pi from one SVD with the known rank n_c; the
    // B-cosine is the spectral norm of the cross-Gram of B^{1/2}-images.
    let svd = pi
        .pi
        .svd()
        .map_err(|e| Error::Decomposition(format!("svd: {e:?}")))?;
    let range = svd.U().subcols(0, nc);
    let null = svd.V().subcols(nc, n - nc);
    let yr = linalg::range_basis((b.sqrt() * range).as_ref(), tol.rank)?;
    let yn = linalg::range_basis((b.sqrt() * null).as_ref(), tol.rank)?;
    let cosine = linalg::spectral_norm((yr.adjoint() * &yn).as_ref())?;
    let range_null = Verdict::from_residual(cosine, tol.angle);

    let norm = bspace::b_mat_norm(pi.pi.as_ref(), b)?;
    let complement_norm = bspace::b_mat_norm(pi.complement().as_ref(), b)?;
    let unit_norm = Verdict::from_residual((norm - 1.0).abs().max((complement_norm - 1.0).abs()), tol.eig);

    let ahr = a.adjoint() * r;
    let bp = b.matrix() * p;
    let ranges_bp_ahr = Verdict::from_residual(linalg::subspace_angle(bp.as_ref(), ahr.as_ref(), tol.rank)?, tol.angle);

    let pstar = b.solve(ahr.as_ref());
    let ranges_p_pstar = Verdict::from_residual(linalg::subspace_angle(p, pstar.as_ref(), tol.rank)?, tol.angle);

    let rha = r.adjoint() * a;
    let phb = p.adjoint() * b.matrix();
    let n1 = linalg::null_space(rha.as_ref(), tol.rank)?;
    let n2 = linalg::null_space(phb.as_ref(), tol.rank)?;
    let null_spaces = Verdict::from_residual(linalg::max_principal_angle(n1.as_ref(), n2.as_ref())?, tol.angle);

    Ok(ProjectionReport {
        gram_symmetry: gram.into(),
        self_adjoint: self_adjoint.into(),
        range_null_orthogonal: range_null.into(),
        unit_norm: unit_norm.into(),
        ranges_bp_ahr: ranges_bp_ahr.into(),
        ranges_p_pstar: ranges_p_pstar.into(),
        null_spaces: null_spaces.into(),
        norm,
        complement_norm,
    })
}
