//! B-normality: eigenstructure with grouped eigenvalues, the admissible set
//! of inner products `B = (W D W^H)^-1` for a diagonalizable matrix, and
//! independent numerical forms of the equivalent characterizations.

use std::ops::Range;

use faer::{c64, Mat, MatRef};
use rand::Rng;

use crate::bspace::{self, HpdMatrix, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{self, identity, re, ComplexMatrix};
use crate::random::{self, hpd_block};
use crate::tolerance::ToleranceProfile;

/// Shift added to every random HPD block of `D`.
pub const BLOCK_SHIFT: f64 = 1e-3;

/// Eigendecomposition `A W = W diag(lambdas)` with unit-norm columns and equal
/// eigenvalues gathered into contiguous groups.
#[derive(Clone, Debug)]
pub struct EigenStructure {
    pub w: ComplexMatrix,
    pub lambdas: Vec<c64>,
    pub groups: Vec<Range<usize>>,
    /// 2-norm condition number of `w`.
    pub cond_w: f64,
}

impl EigenStructure {
    /// Builds the structure from explicitly known eigenvectors and eigenvalues.
    /// Columns are normalized and permuted so that groups are contiguous.
    pub fn from_parts(w: ComplexMatrix, lambdas: Vec<c64>, tol: &ToleranceProfile) -> Result<Self> {
        let n = linalg::require_square(w.as_ref(), "eigenvector matrix")?;
        if lambdas.len() != n {
            return Err(Error::dims("eigenvalues", n, lambdas.len()));
        }
        let clusters = cluster(&lambdas, tol.group);
        let order: Vec<usize> = clusters.iter().flatten().copied().collect();
        let mut w = Mat::from_fn(n, n, |i, j| w[(i, order[j])]);
        linalg::normalize_columns(&mut w);
        let lambdas: Vec<c64> = order.iter().map(|&k| lambdas[k]).collect();
        let mut groups = Vec::with_capacity(clusters.len());
        let mut start = 0;
        for c in &clusters {
            groups.push(start..start + c.len());
            start += c.len();
        }
        let s = linalg::singular_values(w.as_ref())?;
        let cond_w = if s[n - 1] > 0.0 { s[0] / s[n - 1] } else { f64::INFINITY };
        Ok(Self {
            w,
            lambdas,
            groups,
            cond_w,
        })
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// One eigenvalue per group (the group mean).
    pub fn representatives(&self) -> Vec<c64> {
        self.groups
            .iter()
            .map(|g| self.lambdas[g.clone()].iter().sum::<c64>() / g.len() as f64)
            .collect()
    }

    /// Group index of every column.
    pub fn group_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (k, g) in self.groups.iter().enumerate() {
            for i in g.clone() {
                out[i] = k;
            }
        }
        out
    }
}

/// Single-linkage clustering: `i ~ j` when `|l_i - l_j| <= tol (1 + max |l|)`.
/// Clusters are returned in order of their first member.
fn cluster(lambdas: &[c64], tol: f64) -> Vec<Vec<usize>> {
    let n = lambdas.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + lambdas[i].norm().max(lambdas[j].norm());
            if (lambdas[i] - lambdas[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[root_slot[r]].push(i);
    }
    clusters
}

/// Eigendecomposition of `a` with grouped eigenvalues.
///
/// Fails with [`Error::Defective`] when the eigenvector matrix is too
/// ill-conditioned (`cond_w > kappa_max`) to be trusted as a basis.
pub fn diagonalize(a: MatRef<'_, c64>, tol: &ToleranceProfile) -> Result<EigenStructure> {
    let n = linalg::require_square(a, "diagonalize")?;
    linalg::require_finite(a, "diagonalize")?;
    let evd = a
        .eigen()
        .map_err(|e| Error::Decomposition(format!("eigensolver: {e:?}")))?;
    let lambdas: Vec<c64> = evd.S().column_vector().iter().copied().collect();
    let es = EigenStructure::from_parts(evd.U().to_owned(), lambdas, tol)?;
    if !(es.cond_w <= tol.kappa_max) {
        return Err(Error::Defective { cond: es.cond_w });
    }
    let lam = linalg::diag(&es.lambdas);
    let residual = linalg::fro((a * &es.w - &es.w * lam).as_ref());
    let scale = linalg::fro(a) * (n as f64).sqrt();
    if residual > tol.eig * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Decomposition(format!(
            "eigendecomposition residual {residual:.3e} too large"
        )));
    }
    Ok(es)
}

/// A member of the admissible set: `B = (W D W^H)^-1` with `D` HPD and
/// block diagonal along the eigenvalue groups of `base`.
#[derive(Clone, Debug)]
pub struct AdmissibleB {
    pub base: EigenStructure,
    pub d: ComplexMatrix,
    pub b: HpdMatrix,
    /// `||B (W D W^H) - I||_F`.
    pub recon_residual: f64,
}

/// Frobenius mass of `m` outside the diagonal blocks given by `groups`.
pub fn off_block_mass(m: MatRef<'_, c64>, groups: &[Range<usize>]) -> f64 {
    let mut label = vec![0; m.nrows()];
    for (k, g) in groups.iter().enumerate() {
        for i in g.clone() {
            label[i] = k;
        }
    }
    let mut sum = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if label[i] != label[j] {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Builds `B = W^{-H} D^{-1} W^{-1}` from a given block-diagonal HPD `D`.
pub fn admissible_b_from_d(
    base: EigenStructure,
    d: ComplexMatrix,
    tol: &ToleranceProfile,
) -> Result<AdmissibleB> {
    let n = base.n();
    linalg::require_shape(d.as_ref(), n, n, "block matrix D")?;
    let off = off_block_mass(d.as_ref(), &base.groups);
    if off > tol.eq * linalg::fro(d.as_ref()) {
        return Err(Error::InvalidConfig(format!(
            "D is not block diagonal along the eigenvalue groups (off-block mass {off:.3e})"
        )));
    }
    // Validates D as HPD.
    HpdMatrix::new(d.clone(), tol)?;
    let w_inv = linalg::inverse(base.w.as_ref());
    let d_inv = linalg::inverse(d.as_ref());
    let b = linalg::hermitian_part((w_inv.adjoint() * d_inv * &w_inv).as_ref());
    let b = HpdMatrix::new(b, tol)?;
    let c = &base.w * &d * base.w.adjoint();
    let recon_residual = linalg::fro((b.matrix() * c - identity(n)).as_ref());
    Ok(AdmissibleB {
        base,
        d,
        b,
        recon_residual,
    })
}

/// Random block-diagonal `D` along `groups`, each block `G G^H + 1e-3 I`.
pub fn sample_block_diagonal<R: Rng + ?Sized>(rng: &mut R, groups: &[Range<usize>]) -> ComplexMatrix {
    let n = groups.last().map_or(0, |g| g.end);
    let mut d = Mat::zeros(n, n);
    for g in groups {
        let block = hpd_block(rng, g.len(), BLOCK_SHIFT);
        for (a, i) in g.clone().enumerate() {
            for (b, j) in g.clone().enumerate() {
                d[(i, j)] = block[(a, b)];
            }
        }
    }
    d
}

/// Draws a random member of the admissible set for `es`.
pub fn sample_admissible_b(es: &EigenStructure, seed: u64, tol: &ToleranceProfile) -> Result<AdmissibleB> {
    let mut rng = random::rng(seed);
    let d = sample_block_diagonal(&mut rng, &es.groups);
    admissible_b_from_d(es.clone(), d, tol)
}

/// `A = U diag(lambdas) U^-1` with `U^H B U = I`.
#[derive(Clone, Debug)]
pub struct BUnitaryDiagonalization {
    pub u: ComplexMatrix,
    pub lambdas: Vec<c64>,
    /// Largest of the unitarity and reconstruction residuals.
    pub residual: f64,
}

/// B-unitary diagonalization through the Euclidean image `T = B^{1/2} A B^{-1/2}`:
/// eigenvectors of `T` are orthonormalized within each eigenvalue group, and the
/// result is accepted only if the basis is unitary and reconstructs `T` to `tol`.
pub fn b_unitary_diagonalize(
    a: MatRef<'_, c64>,
    b: &HpdMatrix,
    profile: &ToleranceProfile,
    tol: f64,
) -> Result<BUnitaryDiagonalization> {
    linalg::require_shape(a, b.n(), b.n(), "b_unitary_diagonalize")?;
    let n = b.n();
    let t = b.to_euclidean(a);
    let evd = t
        .eigen()
        .map_err(|e| Error::Decomposition(format!("eigensolver: {e:?}")))?;
    let lambdas: Vec<c64> = evd.S().column_vector().iter().copied().collect();
    let es = EigenStructure::from_parts(evd.U().to_owned(), lambdas, profile)?;

    let mut q = Mat::<c64>::zeros(n, n);
    for g in &es.groups {
        let basis = linalg::range_basis(es.w.subcols(g.start, g.len()), profile.rank)?;
        if basis.ncols() < g.len() {
            // Eigenvectors of a repeated eigenvalue are not independent: a Jordan block.
            return Err(Error::NotBNormal {
                residual: f64::INFINITY,
            });
        }
        q.subcols_mut(g.start, g.len()).copy_from(basis.as_ref());
    }
    let unitarity = linalg::fro((q.adjoint() * &q - identity(n)).as_ref()) / (n as f64).sqrt();
    let recon = linalg::fro((&q * linalg::diag(&es.lambdas) * q.adjoint() - &t).as_ref())
        / linalg::fro(t.as_ref()).max(f64::MIN_POSITIVE);
    let residual = unitarity.max(recon);
    if !(residual <= tol) {
        return Err(Error::NotBNormal { residual });
    }
    Ok(BUnitaryDiagonalization {
        u: b.inv_sqrt() * q,
        lambdas: es.lambdas,
        residual,
    })
}

/// Newton coefficients of the polynomial interpolating `f(z) = conj(z)` at `nodes`.
pub fn conjugate_interpolant(nodes: &[c64]) -> Vec<c64> {
    let mut c: Vec<c64> = nodes.iter().map(|z| z.conj()).collect();
    for j in 1..nodes.len() {
        for i in (j..nodes.len()).rev() {
            c[i] = (c[i] - c[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    c
}

/// Evaluates the Newton-form polynomial at a matrix argument (Horner scheme).
pub fn newton_eval_matrix(a: MatRef<'_, c64>, nodes: &[c64], coeffs: &[c64]) -> ComplexMatrix {
    let n = a.nrows();
    let Some(&last) = coeffs.last() else {
        return Mat::zeros(n, n);
    };
    let mut p = linalg::scale(identity(n).as_ref(), last);
    for k in (0..coeffs.len() - 1).rev() {
        let shifted = a - linalg::scale(identity(n).as_ref(), nodes[k]);
        p = shifted * p + linalg::scale(identity(n).as_ref(), coeffs[k]);
    }
    p
}

/// Whether `A^+ = p(A)` for the interpolant `p(lambda) = conj(lambda)` on the
/// distinct eigenvalues; residual `||p(A) - A^+||_F / ||A||_F`.
pub fn adjoint_polynomial_check(
    a: MatRef<'_, c64>,
    b: &HpdMatrix,
    profile: &ToleranceProfile,
    tol: f64,
) -> Result<Verdict> {
    let es = diagonalize(a, profile)?;
    let nodes = es.representatives();
    let coeffs = conjugate_interpolant(&nodes);
    let p = newton_eval_matrix(a, &nodes, &coeffs);
    let adj = bspace::b_adjoint(a, b)?;
    let scale = linalg::fro(a).max(f64::MIN_POSITIVE);
    Ok(Verdict::from_residual(
        linalg::fro((p - adj).as_ref()) / scale,
        tol,
    ))
}

/// Whether every eigenvector of `A` is an eigenvector of `A^+` for the
/// conjugate eigenvalue. Measured in Euclidean coordinates on unit vectors
/// `y = B^{1/2} w`: `||T^H Y - Y conj(Lambda)||_F / (||T||_F sqrt(n))`.
pub fn eigenvector_sharing_check(
    a: MatRef<'_, c64>,
    b: &HpdMatrix,
    profile: &ToleranceProfile,
    tol: f64,
) -> Result<Verdict> {
    let es = diagonalize(a, profile)?;
    let n = es.n();
    let t = b.to_euclidean(a);
    let mut y = b.sqrt() * &es.w;
    linalg::normalize_columns(&mut y);
    let conj: Vec<c64> = es.lambdas.iter().map(|z| z.conj()).collect();
    let residual = linalg::fro((t.adjoint() * &y - &y * linalg::diag(&conj)).as_ref());
    let scale = linalg::fro(t.as_ref()) * (n as f64).sqrt();
    Ok(Verdict::from_residual(
        residual / scale.max(f64::MIN_POSITIVE),
        tol,
    ))
}

/// Whether `B^-1 = W D W^H` with `D` block diagonal along the eigenvalue
/// groups; residual is the relative off-block mass of `W^H B W = D^-1`.
pub fn structure_check(
    a: MatRef<'_, c64>,
    b: &HpdMatrix,
    profile: &ToleranceProfile,
    tol: f64,
) -> Result<Verdict> {
    let es = diagonalize(a, profile)?;
    let gram = es.w.adjoint() * b.matrix() * &es.w;
    let residual = off_block_mass(gram.as_ref(), &es.groups) / linalg::fro(gram.as_ref());
    Ok(Verdict::from_residual(residual, tol))
}

/// Verdicts of the five equivalent characterizations of B-normality.
#[derive(Clone, Copy, Debug)]
pub struct Characterizations {
    pub commutator: Verdict,
    pub polynomial: Verdict,
    pub diagonalization: Verdict,
    pub eigenvectors: Verdict,
    pub structure: Verdict,
}

impl Characterizations {
    pub fn verdicts(&self) -> [bool; 5] {
        [
            self.commutator.holds,
            self.polynomial.holds,
            self.diagonalization.holds,
            self.eigenvectors.holds,
            self.structure.holds,
        ]
    }

    pub fn agree(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&x| x == v[0])
    }
}

/// Evaluates all five characterizations. The commutator uses `tol.eq`; the
/// eigen-based forms use `tol.eig`. A defective matrix fails every
/// eigen-based form (it is B-normal for no `B`).
pub fn characterize(a: MatRef<'_, c64>, b: &HpdMatrix, tol: &ToleranceProfile) -> Result<Characterizations> {
    let failed = Verdict {
        holds: false,
        residual: f64::INFINITY,
    };
    let soften = |r: Result<Verdict>| match r {
        Ok(v) => Ok(v),
        Err(Error::Defective { .. }) => Ok(failed),
        Err(e) => Err(e),
    };
    let diagonalization = match b_unitary_diagonalize(a, b, tol, tol.eig) {
        Ok(d) => Verdict {
            holds: true,
            residual: d.residual,
        },
        Err(Error::NotBNormal { residual }) => Verdict {
            holds: false,
            residual,
        },
        Err(e) => return Err(e),
    };
    Ok(Characterizations {
        commutator: bspace::is_b_normal(a, b, tol.eq)?,
        polynomial: soften(adjoint_polynomial_check(a, b, tol, tol.eig))?,
        diagonalization,
        eigenvectors: soften(eigenvector_sharing_check(a, b, tol, tol.eig))?,
        structure: soften(structure_check(a, b, tol, tol.eig))?,
    })
}

/// `W diag(lambdas) W^-1` for a random `W` within `spread` of the identity.
pub fn matrix_with_spectrum<R: Rng + ?Sized>(rng: &mut R, lambdas: &[c64], spread: f64) -> (ComplexMatrix, ComplexMatrix) {
    let n = lambdas.len();
    let w = random::near_identity(rng, n, spread);
    let a = linalg::solve(
        w.transpose().to_owned().as_ref(),
        (linalg::diag(lambdas) * w.transpose()).as_ref(),
    )
    .transpose()
    .to_owned();
    (a, w)
}

/// Random eigenvalues in the square `[-2, 2] + [-2, 2] i`, pairwise at least
/// `sep` apart (rejection sampling).
pub fn separated_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, sep: f64, real: bool) -> Vec<c64> {
    let mut out: Vec<c64> = Vec::with_capacity(n);
    while out.len() < n {
        let im = if real { 0.0 } else { rng.gen_range(-2.0..2.0) };
        let z = c64::new(rng.gen_range(-2.0..2.0), im);
        if out.iter().all(|w| (w - z).norm() >= sep) {
            out.push(z);
        }
    }
    out
}

/// Real-valued helper for building spectra in examples and tests.
pub fn real_spectrum(values: &[f64]) -> Vec<c64> {
    values.iter().map(|&x| re(x)).collect()
}
