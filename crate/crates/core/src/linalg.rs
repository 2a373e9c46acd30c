//! Dense complex helpers on top of `faer`.
//!
//! Everything in this crate works over `C`; real inputs are promoted on
//! construction.

use faer::prelude::Solve;
use faer::{c64, Col, Mat, MatRef};

use crate::error::{Error, Result};

/// Dense complex matrix; the carrier for A, M^-1, B, P, R, projections and error operators.
pub type ComplexMatrix = Mat<c64>;
/// Dense complex column vector.
pub type ComplexVector = Col<c64>;

#[inline]
pub fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// Builds a complex matrix from real rows.
pub fn from_real_rows<const N: usize>(rows: &[[f64; N]]) -> ComplexMatrix {
    Mat::from_fn(rows.len(), N, |i, j| re(rows[i][j]))
}

pub fn identity(n: usize) -> ComplexMatrix {
    Mat::identity(n, n)
}

pub fn diag(values: &[c64]) -> ComplexMatrix {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { c64::new(0.0, 0.0) })
}

pub fn scale(m: MatRef<'_, c64>, s: c64) -> ComplexMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn fro(m: MatRef<'_, c64>) -> f64 {
    m.norm_l2()
}

/// `||a - b||_F / ||b||_F`, falling back to the absolute residual when `b` vanishes.
pub fn rel_residual(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    let diff = fro((a - b).as_ref());
    let denom = fro(b);
    if denom > f64::MIN_POSITIVE {
        diff / denom
    } else {
        diff
    }
}

pub fn require_square(m: MatRef<'_, c64>, context: &'static str) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::dims(
            context,
            "nonempty square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m.nrows())
}

pub fn require_shape(
    m: MatRef<'_, c64>,
    rows: usize,
    cols: usize,
    context: &'static str,
) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::dims(
            context,
            format!("{rows}x{cols}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

pub fn require_finite(m: MatRef<'_, c64>, context: &'static str) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { context });
            }
        }
    }
    Ok(())
}

pub fn hermitian_part(m: MatRef<'_, c64>) -> ComplexMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    })
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values()
        .map_err(|e| Error::Decomposition(format!("svd: {e:?}")))
}

/// Largest singular value.
pub fn spectral_norm(m: MatRef<'_, c64>) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// `sigma_min / sigma_max` over the `min(rows, cols)` singular values.
pub fn sigma_ratio(m: MatRef<'_, c64>) -> Result<f64> {
    let s = singular_values(m)?;
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => Ok(min / max),
        _ => Ok(0.0),
    }
}

/// Numerical rank with cutoff `sigma > tol * sigma_max`.
pub fn rank(m: MatRef<'_, c64>, tol: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let max = s.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol * max).count())
}

pub fn eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<c64>> {
    m.eigenvalues()
        .map_err(|e| Error::Decomposition(format!("eigenvalues: {e:?}")))
}

pub fn spectral_radius(m: MatRef<'_, c64>) -> Result<f64> {
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Solves `a x = rhs` by partial-pivoting LU. The caller is responsible for
/// having certified `a` as nonsingular.
pub fn solve(a: MatRef<'_, c64>, rhs: MatRef<'_, c64>) -> ComplexMatrix {
    a.partial_piv_lu().solve(rhs)
}

pub fn inverse(a: MatRef<'_, c64>) -> ComplexMatrix {
    solve(a, identity(a.nrows()).as_ref())
}

/// `m^k` by repeated multiplication; `k` is small in every caller.
pub fn power(m: MatRef<'_, c64>, k: usize) -> ComplexMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Orthonormal basis of the column space, from a thin SVD with cutoff
/// `sigma > tol * sigma_max`.
pub fn range_basis(m: MatRef<'_, c64>, tol: f64) -> Result<ComplexMatrix> {
    if m.ncols() == 0 {
        return Ok(Mat::zeros(m.nrows(), 0));
    }
    let svd = m
        .thin_svd()
        .map_err(|e| Error::Decomposition(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector();
    let max = if s.nrows() > 0 { s[0].re } else { 0.0 };
    let r = (0..s.nrows()).filter(|&i| max > 0.0 && s[i].re > tol * max).count();
    Ok(svd.U().subcols(0, r).to_owned())
}

/// Orthonormal basis of the null space, from a full SVD with cutoff
/// `sigma > tol * sigma_max` deciding the rank.
pub fn null_space(m: MatRef<'_, c64>, tol: f64) -> Result<ComplexMatrix> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return Ok(identity(n));
    }
    let svd = m
        .svd()
        .map_err(|e| Error::Decomposition(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector();
    let max = if s.nrows() > 0 { s[0].re } else { 0.0 };
    let r = (0..s.nrows()).filter(|&i| max > 0.0 && s[i].re > tol * max).count();
    Ok(svd.V().subcols(r, n - r).to_owned())
}

/// Largest principal angle between the spans of two orthonormal bases.
///
/// Subspaces of different dimension are at angle `pi/2`. The sine form
/// `||(I - V V^H) U||_2` is used so small angles are resolved accurately.
pub fn max_principal_angle(u: MatRef<'_, c64>, v: MatRef<'_, c64>) -> Result<f64> {
    if u.ncols() != v.ncols() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if u.ncols() == 0 {
        return Ok(0.0);
    }
    let residual = u - v * (v.adjoint() * u);
    let sin = spectral_norm(residual.as_ref())?.min(1.0);
    Ok(sin.asin())
}

/// Largest principal angle between the column spaces of `a` and `b`.
pub fn subspace_angle(a: MatRef<'_, c64>, b: MatRef<'_, c64>, tol: f64) -> Result<f64> {
    let qa = range_basis(a, tol)?;
    let qb = range_basis(b, tol)?;
    max_principal_angle(qa.as_ref(), qb.as_ref())
}

/// Columns `start..start + count` as an owned matrix.
pub fn columns(m: MatRef<'_, c64>, start: usize, count: usize) -> ComplexMatrix {
    m.subcols(start, count).to_owned()
}

/// Scales every column to unit Euclidean norm; zero columns are left untouched.
pub fn normalize_columns(m: &mut ComplexMatrix) {
    for j in 0..m.ncols() {
        let norm = m.col(j).norm_l2();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for i in 0..m.nrows() {
                m[(i, j)] *= inv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let m = from_real_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]);
        assert_eq!(rank(m.as_ref(), 1e-12).unwrap(), 1);
        let ns = null_space(m.as_ref(), 1e-12).unwrap();
        assert_eq!(ns.ncols(), 2);
        assert!(fro((&m * &ns).as_ref()) < 1e-12);
    }

    #[test]
    fn principal_angle_of_rotated_line() {
        let theta: f64 = 0.3;
        let u = from_real_rows(&[[1.0], [0.0]]);
        let v = from_real_rows(&[[theta.cos()], [theta.sin()]]);
        let angle = max_principal_angle(u.as_ref(), v.as_ref()).unwrap();
        assert!((angle - theta).abs() < 1e-14);
        let w = from_real_rows(&[[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(
            max_principal_angle(u.as_ref(), w.as_ref()).unwrap(),
            std::f64::consts::FRAC_PI_2
        );
    }

    #[test]
    fn subspace_angle_ignores_basis() {
        let a = from_real_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]);
        let b = from_real_rows(&[[2.0, 1.0], [1.0, -1.0], [0.0, 0.0]]);
        assert!(subspace_angle(a.as_ref(), b.as_ref(), 1e-12).unwrap() < 1e-14);
    }

    #[test]
    fn power_matches_products() {
        let m = from_real_rows(&[[0.5, 1.0], [0.0, 0.25]]);
        let p3 = power(m.as_ref(), 3);
        let expected = &m * &m * &m;
        assert!(rel_residual(p3.as_ref(), expected.as_ref()) < 1e-15);
        assert!(rel_residual(power(m.as_ref(), 0).as_ref(), identity(2).as_ref()) == 0.0);
    }

    #[test]
    fn non_finite_is_rejected() {
        let m = from_real_rows(&[[1.0, f64::NAN]]);
        assert!(require_finite(m.as_ref(), "test").is_err());
    }
}
