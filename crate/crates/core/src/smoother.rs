//! Symmetrized smoothers, the smoothing assumption `||I - M^-1 A||_B < 1`
//! and its equivalent spectral forms, and the eigenvalue map
//! `mu = 1 - |lambda - 1|^2` for B-normal `M^-1 A`.

use faer::{c64, Mat, MatRef, Side};
use serde::Serialize;

use crate::bnormal;
use crate::bspace::{self, HpdMatrix, Verdict};
use crate::coarse::VerdictRecord;
use crate::error::{Error, Result};
use crate::linalg::{self, identity, re, ComplexMatrix};
use crate::tolerance::ToleranceProfile;

/// `M^-1`, its symmetrized variants and the smoothing norm.
#[derive(Clone, Debug)]
pub struct SmootherBundle {
    pub m_inv: ComplexMatrix,
    /// `K = M^-1 A`.
    pub k: ComplexMatrix,
    /// `M~^-1 = X + X^H - X^H B X` with `X = M^-1 A B^-1`.
    pub m_tilde_inv: ComplexMatrix,
    /// `M^^-1 = X + X^H - X B X^H`.
    pub m_hat_inv: ComplexMatrix,
    /// `||I - M^-1 A||_B`.
    pub smoothing_norm: f64,
    /// Relative anti-Hermitian parts removed from the two symmetrized matrices.
    pub hermitian_residual: f64,
}

impl SmootherBundle {
    /// `I - M^-1 A`.
    pub fn iteration(&self) -> ComplexMatrix {
        identity(self.k.nrows()) - &self.k
    }
}

pub fn build_smoother_bundle(
    a: MatRef<'_, c64>,
    m_inv: MatRef<'_, c64>,
    b: &HpdMatrix,
    tol: &ToleranceProfile,
) -> Result<SmootherBundle> {
    let n = b.n();
    linalg::require_shape(a, n, n, "system matrix A")?;
    linalg::require_shape(m_inv, n, n, "smoother M^-1")?;
    linalg::require_finite(m_inv, "smoother M^-1")?;
    let ratio = linalg::sigma_ratio(m_inv)?;
    if !(ratio > tol.rank) {
        return Err(Error::SingularSmoother { ratio });
    }
    let k = m_inv * a;
    // X = K B^-1 = (B^-1 K^H)^H since B is Hermitian.
    let x = b.solve(k.adjoint().to_owned().as_ref()).adjoint().to_owned();
    let bm = b.matrix();
    let sym = &x + x.adjoint();
    let tilde = &sym - x.adjoint() * bm * &x;
    let hat = &sym - &x * bm * x.adjoint();
    let asym = |m: &ComplexMatrix| {
        linalg::fro((m - m.adjoint()).as_ref()) / linalg::fro(m.as_ref()).max(f64::MIN_POSITIVE)
    };
    let hermitian_residual = asym(&tilde).max(asym(&hat));
    let smoothing_norm = bspace::b_mat_norm((identity(n) - &k).as_ref(), b)?;
    Ok(SmootherBundle {
        m_inv: m_inv.to_owned(),
        k,
        m_tilde_inv: linalg::hermitian_part(tilde.as_ref()),
        m_hat_inv: linalg::hermitian_part(hat.as_ref()),
        smoothing_norm,
        hermitian_residual,
    })
}

/// Ascending eigenvalues of a Hermitian matrix.
fn hermitian_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let h = linalg::hermitian_part(m);
    let s = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("hermitian eigensolver: {e:?}")))?;
    Ok(s.S().column_vector().iter().map(|z| z.re).collect())
}

/// One of the five equivalent statements, with the data it was judged on.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothingCondition {
    pub holds: bool,
    pub min_eig: f64,
    pub max_eig: f64,
    /// Eigenvalues outside the admissible range, when the condition fails.
    pub offending: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingAssumptionReport {
    pub smoothing_norm: f64,
    /// `||I - M^-1 A||_B < 1`.
    pub norm_below_one: bool,
    /// `M~^-1` HPD.
    pub tilde_hpd: SmoothingCondition,
    /// `sigma(M~^-1 B)` in `(0, 1]`.
    pub tilde_spectrum: SmoothingCondition,
    /// `M^^-1` HPD.
    pub hat_hpd: SmoothingCondition,
    /// `sigma(M^^-1 B)` in `(0, 1]`.
    pub hat_spectrum: SmoothingCondition,
    /// `||I - M^-1 A||_B^2` against `1 - lambda_min(M~^-1 B)`.
    pub norm_identity_residual: f64,
}

impl SmoothingAssumptionReport {
    pub fn verdicts(&self) -> [bool; 5] {
        [
            self.norm_below_one,
            self.tilde_hpd.holds,
            self.tilde_spectrum.holds,
            self.hat_hpd.holds,
            self.hat_spectrum.holds,
        ]
    }

    pub fn agree(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&x| x == v[0])
    }
}

fn hpd_condition(m: MatRef<'_, c64>, tol: &ToleranceProfile) -> Result<SmoothingCondition> {
    let eig = hermitian_eigenvalues(m)?;
    let (min, max) = (eig[0], eig[eig.len() - 1]);
    let holds = max > 0.0 && min > -tol.eig * max;
    let offending = if holds {
        Vec::new()
    } else {
        eig.iter().copied().filter(|&x| x <= -tol.eig * max.abs()).collect()
    };
    Ok(SmoothingCondition {
        holds,
        min_eig: min,
        max_eig: max,
        offending,
    })
}

fn unit_interval_condition(eig: &[f64], tol: &ToleranceProfile) -> SmoothingCondition {
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inside = |x: f64| x > -tol.spectrum && x <= 1.0 + tol.spectrum;
    let offending: Vec<f64> = eig.iter().copied().filter(|&x| !inside(x)).collect();
    SmoothingCondition {
        holds: offending.is_empty(),
        min_eig: min,
        max_eig: max,
        offending,
    }
}

/// Evaluates the five equivalent forms of the smoothing assumption. The
/// spectrum of `M~^-1 B` is taken from a general eigensolver (real parts),
/// that of `M^^-1 B` from the Hermitian similarity `B^{1/2} M^^-1 B^{1/2}`.
pub fn smoothing_assumption_report(
    bundle: &SmootherBundle,
    b: &HpdMatrix,
    tol: &ToleranceProfile,
) -> Result<SmoothingAssumptionReport> {
    let tilde_b = &bundle.m_tilde_inv * b.matrix();
    let mut tilde_eigs: Vec<f64> = linalg::eigenvalues(tilde_b.as_ref())?
        .into_iter()
        .map(|z| z.re)
        .collect();
    tilde_eigs.sort_by(f64::total_cmp);
    let hat_sym = b.sqrt() * &bundle.m_hat_inv * b.sqrt();
    let hat_eigs = hermitian_eigenvalues(hat_sym.as_ref())?;
    let norm_sq = bundle.smoothing_norm * bundle.smoothing_norm;
    Ok(SmoothingAssumptionReport {
        smoothing_norm: bundle.smoothing_norm,
        norm_below_one: bundle.smoothing_norm < 1.0,
        tilde_hpd: hpd_condition(bundle.m_tilde_inv.as_ref(), tol)?,
        tilde_spectrum: unit_interval_condition(&tilde_eigs, tol),
        hat_hpd: hpd_condition(bundle.m_hat_inv.as_ref(), tol)?,
        hat_spectrum: unit_interval_condition(&hat_eigs, tol),
        norm_identity_residual: (norm_sq - (1.0 - tilde_eigs[0])).abs(),
    })
}

/// `M^^-1 B V = V diag(mus)` with `V^H B V = I`, `mus` ascending.
#[derive(Clone, Debug)]
pub struct SmoothingSpectrum {
    pub mus: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn smoothing_spectrum(bundle: &SmootherBundle, b: &HpdMatrix) -> Result<SmoothingSpectrum> {
    let h = linalg::hermitian_part((b.sqrt() * &bundle.m_hat_inv * b.sqrt()).as_ref());
    let s = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Decomposition(format!("hermitian eigensolver: {e:?}")))?;
    let mus = s.S().column_vector().iter().map(|z| z.re).collect();
    let v = b.inv_sqrt() * s.U();
    Ok(SmoothingSpectrum { mus, v })
}

/// `1 - |lambda - 1|^2`.
pub fn eigenvalue_map(lambda: c64) -> f64 {
    1.0 - (lambda - re(1.0)).norm_sqr()
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueMapCheck {
    pub holds: bool,
    /// Largest `||M^^-1 B z - mu(lambda) z||_B / ||z||_B` over the eigenpairs.
    pub max_deviation: f64,
    pub lambdas: Vec<(f64, f64)>,
    pub mapped: Vec<f64>,
}

/// Checks that every B-unitary eigenvector `z` of `M^-1 A` (eigenvalue
/// `lambda`) satisfies `M^^-1 B z = (1 - |lambda - 1|^2) z`.
pub fn eigenvalue_map_check(
    a: MatRef<'_, c64>,
    m_inv: MatRef<'_, c64>,
    b: &HpdMatrix,
    profile: &ToleranceProfile,
    tol: f64,
) -> Result<EigenvalueMapCheck> {
    let bundle = build_smoother_bundle(a, m_inv, b, profile)?;
    let diag = bnormal::b_unitary_diagonalize(bundle.k.as_ref(), b, profile, profile.eig)?;
    let hat_b = &bundle.m_hat_inv * b.matrix();
    let mut max_deviation: f64 = 0.0;
    let mut mapped = Vec::with_capacity(diag.lambdas.len());
    for (j, &lambda) in diag.lambdas.iter().enumerate() {
        let z = diag.u.col(j);
        let mu = eigenvalue_map(lambda);
        let r = &hat_b * z - z * faer::Scale(re(mu));
        let dev = bspace::b_vec_norm(r.as_ref(), b)? / bspace::b_vec_norm(z, b)?;
        max_deviation = max_deviation.max(dev);
        mapped.push(mu);
    }
    Ok(EigenvalueMapCheck {
        holds: max_deviation <= tol,
        max_deviation,
        lambdas: diag.lambdas.iter().map(|z| (z.re, z.im)).collect(),
        mapped,
    })
}

/// For B-normal `M^-1 A`: the smoothing assumption, `|lambda - 1|^2 < 1` for
/// every eigenvalue, and `rho(I - M^-1 A) < 1` together with the identity
/// `||I - M^-1 A||_B = rho(I - M^-1 A)`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalSmoothingReport {
    pub norm_below_one: bool,
    pub eigenvalues_inside_disc: bool,
    pub radius_below_one: bool,
    pub smoothing_norm: f64,
    pub spectral_radius: f64,
    pub max_distance_sq: f64,
    /// `||I - M^-1 A||_B = rho(I - M^-1 A)`.
    pub norm_equals_radius: VerdictRecord,
    /// `||M~^-1 - M^^-1||_F / ||M^^-1||_F`.
    pub tilde_hat_residual: f64,
}

impl NormalSmoothingReport {
    pub fn agree(&self) -> bool {
        self.norm_below_one == self.eigenvalues_inside_disc && self.norm_below_one == self.radius_below_one
    }
}

pub fn normal_smoothing_report(
    a: MatRef<'_, c64>,
    m_inv: MatRef<'_, c64>,
    b: &HpdMatrix,
    tol: &ToleranceProfile,
) -> Result<NormalSmoothingReport> {
    let bundle = build_smoother_bundle(a, m_inv, b, tol)?;
    let normal = bspace::is_b_normal(bundle.k.as_ref(), b, tol.eq)?;
    if !normal.holds {
        return Err(Error::NotBNormal {
            residual: normal.residual,
        });
    }
    let lambdas = linalg::eigenvalues(bundle.k.as_ref())?;
    let max_distance_sq = lambdas
        .iter()
        .map(|&l| (l - re(1.0)).norm_sqr())
        .fold(0.0, f64::max);
    let spectral_radius = linalg::spectral_radius(bundle.iteration().as_ref())?;
    let gap = (bundle.smoothing_norm - spectral_radius).abs();
    Ok(NormalSmoothingReport {
        norm_below_one: bundle.smoothing_norm < 1.0,
        eigenvalues_inside_disc: max_distance_sq < 1.0,
        radius_below_one: spectral_radius < 1.0,
        smoothing_norm: bundle.smoothing_norm,
        spectral_radius,
        max_distance_sq,
        norm_equals_radius: Verdict::from_residual(gap, tol.eig * bundle.smoothing_norm.max(1.0)).into(),
        tilde_hat_residual: linalg::rel_residual(bundle.m_tilde_inv.as_ref(), bundle.m_hat_inv.as_ref()),
    })
}

/// `omega * diag(A)^-1`.
pub fn jacobi_smoother(a: MatRef<'_, c64>, omega: f64) -> Result<ComplexMatrix> {
    let n = linalg::require_square(a, "jacobi smoother")?;
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        let d = a[(i, i)];
        if d.norm() == 0.0 {
            return Err(Error::InvalidConfig(format!("zero diagonal entry at row {i}")));
        }
        m[(i, i)] = re(omega) / d;
    }
    Ok(m)
}

/// `omega * I`.
pub fn richardson_smoother(n: usize, omega: f64) -> ComplexMatrix {
    linalg::scale(identity(n).as_ref(), re(omega))
}

/// Spectral radius estimate by power iteration with a fixed, deterministic
/// start vector.
pub fn power_iteration_radius(m: MatRef<'_, c64>, steps: usize) -> f64 {
    let n = m.nrows();
    let mut x = faer::Col::<c64>::from_fn(n, |i| c64::new(1.0 + i as f64 / n as f64, 0.5));
    let mut estimate = 0.0;
    for _ in 0..steps {
        let y = m * &x;
        let norm_y = y.norm_l2();
        let norm_x = x.norm_l2();
        if norm_y == 0.0 {
            return 0.0;
        }
        estimate = norm_y / norm_x;
        x = y * faer::Scale(re(1.0 / norm_y));
    }
    estimate
}

/// Default damping `1 / rho_est(D^-1 A)` with 100 power-iteration steps.
pub fn default_jacobi_omega(a: MatRef<'_, c64>) -> Result<f64> {
    let d_inv = jacobi_smoother(a, 1.0)?;
    Ok(1.0 / power_iteration_radius((d_inv * a).as_ref(), 100))
}

/// Default damping `1 / rho_est(A)` for the `omega I` rule.
pub fn default_richardson_omega(a: MatRef<'_, c64>) -> f64 {
    1.0 / power_iteration_radius(a, 100)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;
    use crate::random::{gaussian_matrix, near_identity, rng, well_conditioned_hpd};

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn example_two() -> (ComplexMatrix, HpdMatrix) {
        let a = from_real_rows(&[[0.5, 0.0, 0.0], [0.0, 0.5, 1.0], [0.0, 0.0, 0.5]]);
        let b = HpdMatrix::new(from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, -2.0], [0.0, -2.0, 6.0]]), &tol()).unwrap();
        (a, b)
    }

    #[test]
    fn example_two_hat_matrix_and_spectrum() {
        let (a, b) = example_two();
        let bundle = build_smoother_bundle(a.as_ref(), identity(3).as_ref(), &b, &tol()).unwrap();
        let expected = from_real_rows(&[[0.75, 0.0, 0.0], [0.0, 2.75, 1.0], [0.0, 1.0, 0.375]]);
        assert!(linalg::fro((&bundle.m_hat_inv - &expected).as_ref()) < 1e-13);
        let report = smoothing_assumption_report(&bundle, &b, &tol()).unwrap();
        assert_eq!(report.verdicts(), [true; 5]);
        let spec = smoothing_spectrum(&bundle, &b).unwrap();
        let s3 = 3f64.sqrt();
        for (mu, e) in spec.mus.iter().zip([(2.0 - s3) / 4.0, 0.75, (2.0 + s3) / 4.0]) {
            assert!((mu - e).abs() < 1e-12);
        }
        // Eigenvector of the smallest mu is parallel to [0, 1 - sqrt 3, 1].
        let v0 = linalg::columns(spec.v.as_ref(), 0, 1);
        let target = from_real_rows(&[[0.0], [1.0 - s3], [1.0]]);
        assert!(linalg::subspace_angle(v0.as_ref(), target.as_ref(), 1e-12).unwrap() < 1e-10);
        assert!(bspace::is_b_unitary(spec.v.as_ref(), &b, 1e-12).unwrap().holds);
    }

    #[test]
    fn exact_inverse_smoother() {
        let mut g = rng(3);
        let a = near_identity(&mut g, 5, 0.5);
        let b = HpdMatrix::new(well_conditioned_hpd(&mut g, 5), &tol()).unwrap();
        let m_inv = linalg::inverse(a.as_ref());
        let bundle = build_smoother_bundle(a.as_ref(), m_inv.as_ref(), &b, &tol()).unwrap();
        assert!(bundle.smoothing_norm < 1e-12);
        let report = smoothing_assumption_report(&bundle, &b, &tol()).unwrap();
        assert_eq!(report.verdicts(), [true; 5]);
        let spec = smoothing_spectrum(&bundle, &b).unwrap();
        assert!(spec.mus.iter().all(|m| (m - 1.0).abs() < 1e-12));
    }

    #[test]
    fn identity_b_formula_and_hpd_specialization() {
        let mut g = rng(5);
        let a = gaussian_matrix(&mut g, 4, 4);
        let m_inv = gaussian_matrix(&mut g, 4, 4);
        let id = HpdMatrix::identity(4);
        let bundle = build_smoother_bundle(a.as_ref(), m_inv.as_ref(), &id, &tol()).unwrap();
        let k = &m_inv * &a;
        let expected = &k + k.adjoint() - &k * k.adjoint();
        assert!(linalg::rel_residual(bundle.m_hat_inv.as_ref(), expected.as_ref()) < 1e-13);

        // B = A HPD, M Hermitian.
        let h = well_conditioned_hpd(&mut g, 4);
        let b = HpdMatrix::new(h.clone(), &tol()).unwrap();
        let m = linalg::hermitian_part(gaussian_matrix(&mut g, 4, 4).as_ref());
        let bundle = build_smoother_bundle(h.as_ref(), m.as_ref(), &b, &tol()).unwrap();
        let expected = &m + m.adjoint() - m.adjoint() * &h * &m;
        assert!(linalg::rel_residual(bundle.m_tilde_inv.as_ref(), expected.as_ref()) < 1e-12);
        assert!(linalg::rel_residual(bundle.m_hat_inv.as_ref(), expected.as_ref()) < 1e-12);
    }

    #[test]
    fn bundle_identities_and_b_orthogonality() {
        let mut g = rng(7);
        let a = gaussian_matrix(&mut g, 6, 6);
        let m_inv = gaussian_matrix(&mut g, 6, 6);
        let b = HpdMatrix::new(well_conditioned_hpd(&mut g, 6), &tol()).unwrap();
        let bundle = build_smoother_bundle(a.as_ref(), m_inv.as_ref(), &b, &tol()).unwrap();
        assert!(bundle.hermitian_residual < 1e-10);
        let s = bundle.iteration();
        let s_adj = bspace::b_adjoint(s.as_ref(), &b).unwrap();
        let id = identity(6);
        let lhs = &id - &bundle.m_tilde_inv * b.matrix();
        assert!(linalg::rel_residual(lhs.as_ref(), (&s_adj * &s).as_ref()) < 1e-10);
        let lhs = &id - &bundle.m_hat_inv * b.matrix();
        assert!(linalg::rel_residual(lhs.as_ref(), (&s * &s_adj).as_ref()) < 1e-10);
        for m in [&bundle.m_tilde_inv, &bundle.m_hat_inv] {
            let mb = m * b.matrix();
            assert!(bspace::is_b_orthogonal_matrix(mb.as_ref(), &b, 1e-10).unwrap().holds);
            for z in linalg::eigenvalues(mb.as_ref()).unwrap() {
                assert!(z.im.abs() < 1e-8 * z.norm().max(1.0));
            }
        }
        let report = smoothing_assumption_report(&bundle, &b, &tol()).unwrap();
        assert!(report.agree());
        assert!(report.norm_identity_residual < 1e-8 * report.smoothing_norm.powi(2).max(1.0));
    }

    #[test]
    fn singular_smoother_is_rejected() {
        let (a, b) = example_two();
        let m_inv = from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(
            build_smoother_bundle(a.as_ref(), m_inv.as_ref(), &b, &tol()),
            Err(Error::SingularSmoother { .. })
        ));
    }

    #[test]
    fn hermitian_case_map() {
        let mut g = rng(9);
        let h = linalg::hermitian_part(near_identity(&mut g, 5, 0.6).as_ref());
        let id = HpdMatrix::identity(5);
        let check = eigenvalue_map_check(h.as_ref(), identity(5).as_ref(), &id, &tol(), 1e-10).unwrap();
        assert!(check.holds, "{check:?}");
        for ((l, _), mu) in check.lambdas.iter().zip(&check.mapped) {
            assert!((mu - (2.0 * l - l * l)).abs() < 1e-12);
        }
    }

    #[test]
    fn example_one_map_against_direct_spectrum() {
        let a = from_real_rows(&[
            [7.0 / 8.0, -5.0 / 8.0, 5.0 / 8.0],
            [-5.0 / 8.0, 7.0 / 8.0, 5.0 / 8.0],
            [0.0, 0.0, 1.5],
        ]);
        let b = HpdMatrix::new(
            from_real_rows(&[
                [5.0 / 8.0, -3.0 / 8.0, -1.0 / 8.0],
                [-3.0 / 8.0, 5.0 / 8.0, -1.0 / 8.0],
                [-1.0 / 8.0, -1.0 / 8.0, 7.0 / 24.0],
            ]),
            &tol(),
        )
        .unwrap();
        let check = eigenvalue_map_check(a.as_ref(), identity(3).as_ref(), &b, &tol(), 1e-10).unwrap();
        assert!(check.holds);
        let mut mapped = check.mapped.clone();
        mapped.sort_by(f64::total_cmp);
        let bundle = build_smoother_bundle(a.as_ref(), identity(3).as_ref(), &b, &tol()).unwrap();
        let direct = smoothing_spectrum(&bundle, &b).unwrap().mus;
        for ((m, d), e) in mapped.iter().zip(&direct).zip([7.0 / 16.0, 0.75, 0.75]) {
            assert!((m - e).abs() < 1e-12);
            assert!((d - e).abs() < 1e-12);
        }
    }

    #[test]
    fn non_normal_map_is_rejected() {
        let (a, b) = example_two();
        assert!(matches!(
            eigenvalue_map_check(a.as_ref(), identity(3).as_ref(), &b, &tol(), 1e-10),
            Err(Error::NotBNormal { .. }) | Err(Error::Defective { .. })
        ));
    }

    #[test]
    fn normal_smoothing_consistency() {
        let mut g = rng(13);
        for trial in 0..6 {
            let lam = bnormal::separated_spectrum(&mut g, 5, 0.3, false);
            let (a, _) = bnormal::matrix_with_spectrum(&mut g, &lam, 0.4);
            let es = bnormal::diagonalize(a.as_ref(), &tol()).unwrap();
            let adm = bnormal::sample_admissible_b(&es, trial, &tol()).unwrap();
            let omega = if trial % 2 == 0 { 0.05 } else { 1.0 };
            let m_inv = richardson_smoother(5, omega);
            let r = normal_smoothing_report(a.as_ref(), m_inv.as_ref(), &adm.b, &tol()).unwrap();
            assert!(r.agree(), "{r:?}");
            assert!(r.norm_equals_radius.holds, "{r:?}");
            assert!(r.tilde_hat_residual < 1e-8);
        }
    }

    #[test]
    fn jacobi_and_power_iteration() {
        let a = from_real_rows(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]);
        let m = jacobi_smoother(a.as_ref(), 0.5).unwrap();
        assert!((m[(1, 1)] - re(0.25)).norm() < 1e-15);
        // rho(D^-1 A) = 1 + cos(pi/4).
        let omega = default_jacobi_omega(a.as_ref()).unwrap();
        let rho = 1.0 + std::f64::consts::FRAC_1_SQRT_2;
        assert!((omega - 1.0 / rho).abs() < 1e-8);
        let zero_diag = from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!(jacobi_smoother(zero_diag.as_ref(), 1.0).is_err());
    }
}
