//! Two-grid error operators
//!
//! ```text
//! E+ = (I - K^+)^nu2 (I - Pi_A(P, R)) (I - K)^nu1
//! E  = (I - K)^nu2   (I - Pi_A(P, R)) (I - K)^nu1,   K = M^-1 A
//! ```
//!
//! the two optimal transfer constructions (eigenvectors of `M^^-1 B`, and
//! generalized left/right eigenvectors of `(A, M)`), and randomized
//! optimality sweeps.

use faer::{c64, Mat, MatRef};
use rayon::prelude::*;
use serde::Serialize;

use crate::bnormal::{self, off_block_mass};
use crate::bspace::{self, HpdMatrix, Verdict};
use crate::coarse::{self, TransferPair, VerdictRecord};
use crate::error::{Error, Result};
use crate::linalg::{self, identity, re, ComplexMatrix};
use crate::random::{self, derive_seed};
use crate::smoother::{self, SmootherBundle, SmoothingSpectrum};
use crate::tolerance::ToleranceProfile;

/// Maximum resamples per sweep trial when a draw fails the rank tests.
pub const MAX_RESAMPLES: usize = 10;

#[derive(Clone, Debug)]
pub struct TwoGridConfig {
    pub a: ComplexMatrix,
    pub m_inv: ComplexMatrix,
    pub b: HpdMatrix,
    pub nu1: usize,
    pub nu2: usize,
    pub nc: usize,
}

impl TwoGridConfig {
    pub fn new(
        a: ComplexMatrix,
        m_inv: ComplexMatrix,
        b: HpdMatrix,
        nu1: usize,
        nu2: usize,
        nc: usize,
    ) -> Result<Self> {
        let n = b.n();
        linalg::require_shape(a.as_ref(), n, n, "system matrix A")?;
        linalg::require_shape(m_inv.as_ref(), n, n, "smoother M^-1")?;
        linalg::require_finite(a.as_ref(), "system matrix A")?;
        linalg::require_finite(m_inv.as_ref(), "smoother M^-1")?;
        if nc == 0 || nc >= n {
            return Err(Error::InvalidConfig(format!(
                "coarse dimension n_c = {nc} must satisfy 1 <= n_c < n = {n}"
            )));
        }
        Ok(Self {
            a,
            m_inv,
            b,
            nu1,
            nu2,
            nc,
        })
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ErrorOperator {
    /// Post-smoothing with the B-adjoint `I - K^+`.
    Plus,
    /// Pre- and post-smoothing with `I - K`.
    South,
}

/// Precomputed smoother powers for repeated operator evaluation.
#[derive(Clone, Debug)]
pub struct TwoGrid {
    pub cfg: TwoGridConfig,
    pub tol: ToleranceProfile,
    pub k: ComplexMatrix,
    /// `I - K`.
    pub s: ComplexMatrix,
    /// `(I - K)^+`.
    pub s_adj: ComplexMatrix,
}

impl TwoGrid {
    pub fn new(cfg: TwoGridConfig, tol: ToleranceProfile) -> Result<Self> {
        let k = &cfg.m_inv * &cfg.a;
        let s = identity(cfg.n()) - &k;
        let s_adj = bspace::b_adjoint(s.as_ref(), &cfg.b)?;
        Ok(Self {
            cfg,
            tol,
            k,
            s,
            s_adj,
        })
    }

    pub fn n(&self) -> usize {
        self.cfg.n()
    }

    pub fn b(&self) -> &HpdMatrix {
        &self.cfg.b
    }

    pub fn pair(&self, p: ComplexMatrix, r: ComplexMatrix) -> Result<TransferPair> {
        TransferPair::new(p, r, &self.tol)
    }

    /// The error operator of the given kind for explicit smoothing counts.
    pub fn error_operator(
        &self,
        kind: ErrorOperator,
        tp: &TransferPair,
        nu1: usize,
        nu2: usize,
    ) -> Result<ComplexMatrix> {
        let pi = coarse::coarse_grid_projection(self.cfg.a.as_ref(), tp, &self.tol)?;
        let post = match kind {
            ErrorOperator::Plus => &self.s_adj,
            ErrorOperator::South => &self.s,
        };
        Ok(linalg::power(post.as_ref(), nu2) * pi.complement() * linalg::power(self.s.as_ref(), nu1))
    }

    pub fn error_norm(&self, kind: ErrorOperator, tp: &TransferPair, nu1: usize, nu2: usize) -> Result<f64> {
        bspace::b_mat_norm(self.error_operator(kind, tp, nu1, nu2)?.as_ref(), self.b())
    }
}

/// `E+^{nu1,nu2}(P, R)` with the configured smoothing counts.
pub fn e_plus(tg: &TwoGrid, tp: &TransferPair) -> Result<ComplexMatrix> {
    tg.error_operator(ErrorOperator::Plus, tp, tg.cfg.nu1, tg.cfg.nu2)
}

/// `E^{nu1,nu2}(P, R)` with the configured smoothing counts.
pub fn e_south(tg: &TwoGrid, tp: &TransferPair) -> Result<ComplexMatrix> {
    tg.error_operator(ErrorOperator::South, tp, tg.cfg.nu1, tg.cfg.nu2)
}

/// Smoothing-count pairs for which the hat construction carries a guarantee.
pub const HAT_GUARANTEED: [(usize, usize); 3] = [(0, 1), (1, 0), (1, 1)];

/// Transfers built from the eigenvectors of `M^^-1 B` (ascending `mu`).
#[derive(Clone, Debug)]
pub struct HatTransfers {
    pub pair: TransferPair,
    pub bundle: SmootherBundle,
    pub spectrum: SmoothingSpectrum,
    /// `mu_{n_c+1}`.
    pub mu_next: f64,
}

impl HatTransfers {
    /// Predicted `||E+^{nu1,nu2}||_B^2 = (1 - mu_{n_c+1})^{nu1+nu2}`.
    pub fn predicted_sq(&self, nu1: usize, nu2: usize) -> f64 {
        (1.0 - self.mu_next).powi((nu1 + nu2) as i32)
    }

    pub fn predicted_norm(&self, nu1: usize, nu2: usize) -> f64 {
        self.predicted_sq(nu1, nu2).sqrt()
    }

    pub fn guaranteed(nu1: usize, nu2: usize) -> bool {
        HAT_GUARANTEED.contains(&(nu1, nu2))
    }
}

/// `P^` = first `n_c` B-unitary eigenvectors of `M^^-1 B`, `R^ = A^-H B P^`.
pub fn optimal_transfers_hat(cfg: &TwoGridConfig, tol: &ToleranceProfile) -> Result<HatTransfers> {
    let bundle = smoother::build_smoother_bundle(cfg.a.as_ref(), cfg.m_inv.as_ref(), &cfg.b, tol)?;
    if !(bundle.smoothing_norm < 1.0) {
        return Err(Error::SmoothingAssumptionViolated {
            norm: bundle.smoothing_norm,
        });
    }
    let spectrum = smoother::smoothing_spectrum(&bundle, &cfg.b)?;
    let p = linalg::columns(spectrum.v.as_ref(), 0, cfg.nc);
    let r = coarse::r_star(cfg.a.as_ref(), p.as_ref(), &cfg.b, tol)?;
    let pair = TransferPair::new(p, r, tol)?;
    let mu_next = spectrum.mus[cfg.nc];
    Ok(HatTransfers {
        pair,
        bundle,
        spectrum,
        mu_next,
    })
}

/// Left and right generalized eigenvectors of `A z = lambda M z`, ordered by
/// descending `|1 - lambda|` with equal eigenvalues contiguous, normalized so
/// that `V_l^H M V_r = I` and `V_l^H A V_r = Lambda`.
#[derive(Clone, Debug)]
pub struct GeneralizedEigenPair {
    pub v_r: ComplexMatrix,
    pub v_l: ComplexMatrix,
    pub lambdas: Vec<c64>,
    pub groups: Vec<std::ops::Range<usize>>,
    /// `V_l^H A V_r`.
    pub d_a: ComplexMatrix,
    /// Relative residual of `M^-1 A V_r = V_r Lambda`.
    pub right_residual: f64,
    /// Relative residual of `V_l^H A M^-1 = Lambda V_l^H`.
    pub left_residual: f64,
    /// Relative off-diagonal mass of `D_A`.
    pub d_a_offdiag: f64,
}

pub fn generalized_eigen_pair(
    a: MatRef<'_, c64>,
    m_inv: MatRef<'_, c64>,
    tol: &ToleranceProfile,
) -> Result<GeneralizedEigenPair> {
    let k = m_inv * a;
    let es = bnormal::diagonalize(k.as_ref(), tol)?;
    let reps = es.representatives();
    let mut order: Vec<usize> = (0..es.groups.len()).collect();
    // Stable sort on |1 - lambda| descending, then arg(lambda).
    order.sort_by(|&i, &j| {
        let (di, dj) = ((re(1.0) - reps[i]).norm(), (re(1.0) - reps[j]).norm());
        dj.total_cmp(&di).then(reps[i].arg().total_cmp(&reps[j].arg()))
    });
    let n = es.n();
    let mut perm = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(order.len());
    for &g in &order {
        let range = es.groups[g].clone();
        groups.push(perm.len()..perm.len() + range.len());
        perm.extend(range);
    }
    let v_r = Mat::from_fn(n, n, |i, j| es.w[(i, perm[j])]);
    let lambdas: Vec<c64> = perm.iter().map(|&j| es.lambdas[j]).collect();
    let lam = linalg::diag(&lambdas);

    let v_r_inv = linalg::inverse(v_r.as_ref());
    // V_l = M^-H V_r^-H, i.e. V_l^H = V_r^-1 M^-1.
    let v_l_h = &v_r_inv * m_inv;
    let v_l = v_l_h.adjoint().to_owned();
    let d_a = &v_l_h * a * &v_r;

    let right_residual = linalg::fro((&k * &v_r - &v_r * &lam).as_ref())
        / (linalg::fro(k.as_ref()) * linalg::fro(v_r.as_ref())).max(f64::MIN_POSITIVE);
    let left = &v_l_h * a * m_inv - &lam * &v_l_h;
    let left_residual = linalg::fro(left.as_ref())
        / (linalg::fro(k.as_ref()) * linalg::fro(v_l_h.as_ref())).max(f64::MIN_POSITIVE);
    let singletons: Vec<_> = (0..n).map(|i| i..i + 1).collect();
    let d_a_offdiag = off_block_mass(d_a.as_ref(), &singletons) / linalg::fro(d_a.as_ref()).max(f64::MIN_POSITIVE);
    Ok(GeneralizedEigenPair {
        v_r,
        v_l,
        lambdas,
        groups,
        d_a,
        right_residual,
        left_residual,
        d_a_offdiag,
    })
}

/// Transfers from the leading generalized eigenvectors.
#[derive(Clone, Debug)]
pub struct SharpTransfers {
    pub pair: TransferPair,
    pub eig: GeneralizedEigenPair,
    /// `lambda_{n_c+1}` in the descending `|1 - lambda|` order.
    pub lambda_next: c64,
    /// Whether `V_r^H B V_r` is block diagonal along the eigenvalue groups,
    /// i.e. `B` has the structure under which the norm prediction is guaranteed.
    pub admissible: bool,
    pub admissibility_residual: f64,
    /// `rho(E^{nu1,nu2}(P#, R#))` for the configured counts.
    pub rho: f64,
}

impl SharpTransfers {
    /// `|1 - lambda_{n_c+1}|^{nu1+nu2}`.
    pub fn predicted(&self, nu1: usize, nu2: usize) -> f64 {
        (re(1.0) - self.lambda_next).norm().powi((nu1 + nu2) as i32)
    }
}

/// `P#` = first `n_c` right eigenvectors, `R#` = first `n_c` left eigenvectors.
pub fn optimal_transfers_sharp(tg: &TwoGrid) -> Result<SharpTransfers> {
    let cfg = &tg.cfg;
    let tol = &tg.tol;
    let eig = generalized_eigen_pair(cfg.a.as_ref(), cfg.m_inv.as_ref(), tol)?;
    let nc = cfg.nc;

    let dist = |l: c64| (re(1.0) - l).norm();
    let (left, right) = (dist(eig.lambdas[nc - 1]), dist(eig.lambdas[nc]));
    let splits_group = eig.groups.iter().any(|g| g.start < nc && nc < g.end);
    if splits_group || (left - right).abs() <= tol.group * (1.0 + left) {
        return Err(Error::OrderingAmbiguous { left, right });
    }

    let gram = eig.v_r.adjoint() * cfg.b.matrix() * &eig.v_r;
    let admissibility_residual = off_block_mass(gram.as_ref(), &eig.groups) / linalg::fro(gram.as_ref());
    let admissible = admissibility_residual <= tol.eig;

    let p = linalg::columns(eig.v_r.as_ref(), 0, nc);
    let r = linalg::columns(eig.v_l.as_ref(), 0, nc);
    let pair = TransferPair::new(p, r, tol)?;
    let e = tg.error_operator(ErrorOperator::South, &pair, cfg.nu1, cfg.nu2)?;
    let rho = linalg::spectral_radius(e.as_ref())?;
    let out = SharpTransfers {
        lambda_next: eig.lambdas[nc],
        pair,
        eig,
        admissible,
        admissibility_residual,
        rho,
    };
    let predicted = out.predicted(cfg.nu1, cfg.nu2);
    if (rho - predicted).abs() > tol.eig * predicted.max(1.0) {
        return Err(Error::SpectralRadiusMismatch { rho, predicted });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub kind: ErrorOperator,
    pub nu1: usize,
    pub nu2: usize,
    pub optimal: f64,
    pub evaluated: usize,
    pub skipped: usize,
    pub min: f64,
    pub max: f64,
    /// `min >= optimal - tol.opt`.
    pub certified: bool,
    pub histogram: Vec<HistogramBin>,
}

/// Ten equal-width bins over `[lo, hi]`.
pub fn histogram(values: &[f64], lo: f64, hi: f64) -> Vec<HistogramBin> {
    const BINS: usize = 10;
    if values.is_empty() {
        return Vec::new();
    }
    let width = ((hi - lo) / BINS as f64).max(f64::MIN_POSITIVE);
    let mut bins: Vec<HistogramBin> = (0..BINS)
        .map(|i| HistogramBin {
            lower: lo + i as f64 * width,
            upper: lo + (i + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &v in values {
        let idx = (((v - lo) / width).floor().max(0.0) as usize).min(BINS - 1);
        bins[idx].count += 1;
    }
    bins
}

/// Draws a random full-rank pair with nonsingular `R^H A P`, resampling up
/// to [`MAX_RESAMPLES`] times.
pub fn random_pair(tg: &TwoGrid, seed: u64) -> Option<TransferPair> {
    let mut rng = random::rng(seed);
    let (n, nc) = (tg.n(), tg.cfg.nc);
    for _ in 0..=MAX_RESAMPLES {
        let p = random::gaussian_matrix(&mut rng, n, nc);
        let r = random::gaussian_matrix(&mut rng, n, nc);
        if let Ok(tp) = TransferPair::new(p, r, &tg.tol) {
            if tp.coarse_matrix(tg.cfg.a.as_ref(), &tg.tol).is_ok() {
                return Some(tp);
            }
        }
    }
    None
}

/// Evaluates `||E(P, R)||_B` on explicit pairs; pairs failing the coarse
/// rank test yield `None`.
pub fn evaluate_pairs(
    tg: &TwoGrid,
    kind: ErrorOperator,
    nu1: usize,
    nu2: usize,
    pairs: &[TransferPair],
) -> Vec<Option<f64>> {
    pairs
        .par_iter()
        .map(|tp| tg.error_norm(kind, tp, nu1, nu2).ok())
        .collect()
}

/// Random-pair search for a counterexample to optimality: every observed norm
/// must be at least `optimal - tol.opt`. Trials are independent with seeds
/// derived from `seed`, so the outcome does not depend on scheduling.
pub fn optimality_sweep(
    tg: &TwoGrid,
    kind: ErrorOperator,
    nu1: usize,
    nu2: usize,
    optimal: f64,
    trials: usize,
    seed: u64,
) -> SweepOutcome {
    let norms: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let tp = random_pair(tg, derive_seed(seed, i as u64))?;
            tg.error_norm(kind, &tp, nu1, nu2).ok()
        })
        .collect();
    summarize(kind, nu1, nu2, optimal, &norms, tg.tol.opt)
}

pub fn summarize(
    kind: ErrorOperator,
    nu1: usize,
    nu2: usize,
    optimal: f64,
    norms: &[Option<f64>],
    slack: f64,
) -> SweepOutcome {
    let values: Vec<f64> = norms.iter().flatten().copied().collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SweepOutcome {
        kind,
        nu1,
        nu2,
        optimal,
        evaluated: values.len(),
        skipped: norms.len() - values.len(),
        min,
        max,
        certified: values.iter().all(|&v| v >= optimal - slack),
        histogram: histogram(&values, optimal.min(min), max),
    }
}

/// `(P S, R T)` for random nonsingular `S, T`.
pub fn basis_changes(tp: &TransferPair, count: usize, seed: u64, tol: &ToleranceProfile) -> Vec<TransferPair> {
    let mut rng = random::rng(seed);
    let nc = tp.nc();
    (0..count)
        .filter_map(|_| {
            let s = random::near_identity(&mut rng, nc, 0.9);
            let t = random::near_identity(&mut rng, nc, 0.9);
            TransferPair::new(&tp.p * s, &tp.r * t, tol).ok()
        })
        .collect()
}

/// Adjoint and norm identities of the error operator for a B-orthogonal
/// coarse-grid correction.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub kind: ErrorOperator,
    pub nu: usize,
    /// `(E^{nu,nu})^+ = E^{nu,nu}`.
    pub self_adjoint: VerdictRecord,
    /// `(E^{nu,0})^+ = E^{0,nu}` and `(E^{0,nu})^+ = E^{nu,0}`.
    pub split_adjoint: VerdictRecord,
    /// `B^-1 (E^{nu,0})^H = E^{0,nu} B^-1` and `B^-1 (E^{0,nu})^H = E^{nu,0} B^-1`.
    pub conjugation: VerdictRecord,
    /// `||E^{nu,nu}||_B = ||E^{nu,0}||_B^2 = ||E^{0,nu}||_B^2`.
    pub norm_split: VerdictRecord,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.self_adjoint.holds && self.split_adjoint.holds && self.conjugation.holds && self.norm_split.holds
    }
}

pub fn e_plus_property_check(tg: &TwoGrid, kind: ErrorOperator, tp: &TransferPair, nu: usize) -> Result<PropertyReport> {
    let tol = &tg.tol;
    let b = tg.b();
    let pi = coarse::coarse_grid_projection(tg.cfg.a.as_ref(), tp, tol)?;
    let gram = bspace::b_orthogonality_gram_residual(pi.pi.as_ref(), b)?;
    if gram > tol.eq {
        return Err(Error::ProjectionNotBOrthogonal { residual: gram });
    }
    let full = tg.error_operator(kind, tp, nu, nu)?;
    let pre = tg.error_operator(kind, tp, nu, 0)?;
    let post = tg.error_operator(kind, tp, 0, nu)?;

    let adj = |m: &ComplexMatrix| bspace::b_adjoint(m.as_ref(), b);
    let rel = |x: &ComplexMatrix, y: &ComplexMatrix| linalg::rel_residual(x.as_ref(), y.as_ref());

    let self_adjoint = rel(&adj(&full)?, &full);
    let split = rel(&adj(&pre)?, &post).max(rel(&adj(&post)?, &pre));

    // B^-1 X^H against Y B^-1, with Y B^-1 = (B^-1 Y^H)^H.
    let conj = |x: &ComplexMatrix, y: &ComplexMatrix| {
        let lhs = b.solve(x.adjoint().to_owned().as_ref());
        let rhs = b.solve(y.adjoint().to_owned().as_ref()).adjoint().to_owned();
        rel(&lhs, &rhs)
    };
    let conjugation = conj(&pre, &post).max(conj(&post, &pre));

    let n_full = bspace::b_mat_norm(full.as_ref(), b)?;
    let n_pre = bspace::b_mat_norm(pre.as_ref(), b)?;
    let n_post = bspace::b_mat_norm(post.as_ref(), b)?;
    let scale = n_full.max(1.0);
    let norm_split = ((n_full - n_pre * n_pre).abs().max((n_full - n_post * n_post).abs())) / scale;

    Ok(PropertyReport {
        kind,
        nu,
        self_adjoint: Verdict::from_residual(self_adjoint, tol.eq).into(),
        split_adjoint: Verdict::from_residual(split, tol.eq).into(),
        conjugation: Verdict::from_residual(conjugation, tol.eq).into(),
        norm_split: Verdict::from_residual(norm_split, tol.eq).into(),
    })
}
