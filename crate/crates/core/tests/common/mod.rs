//! Seeded instance generators shared by the integration tests.

#![allow(dead_code)]

use faer::c64;
use rand::Rng;

use nsamg::bnormal;
use nsamg::bspace::{self, HpdMatrix};
use nsamg::linalg::{self, identity, re, ComplexMatrix};
use nsamg::random::{self, rng};
use nsamg::ToleranceProfile;

pub fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// Eigenvalues `1 - r_k e^{i theta_k}` with distinct radii `r_k` in
/// `[0.1, 0.9]` separated by at least `gap`, so that `|1 - lambda|` orders
/// them without ties and every eigenvalue lies in the unit disc about 1.
pub fn smoothing_disc_spectrum<R: Rng + ?Sized>(g: &mut R, n: usize, gap: f64, real: bool) -> Vec<c64> {
    let mut radii: Vec<f64> = Vec::with_capacity(n);
    while radii.len() < n {
        let r = g.gen_range(0.1..0.9);
        if radii.iter().all(|s| (s - r).abs() >= gap) {
            radii.push(r);
        }
    }
    radii
        .into_iter()
        .map(|r| {
            let theta = if real {
                if g.gen_bool(0.5) { 0.0 } else { std::f64::consts::PI }
            } else {
                g.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
            };
            re(1.0) - c64::from_polar(r, theta)
        })
        .collect()
}

/// A B-normal smoothing setup: `K = M^-1 A` with the given spectrum, a random
/// well-conditioned `M^-1`, `A = M K`, and `B` sampled from the admissible
/// set of `K`.
pub struct NormalSetup {
    pub a: ComplexMatrix,
    pub m_inv: ComplexMatrix,
    pub k: ComplexMatrix,
    pub b: HpdMatrix,
}

pub fn normal_setup(seed: u64, lambdas: &[c64]) -> NormalSetup {
    let mut g = rng(seed);
    let n = lambdas.len();
    let (k, _) = bnormal::matrix_with_spectrum(&mut g, lambdas, 0.5);
    let m_inv = random::near_identity(&mut g, n, 0.4);
    let a = linalg::solve(m_inv.as_ref(), k.as_ref());
    let k = &m_inv * &a;
    let es = bnormal::diagonalize(k.as_ref(), &tol()).expect("constructed K is diagonalizable");
    let b = bnormal::sample_admissible_b(&es, seed ^ 0x5eed, &tol()).expect("admissible B").b;
    NormalSetup { a, m_inv, k, b }
}

/// A general (not necessarily B-normal) setup with a prescribed smoothing
/// norm `||I - M^-1 A||_B = s`: `K = I - S` with `||S||_B = s`, `M^-1 = K A^-1`.
pub fn setup_with_smoothing_norm(seed: u64, n: usize, s: f64) -> (ComplexMatrix, ComplexMatrix, HpdMatrix) {
    let mut g = rng(seed);
    let a = random::near_identity(&mut g, n, 0.8);
    let b = HpdMatrix::new(random::well_conditioned_hpd(&mut g, n), &tol()).unwrap();
    let raw = random::gaussian_matrix(&mut g, n, n);
    let scale = s / bspace::b_mat_norm(raw.as_ref(), &b).unwrap();
    let smoothing = linalg::scale(raw.as_ref(), re(scale));
    let k = identity(n) - smoothing;
    let m_inv = &k * linalg::inverse(a.as_ref());
    (a, m_inv, b)
}

/// `A + eps ||A||_F G / ||G||_F` for complex Gaussian `G`.
pub fn perturb(seed: u64, a: &ComplexMatrix, eps: f64) -> ComplexMatrix {
    let mut g = rng(seed);
    let noise = random::gaussian_matrix(&mut g, a.nrows(), a.ncols());
    let scale = eps * linalg::fro(a.as_ref()) / linalg::fro(noise.as_ref());
    a + linalg::scale(noise.as_ref(), re(scale))
}
