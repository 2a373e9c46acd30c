//! Seeded random sources for sampling inner products, transfer pairs and
//! test problems. Every sampler takes its generator explicitly.

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{identity, ComplexMatrix, ComplexVector};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for stream `index` of `root` (splitmix64).
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = Mat::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

pub fn real_gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> ComplexMatrix {
    let mut m = Mat::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = c64::new(rng.sample(StandardNormal), 0.0);
        }
    }
    m
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    ComplexVector::from_fn(n, |_| complex_normal(rng))
}

/// `G G^H + shift * I` with `G` standard complex Gaussian.
pub fn hpd_block<R: Rng + ?Sized>(rng: &mut R, n: usize, shift: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    &g * g.adjoint() + identity(n) * faer::Scale(c64::new(shift, 0.0))
}

/// Random HPD matrix `G G^H / n + I`, condition number of order ten.
pub fn well_conditioned_hpd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let scale = c64::new(1.0 / n as f64, 0.0);
    (&g * g.adjoint()) * faer::Scale(scale) + identity(n)
}

/// `I + spread * G / ||G||_2`: a random matrix within `spread` of the identity.
pub fn near_identity<R: Rng + ?Sized>(rng: &mut R, n: usize, spread: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let norm = crate::linalg::spectral_norm(g.as_ref()).unwrap_or(1.0).max(1e-300);
    identity(n) + g * faer::Scale(c64::new(spread / norm, 0.0))
}
