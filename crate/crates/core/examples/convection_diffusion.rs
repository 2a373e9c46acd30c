//! Two-grid bounds for a 1D convection-diffusion operator as the convection
//! strength grows, with `B = I` and damped Jacobi.
//!
//! Upwinding makes `M^-1 A` increasingly non-normal; once its eigenvector
//! matrix is badly conditioned the eigenvector-based transfers can no longer
//! be computed reliably, and the construction reports the mismatch instead
//! of returning them.

use nsamg::harness::problem::{convection_diffusion, Scheme};
use nsamg::twogrid::{self, ErrorOperator, TwoGrid, TwoGridConfig};
use nsamg::{smoother, HpdMatrix, ToleranceProfile};

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    let (n, nc) = (32, 8);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "beta", "cond(V)", "||S||_B", "||E+||_B", "rho(E#)");
    for beta in [0.0, 5.0, 20.0, 40.0, 80.0] {
        let a = convection_diffusion(n, beta, Scheme::Upwind)?;
        let omega = smoother::default_jacobi_omega(a.as_ref())?;
        let m_inv = smoother::jacobi_smoother(a.as_ref(), omega)?;
        let tg = TwoGrid::new(TwoGridConfig::new(a, m_inv, HpdMatrix::identity(n), 1, 1, nc)?, tol)?;
        let cond = nsamg::bnormal::diagonalize(tg.k.as_ref(), &tol)?.cond_w;
        let s_norm = nsamg::bspace::b_mat_norm(tg.s.as_ref(), tg.b())?;
        let plus = match twogrid::optimal_transfers_hat(&tg.cfg, &tol) {
            Ok(hat) => format!("{:.6}", tg.error_norm(ErrorOperator::Plus, &hat.pair, 1, 1)?),
            Err(e) => format!("n/a ({e})"),
        };
        let rho = match twogrid::optimal_transfers_sharp(&tg) {
            Ok(sharp) => format!("{:.6}", sharp.rho),
            Err(e) => {
                eprintln!("beta = {beta}: {e}");
                "n/a".to_string()
            }
        };
        println!("{beta:>6} {cond:>10.2e} {s_norm:>10.6} {plus:>10} {rho:>10}");
    }
    Ok(())
}
