//! Symmetrized smoothers and the smoothing assumption for damped Jacobi on a
//! convection-diffusion matrix, across a range of damping factors.

use nsamg::harness::problem::{convection_diffusion, Scheme};
use nsamg::{smoother, HpdMatrix, ToleranceProfile};

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    let a = convection_diffusion(24, 20.0, Scheme::Upwind)?;
    let b = HpdMatrix::identity(a.nrows());
    let default = smoother::default_jacobi_omega(a.as_ref())?;
    println!("default Jacobi damping: {default:.4}");
    for omega in [0.25, 0.5, default, 1.0, 1.2] {
        let m_inv = smoother::jacobi_smoother(a.as_ref(), omega)?;
        let bundle = smoother::build_smoother_bundle(a.as_ref(), m_inv.as_ref(), &b, &tol)?;
        let r = smoother::smoothing_assumption_report(&bundle, &b, &tol)?;
        println!(
            "omega = {omega:.4}: ||I - M^-1 A||_B = {:.4}, verdicts {:?}, lambda(M^^-1 B) in [{:.3e}, {:.4}]",
            r.smoothing_norm,
            r.verdicts(),
            r.hat_spectrum.min_eig,
            r.hat_spectrum.max_eig
        );
    }
    Ok(())
}
