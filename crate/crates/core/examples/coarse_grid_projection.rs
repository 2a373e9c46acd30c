//! Coarse-grid projections: the compatible interpolation `P* = B^-1 A^H R`
//! makes `Pi_A` B-orthogonal; an arbitrary `P` does not.

use nsamg::coarse::{self, TransferPair};
use nsamg::random::{self, rng};
use nsamg::{HpdMatrix, ToleranceProfile};

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    let mut g = rng(5);
    let (n, nc) = (8, 3);
    let a = random::near_identity(&mut g, n, 0.8);
    let b = HpdMatrix::new(random::well_conditioned_hpd(&mut g, n), &tol)?;
    let r = random::gaussian_matrix(&mut g, n, nc);

    let compatible = TransferPair::new(coarse::p_star(a.as_ref(), r.as_ref(), &b, &tol)?, r.clone(), &tol)?;
    let arbitrary = TransferPair::new(random::gaussian_matrix(&mut g, n, nc), r, &tol)?;
    for (name, tp) in [("P = B^-1 A^H R", &compatible), ("random P", &arbitrary)] {
        let report = coarse::check_projection_b_orthogonality(a.as_ref(), tp, &b, &tol)?;
        println!("{name}: ||Pi||_B = {:.6}, ||I - Pi||_B = {:.6}", report.norm, report.complement_norm);
        for (cond, v) in report.conditions() {
            println!("    {cond:<22} holds={:<5} residual={:.2e}", v.holds, v.residual);
        }
    }
    Ok(())
}
