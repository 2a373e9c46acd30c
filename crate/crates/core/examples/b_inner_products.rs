//! Inner products, norms and adjoints with respect to a random HPD `B`.

use nsamg::bspace::{self, HpdMatrix};
use nsamg::random::{self, rng};
use nsamg::ToleranceProfile;

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    let mut g = rng(1);
    let n = 5;
    let b = HpdMatrix::new(random::well_conditioned_hpd(&mut g, n), &tol)?;
    let a = random::gaussian_matrix(&mut g, n, n);
    let x = random::gaussian_vector(&mut g, n);
    let y = random::gaussian_vector(&mut g, n);

    let adj = bspace::b_adjoint(a.as_ref(), &b)?;
    let lhs = bspace::b_inner((&a * &x).as_ref(), y.as_ref(), &b)?;
    let rhs = bspace::b_inner(x.as_ref(), (&adj * &y).as_ref(), &b)?;
    println!("cond(B)                  = {:.3}", b.condition());
    println!("<A x, y>_B               = {lhs:.12}");
    println!("<x, A^+ y>_B             = {rhs:.12}");

    let norm = bspace::b_mat_norm(a.as_ref(), &b)?;
    let lam = bspace::lambda_max_real((&adj * &a).as_ref())?;
    println!("||A||_B^2                = {:.12}", norm * norm);
    println!("lambda_max(A^+ A)        = {lam:.12}");
    println!("||A^H||_2 (for contrast) = {:.12}", nsamg::linalg::spectral_norm(a.as_ref())?);
    Ok(())
}
