//! B-normality: a diagonalizable matrix is normal in every admissible inner
//! product built from its eigenvectors, and in no inner product once it is
//! perturbed off that structure.

use nsamg::bnormal;
use nsamg::random::rng;
use nsamg::ToleranceProfile;

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    let mut g = rng(3);
    let lambdas = bnormal::real_spectrum(&[0.5, 0.5, 1.0, 2.0, 3.5]);
    let (a, _) = bnormal::matrix_with_spectrum(&mut g, &lambdas, 0.5);
    let es = bnormal::diagonalize(a.as_ref(), &tol)?;
    println!("eigenvalue groups: {:?}", es.groups);

    let adm = bnormal::sample_admissible_b(&es, 11, &tol)?;
    let ch = bnormal::characterize(a.as_ref(), &adm.b, &tol)?;
    println!("admissible B:     verdicts {:?}, commutator residual {:.2e}", ch.verdicts(), ch.commutator.residual);

    let identity = nsamg::HpdMatrix::identity(a.nrows());
    let ch = bnormal::characterize(a.as_ref(), &identity, &tol)?;
    println!("B = I:            verdicts {:?}, commutator residual {:.2e}", ch.verdicts(), ch.commutator.residual);
    Ok(())
}
