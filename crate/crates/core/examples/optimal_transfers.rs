//! Optimal interpolation/restriction pairs for a B-normal smoother, compared
//! against a batch of random pairs.

use nsamg::bnormal;
use nsamg::random::{self, rng};
use nsamg::twogrid::{self, ErrorOperator, TwoGrid, TwoGridConfig};
use nsamg::ToleranceProfile;

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    let mut g = rng(7);
    let n = 10;
    // K = M^-1 A with eigenvalues inside the unit disc about 1.
    let radii = [0.15, 0.25, 0.35, 0.45, 0.55, 0.6, 0.7, 0.75, 0.8, 0.9];
    let lambdas: Vec<_> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| nsamg::linalg::re(1.0) - faer::c64::from_polar(r, 0.7 * i as f64))
        .collect();
    let (k, _) = bnormal::matrix_with_spectrum(&mut g, &lambdas, 0.5);
    let m_inv = random::near_identity(&mut g, n, 0.4);
    let a = nsamg::linalg::solve(m_inv.as_ref(), k.as_ref());
    let es = bnormal::diagonalize((&m_inv * &a).as_ref(), &tol)?;
    let b = bnormal::sample_admissible_b(&es, 8, &tol)?.b;

    let tg = TwoGrid::new(TwoGridConfig::new(a, m_inv, b, 1, 1, 4)?, tol)?;
    let hat = twogrid::optimal_transfers_hat(&tg.cfg, &tg.tol)?;
    let sharp = twogrid::optimal_transfers_sharp(&tg)?;
    println!("mu_(nc+1) = {:.6}, lambda_(nc+1) = {:.6}", hat.mu_next, sharp.lambda_next);

    let plus = tg.error_norm(ErrorOperator::Plus, &hat.pair, 1, 1)?;
    let south = tg.error_norm(ErrorOperator::South, &sharp.pair, 1, 1)?;
    println!("||E+(P^, R^)||_B = {plus:.6} (predicted {:.6})", hat.predicted_norm(1, 1));
    println!("||E(P#, R#)||_B  = {south:.6} (predicted {:.6}, admissible B: {})", sharp.predicted(1, 1), sharp.admissible);

    for (kind, opt) in [(ErrorOperator::Plus, plus), (ErrorOperator::South, south)] {
        let sweep = twogrid::optimality_sweep(&tg, kind, 1, 1, opt, 500, 99);
        println!("{kind:?}: 500 random pairs, min {:.6}, max {:.6}, none better: {}", sweep.min, sweep.max, sweep.certified);
        for bin in sweep.histogram {
            println!("    [{:.3}, {:.3}) {}", bin.lower, bin.upper, "#".repeat(bin.count / 5));
        }
    }
    Ok(())
}
