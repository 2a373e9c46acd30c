//! The three built-in 3x3 examples: optimal transfers and their error norms.

use nsamg::harness::builtin;
use nsamg::twogrid::{self, ErrorOperator, TwoGrid, TwoGridConfig};
use nsamg::{HpdMatrix, ToleranceProfile};

fn main() -> nsamg::Result<()> {
    let tol = ToleranceProfile::default();
    for id in 1..=3u8 {
        let ex = builtin::builtin(id).expect("ids 1..=3 exist");
        let b = HpdMatrix::new(ex.b.clone(), &tol)?;
        let cfg = TwoGridConfig::new(ex.a.clone(), ex.m_inv.clone(), b, ex.nu1, ex.nu2, ex.nc)?;
        let tg = TwoGrid::new(cfg, tol)?;
        println!("example {id}: n_c = {}, (nu1, nu2) = ({}, {})", ex.nc, ex.nu1, ex.nu2);
        match twogrid::optimal_transfers_hat(&tg.cfg, &tol) {
            Ok(hat) => {
                let norm = tg.error_norm(ErrorOperator::Plus, &hat.pair, 1, 1)?;
                println!("    hat pair:   mu = {:?}, ||E+^(1,1)||_B = {norm:.10}", hat.spectrum.mus);
            }
            Err(e) => println!("    hat pair unavailable: {e}"),
        }
        match twogrid::optimal_transfers_sharp(&tg) {
            Ok(sharp) => {
                let norm = tg.error_norm(ErrorOperator::South, &sharp.pair, 1, 1)?;
                println!("    sharp pair: rho = {:.10}, ||E^(1,1)||_B = {norm:.10}, admissible B: {}", sharp.rho, sharp.admissible);
            }
            Err(e) => println!("    sharp pair unavailable: {e}"),
        }
        for s in &ex.stated {
            println!("    stated {} = {:.10}", s.name, s.value);
        }
    }
    Ok(())
}
