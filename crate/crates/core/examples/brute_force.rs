//! Exact discrepancy of small systems against the walk-based coloring.
//!
//! `cargo run --release --example brute_force -- [n]`

use edgewalk::coloring::{spencer_color, SpencerParams};
use edgewalk::instances::bernoulli;
use edgewalk::oracle::brute_force_disc;
use edgewalk::SetSystem;

fn main() -> edgewalk::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(14, |a| a.parse().expect("n"));

    let cycle = SetSystem::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]])?;
    let r = brute_force_disc(&cycle)?;
    println!("3-cycle: disc {} at {:?}", r.opt_disc, r.argmin.as_slice());

    println!("seed  optimum  walk  bound");
    for seed in 0..6 {
        let sys = bernoulli(n, n, 0.5, seed)?;
        let opt = brute_force_disc(&sys)?;
        let run = spencer_color(&sys, &SpencerParams::new(n, n, seed))?;
        println!("{seed:>4}  {:>7}  {:>4}  {:>5.1}", opt.opt_disc, run.report.max_abs, run.bound());
    }
    Ok(())
}
