//! Coloring a system where every element lies in at most `t` sets.
//!
//! `cargo run --release --example beck_fiala -- [n] [t] [seed]`

use edgewalk::coloring::{beck_fiala_color, beck_fiala_series, BeckFialaParams};
use edgewalk::instances::low_degree;
use edgewalk::{discrepancy, Coloring};

fn main() -> edgewalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(128, |a| a.parse().expect("n"));
    let t: usize = args.next().map_or(4, |a| a.parse().expect("t"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let sys = low_degree(n, n, t, seed)?;
    let params = BeckFialaParams::new(t, n, seed)?;
    println!("C = {}, series {:.4} < 1/16", params.big_c, beck_fiala_series(params.big_c));
    println!("max frequency {}, delta = {}", sys.max_frequency(), params.delta);

    let run = beck_fiala_color(&sys, &params)?;
    let ones = discrepancy(&Coloring::all_ones(n), &sys)?.max_abs;
    println!(
        "discrepancy {} in {} round(s), bound {:.1}, all-ones coloring {ones}",
        run.report.max_abs,
        run.rounds.len(),
        run.bound()
    );
    Ok(())
}
