//! Full coloring of a random `n x n` system, compared with random colorings.
//!
//! `cargo run --release --example spencer -- [n] [seed]`

use edgewalk::coloring::{spencer_color, SpencerParams};
use edgewalk::instances::bernoulli;
use edgewalk::rng::{stream, BASELINE_STREAM};
use edgewalk::{discrepancy, Coloring};
use rand::Rng;

fn main() -> edgewalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(256, |a| a.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let sys = bernoulli(n, n, 0.5, seed)?;
    let run = spencer_color(&sys, &SpencerParams::new(n, n, seed))?;
    for (r, round) in run.rounds.iter().enumerate() {
        println!(
            "round {r}: {} unfixed, alpha {:.3}, {} attempt(s)",
            round.n_r, round.alpha, round.retries_used
        );
    }
    println!(
        "discrepancy {} (bound {:.1}, sqrt(n) = {:.1})",
        run.report.max_abs,
        run.bound(),
        (n as f64).sqrt()
    );

    let mut rng = stream(seed, BASELINE_STREAM);
    let mut random: Vec<f64> = (0..50)
        .map(|_| {
            let chi = Coloring::new((0..n).map(|_| if rng.random() { 1 } else { -1 }).collect())?;
            Ok(discrepancy(&chi, &sys)?.max_abs)
        })
        .collect::<edgewalk::Result<_>>()?;
    random.sort_by(f64::total_cmp);
    println!("random colorings: min {}, median {}", random[0], random[25]);
    Ok(())
}
