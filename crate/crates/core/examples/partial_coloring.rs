//! One partial coloring of a random set system.
//!
//! `cargo run --release --example partial_coloring -- [n] [seed]`

use edgewalk::coloring::default_alpha;
use edgewalk::instances::bernoulli;
use edgewalk::oracle::verify_partial;
use edgewalk::{indicator_matrix, partial_color, FractionalColoring, PartialColorConfig};

fn main() -> edgewalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(64, |a| a.parse().expect("n"));
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed"));

    let sys = bernoulli(n, n, 0.5, seed)?;
    let c = default_alpha(sys.m(), n);
    let rows = indicator_matrix(&sys).with_uniform_threshold(c)?;
    let x0 = FractionalColoring::zeros(n);

    let config = PartialColorConfig::new(0.08, 60, seed);
    let result = partial_color(&rows, &x0, &config)?;
    let out = &result.outcome;
    println!(
        "feasibility: sum {:.3} <= budget {:.3}",
        result.feasibility.sum, result.feasibility.budget
    );
    println!(
        "attempt {}: {} of {n} coordinates within 0.08 of ±1, {} rows tight, |x|^2 = {:.2}",
        result.attempts, out.n_active_vars, out.n_active_disc, out.final_norm_sq
    );

    let check = verify_partial(out.x.as_slice(), x0.as_slice(), &rows, 0.08, 1e-9)?;
    println!("independent check: {}", if check.ok { "ok" } else { "FAILED" });
    Ok(())
}
