//! Many independent walks on one instance, against random colorings.
//!
//! Set `EDGEWALK_THREADS` to cap parallelism.
//! `cargo run --release --example benchmark -- [runs]`

use edgewalk::cli::bench;
use edgewalk::coloring::default_alpha;
use edgewalk::instances::{bernoulli, Instance};
use edgewalk::{indicator_matrix, PartialColorConfig};

fn main() -> edgewalk::Result<()> {
    let runs: u64 = std::env::args().nth(1).map_or(200, |a| a.parse().expect("runs"));
    let sys = bernoulli(64, 64, 0.5, 1)?;
    let rows = indicator_matrix(&sys).with_uniform_threshold(default_alpha(64, 64))?;
    let report = bench(&Instance::Sets(sys), &rows, &PartialColorConfig::new(0.08, 1, 1), runs, 1)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(())
}
