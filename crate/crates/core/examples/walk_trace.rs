//! Driving the walk step by step and watching the subspace shrink.

use edgewalk::instances::bernoulli;
use edgewalk::rng::{stream, WALK_STREAM};
use edgewalk::walk::EdgeWalk;
use edgewalk::{indicator_matrix, FractionalColoring, WalkParams};

fn main() -> edgewalk::Result<()> {
    let n = 32;
    let sys = bernoulli(n, 24, 0.5, 2)?;
    // Tight thresholds so that rows become active along the way.
    let rows = indicator_matrix(&sys).normalized().0.with_uniform_threshold(0.5)?;
    let x0 = FractionalColoring::zeros(n);
    let params = WalkParams::new(0.08, n, rows.m())?.seed(2);
    println!("gamma {:.5}, T = {}", params.gamma, params.t_steps);

    let mut walk = EdgeWalk::new(&rows, &x0, &params)?;
    let mut rng = stream(2, WALK_STREAM);
    let mut last = (usize::MAX, usize::MAX);
    while !walk.is_finished() {
        walk.step(&mut rng)?;
        let s = walk.state();
        let now = (s.active_vars().len(), s.active_disc().len());
        if now != last {
            println!("step {:>6}: dim {:>2}, {:>2} vars, {:>2} rows", s.step(), walk.dim(), now.0, now.1);
            last = now;
        }
    }
    let out = walk.finish();
    println!("success {}, contained {}, {} steps", out.success, out.contained, out.steps);
    Ok(())
}
