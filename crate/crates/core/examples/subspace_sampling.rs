//! Gaussian sampling on a subspace given by orthogonality constraints.

use edgewalk::rng::{stream, WALK_STREAM};
use edgewalk::subspace::complement_basis;

fn main() {
    let n = 8;
    // Orthogonal to the all-ones vector and to e_0.
    let mut e0 = vec![0.0; n];
    e0[0] = 1.0;
    let basis = complement_basis(n, &[vec![1.0; n], e0]);
    println!("dim {} of {n}, orthonormality error {:.1e}", basis.dim(), basis.orthonormality_error());

    let draws = 20_000;
    let mut rng = stream(3, WALK_STREAM);
    let mut var = vec![0.0; n];
    let mut max_sum: f64 = 0.0;
    for _ in 0..draws {
        let g = basis.sample_gaussian(&mut rng);
        max_sum = max_sum.max(g.iter().sum::<f64>().abs());
        for (v, x) in var.iter_mut().zip(&g) {
            *v += x * x / draws as f64;
        }
    }
    println!("per-coordinate variance: {:.3?}", var);
    println!("sum of variances {:.3} (expect {})", var.iter().sum::<f64>(), basis.dim());
    println!("largest |<g, 1>| seen: {max_sum:.1e}");

    let smaller = basis.downdate(&[0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    println!("after one more constraint: dim {}", smaller.dim());
}
