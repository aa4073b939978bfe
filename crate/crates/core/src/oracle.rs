//! Brute-force ground truth and an independent check of partial colorings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Coloring, ConstraintSet, SetSystem};

pub const MAX_BRUTE_N: usize = 24;

/// Low bits enumerated sequentially inside one parallel block.
const BLOCK_BITS: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub opt_disc: i64,
    /// Lexicographically smallest optimal coloring (`-1 < +1`).
    pub argmin: Coloring,
    /// Colorings covered, `2^n`; half are evaluated, the rest by `chi -> -chi`.
    pub n_enumerated: u64,
}

/// Exact `disc(S)` by enumerating every coloring with `chi_0 = -1` in Gray-code
/// order, updating set sums incrementally.
///
/// Coordinates `1..n` map to key bits, most significant first, so increasing key
/// order is lexicographic order and ties resolve to the smallest key.
pub fn brute_force_disc(sys: &SetSystem) -> Result<OracleResult> {
    let n = sys.n();
    if n > MAX_BRUTE_N {
        return Err(Error::TooLarge { n, max: MAX_BRUTE_N });
    }
    let bits = n - 1;
    let low = bits.min(BLOCK_BITS);
    let prefixes: u64 = 1 << (bits - low);
    let incidence = sys.incidence();

    let (opt, key) = (0..prefixes)
        .into_par_iter()
        .map(|prefix| enumerate_block(sys, &incidence, bits, low, prefix))
        .min()
        .expect("at least one block");

    let mut chi = vec![-1i8; n];
    for (i, c) in chi.iter_mut().enumerate().skip(1) {
        if key >> (n - 1 - i) & 1 == 1 {
            *c = 1;
        }
    }
    Ok(OracleResult {
        opt_disc: opt,
        argmin: Coloring::new(chi)?,
        n_enumerated: 1u64 << n,
    })
}

/// Minimum `(disc, key)` over keys `(prefix << low) | g` for all `low`-bit `g`.
fn enumerate_block(
    sys: &SetSystem,
    incidence: &[Vec<usize>],
    bits: usize,
    low: usize,
    prefix: u64,
) -> (i64, u64) {
    let n = sys.n();
    let base = prefix << low;
    let color = |i: usize, key: u64| -> i64 {
        if i == 0 || key >> (n - 1 - i) & 1 == 0 {
            -1
        } else {
            1
        }
    };
    let mut sums: Vec<i64> = sys
        .sets()
        .iter()
        .map(|s| s.iter().map(|&i| color(i, base)).sum())
        .collect();
    let max_abs = |sums: &[i64]| sums.iter().map(|s| s.abs()).max().unwrap_or(0);

    let mut best = (max_abs(&sums), base);
    let mut key = base;
    for k in 1u64..(1 << low) {
        let bit = k.trailing_zeros() as usize;
        key ^= 1 << bit;
        let i = bits - bit;
        let delta = 2 * color(i, key);
        for &j in &incidence[i] {
            sums[j] += delta;
        }
        let d = max_abs(&sums);
        if (d, key) < best {
            best = (d, key);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialVerification {
    /// Condition (i): every row within `c_j ||v_j||` (plus slack).
    pub within_thresholds: bool,
    /// Indices of rows violating condition (i).
    pub violating: Vec<usize>,
    pub in_cube: bool,
    pub n_near_integral: usize,
    /// Condition (ii): at least `n / 2` coordinates with `|x_i| >= 1 - delta`.
    pub enough_fixed: bool,
    pub ok: bool,
}

/// Checks a partial coloring directly from `x`, `x0` and the rows.
pub fn verify_partial(
    x: &[f64],
    x0: &[f64],
    constraints: &ConstraintSet,
    delta: f64,
    eps_slack: f64,
) -> Result<PartialVerification> {
    let n = constraints.n();
    for len in [x.len(), x0.len()] {
        if len != n {
            return Err(Error::Dimension {
                expected: n,
                actual: len,
            });
        }
    }
    let mut violating = Vec::new();
    for j in 0..constraints.m() {
        let row = constraints.row(j);
        let mut ip = 0.0;
        let mut sq = 0.0;
        for i in 0..n {
            ip += row[i] * (x[i] - x0[i]);
            sq += row[i] * row[i];
        }
        let len = sq.sqrt();
        let limit = constraints.thresholds()[j] * len + eps_slack * len.max(1.0);
        if ip.abs() > limit {
            violating.push(j);
        }
    }
    let in_cube = x.iter().all(|v| v.abs() <= 1.0 + eps_slack);
    let n_near_integral = x.iter().filter(|v| v.abs() >= 1.0 - delta).count();
    let enough_fixed = 2 * n_near_integral >= n;
    let within_thresholds = violating.is_empty();
    Ok(PartialVerification {
        within_thresholds,
        violating,
        in_cube,
        n_near_integral,
        enough_fixed,
        ok: within_thresholds && in_cube && enough_fixed,
    })
}
