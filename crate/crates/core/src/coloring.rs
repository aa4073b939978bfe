//! Full colorings built from repeated partial colorings.
//!
//! Each round restricts the rows to the coordinates not yet fixed, runs
//! [`partial_color`] from the current point, and fixes every coordinate that
//! ends within `delta` of `±1`. At least half the remaining coordinates are
//! fixed per round, so `O(log n)` rounds suffice. The fractional result is then
//! rounded to `±1`: randomly (unbiased, with a rejection test) for
//! [`spencer_color`], by sign for [`beck_fiala_color`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    discrepancy, indicator_matrix, Coloring, ConstraintSet, DiscrepancyReport, FractionalColoring,
    SetSystem,
};
use crate::rng::{mix64, stream, ROUNDING_STREAM};
use crate::walk::{partial_color, PartialColorConfig, Sampler, DEFAULT_BIG_C, DEFAULT_MAX_RETRIES};

/// Beck-Fiala threshold constant.
pub const DEFAULT_BIG_C_BF: f64 = 5.0;

/// Salt separating per-round seeds from retry seeds.
const ROUND_SALT: u64 = 0x726f_756e_6473; // "rounds"

/// `delta = 1 / (8 ln m)`, or `1/64` when `m < e^2`.
pub fn default_delta(m: usize) -> f64 {
    let m = m as f64;
    if m < std::f64::consts::E.powi(2) {
        1.0 / 64.0
    } else {
        1.0 / (8.0 * m.ln())
    }
}

/// `alpha(m, n) = 4 sqrt(max(0, ln(32 m / n)))`, so that `m exp(-alpha^2/16) <= n/32`.
pub fn default_alpha(m: usize, n_r: usize) -> f64 {
    4.0 * (32.0 * m as f64 / n_r as f64).ln().max(0.0).sqrt()
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

/// `2 ceil(log2 n)` rounds, at least one.
pub fn default_max_rounds(n: usize) -> usize {
    (2 * ceil_log2(n)).max(1)
}

/// `8 ceil(log2 n)` walk attempts per round, at least eight.
pub fn default_round_retries(n: usize) -> usize {
    (8 * ceil_log2(n)).max(8)
}

#[derive(Clone, Debug)]
pub struct SpencerParams {
    pub delta: f64,
    /// Threshold rule `alpha(m, n_r)` applied to every unit-normalized restricted row.
    pub alpha: fn(usize, usize) -> f64,
    pub max_rounds: usize,
    pub round_retries: usize,
    pub rounding_retries: usize,
    pub seed: u64,
    pub big_c: f64,
    pub sampler: Sampler,
}

impl SpencerParams {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self {
            delta: default_delta(m),
            alpha: default_alpha,
            max_rounds: default_max_rounds(n),
            round_retries: default_round_retries(n),
            rounding_retries: 64,
            seed,
            big_c: DEFAULT_BIG_C,
            sampler: Sampler::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BeckFialaParams {
    pub degree_t: usize,
    pub big_c: f64,
    pub delta: f64,
    pub max_rounds: usize,
    pub round_retries: usize,
    pub seed: u64,
    pub walk_big_c: f64,
    pub sampler: Sampler,
}

impl BeckFialaParams {
    /// Defaults for a universe of size `n`: `C = 5`, `delta = min(1/n, 1/16)`.
    pub fn new(degree_t: usize, n: usize, seed: u64) -> Result<Self> {
        Self::with_big_c(degree_t, n, seed, DEFAULT_BIG_C_BF)
    }

    pub fn with_big_c(degree_t: usize, n: usize, seed: u64, big_c: f64) -> Result<Self> {
        let series = beck_fiala_series(big_c);
        if !(series < 1.0 / 16.0) {
            return Err(Error::Validation(format!(
                "C = {big_c} gives series {series}, not below 1/16"
            )));
        }
        if degree_t == 0 {
            return Err(Error::Validation("degree t must be positive".into()));
        }
        Ok(Self {
            degree_t,
            big_c,
            delta: (1.0 / n.max(1) as f64).min(1.0 / 16.0),
            max_rounds: default_max_rounds(n),
            round_retries: default_round_retries(n),
            seed,
            walk_big_c: DEFAULT_BIG_C,
            sampler: Sampler::default(),
        })
    }

    /// Reported bound `2 C sqrt(t) ceil(log2 n) + n delta`.
    pub fn bound(&self, n: usize) -> f64 {
        2.0 * self.big_c * (self.degree_t as f64).sqrt() * ceil_log2(n) as f64
            + n as f64 * self.delta
    }
}

/// `sum_r 2^-r exp(-C^2 2^(r+1) / 16)`, summed until terms vanish.
pub fn beck_fiala_series(big_c: f64) -> f64 {
    (0..64)
        .map(|r| (-(big_c * big_c) * 2f64.powi(r + 1) / 16.0).exp() / 2f64.powi(r))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub n_r: usize,
    pub alpha: f64,
    pub retries_used: usize,
}

/// A finished coloring together with everything needed to audit it.
#[derive(Clone, Debug)]
pub struct ColoringRun {
    pub coloring: Coloring,
    pub report: DiscrepancyReport,
    pub fractional: FractionalColoring,
    pub rounds: Vec<RoundSummary>,
    /// Round in which each coordinate was fixed; `None` if never fixed.
    pub fixed_in_round: Vec<Option<usize>>,
    /// Fractional point after each round.
    pub round_points: Vec<Vec<f64>>,
    pub rounding_attempts: usize,
    pub seed: u64,
}

/// Machine-readable pipeline report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub chi: Vec<i8>,
    pub discrepancy: f64,
    pub bound: f64,
    pub rounds: Vec<RoundSummary>,
    pub seed: u64,
}

impl ColoringRun {
    pub fn bound(&self) -> f64 {
        self.report.bound.unwrap_or(f64::INFINITY)
    }

    pub fn pipeline_report(&self) -> PipelineReport {
        PipelineReport {
            chi: self.coloring.as_slice().to_vec(),
            discrepancy: self.report.max_abs,
            bound: self.bound(),
            rounds: self.rounds.clone(),
            seed: self.seed,
        }
    }
}

struct Recursion {
    x: Vec<f64>,
    rounds: Vec<RoundSummary>,
    fixed_in_round: Vec<Option<usize>>,
    round_points: Vec<Vec<f64>>,
    drift: f64,
}

struct RoundConfig {
    delta: f64,
    max_rounds: usize,
    retries: usize,
    seed: u64,
    big_c: f64,
    sampler: Sampler,
    require_feasible: bool,
}

/// Runs the rounds. `thresholds(restricted, n_r)` returns the per-row thresholds,
/// the value reported as the round's `alpha`, and the round's drift bound.
fn recurse(
    rows: &ConstraintSet,
    cfg: &RoundConfig,
    thresholds: impl Fn(&ConstraintSet, usize) -> (Vec<f64>, f64, f64),
) -> Result<Recursion> {
    let n = rows.n();
    let mut x = vec![0.0; n];
    let mut fixed_in_round: Vec<Option<usize>> = vec![None; n];
    let mut rounds = Vec::new();
    let mut round_points = Vec::new();
    let mut drift = 0.0;

    for round in 0..cfg.max_rounds {
        let unfixed: Vec<usize> = (0..n).filter(|&i| fixed_in_round[i].is_none()).collect();
        let n_r = unfixed.len();
        if n_r == 0 {
            break;
        }
        let (cs, alpha, round_drift) = {
            let restricted = rows.restrict(&unfixed);
            let (c, alpha, d) = thresholds(&restricted, n_r);
            (restricted.with_thresholds(c)?, alpha, d)
        };
        let start = FractionalColoring::from_vec_unchecked(unfixed.iter().map(|&i| x[i]).collect());
        let mut config =
            PartialColorConfig::new(cfg.delta, cfg.retries, mix64(cfg.seed ^ ROUND_SALT, round as u64));
        config.big_c = cfg.big_c;
        config.sampler = cfg.sampler;
        config.require_feasible = cfg.require_feasible;
        let result = partial_color(&cs, &start, &config).map_err(|e| Error::RoundFailed {
            round,
            unfixed: n_r,
            source: Box::new(e),
        })?;

        let xr = result.outcome.x.as_slice();
        let mut newly = 0;
        for (k, &i) in unfixed.iter().enumerate() {
            x[i] = xr[k];
            if xr[k].abs() >= 1.0 - cfg.delta {
                fixed_in_round[i] = Some(round);
                newly += 1;
            }
        }
        debug_assert!(2 * newly >= n_r, "round {round} fixed {newly} of {n_r}");
        drift += round_drift;
        rounds.push(RoundSummary {
            n_r,
            alpha,
            retries_used: result.attempts,
        });
        round_points.push(x.clone());
    }
    Ok(Recursion {
        x,
        rounds,
        fixed_in_round,
        round_points,
        drift,
    })
}

/// Full coloring with discrepancy at most `sum_r alpha(m, n_r) sqrt(n_r) + sqrt(n)`.
pub fn spencer_color(sys: &SetSystem, params: &SpencerParams) -> Result<ColoringRun> {
    let rows = indicator_matrix(sys);
    let m = sys.m();
    let alpha_rule = params.alpha;
    let cfg = RoundConfig {
        delta: params.delta,
        max_rounds: params.max_rounds,
        retries: params.round_retries,
        seed: params.seed,
        big_c: params.big_c,
        sampler: params.sampler,
        require_feasible: true,
    };
    let rec = recurse(&rows, &cfg, |restricted, n_r| {
        let alpha = alpha_rule(m, n_r);
        (vec![alpha; restricted.m()], alpha, alpha * (n_r as f64).sqrt())
    })?;

    let fractional = FractionalColoring::from_vec_unchecked(rec.x);
    let mut rng = stream(params.seed, ROUNDING_STREAM);
    let (coloring, rounding_attempts) =
        round_randomized(&fractional, &rows, params.rounding_retries, &mut rng)?;
    let bound = rec.drift + (sys.n() as f64).sqrt();
    let report = discrepancy(&coloring, sys)?.with_bound(bound);
    Ok(ColoringRun {
        coloring,
        report,
        fractional,
        rounds: rec.rounds,
        fixed_in_round: rec.fixed_in_round,
        round_points: rec.round_points,
        rounding_attempts,
        seed: params.seed,
    })
}

/// Unbiased rounding: `chi_i = +1` with probability `(1 + x_i) / 2`. A sample is
/// accepted when `|<chi - x, v_j>| <= sqrt(n)` for every row; returns the
/// coloring and the number of samples drawn.
pub fn round_randomized<R: Rng + ?Sized>(
    x: &FractionalColoring,
    constraints: &ConstraintSet,
    retries: usize,
    rng: &mut R,
) -> Result<(Coloring, usize)> {
    let n = x.len();
    if constraints.n() != n {
        return Err(Error::Dimension {
            expected: constraints.n(),
            actual: n,
        });
    }
    let limit = (n as f64).sqrt();
    let xs = x.as_slice();
    let mut diff = vec![0.0; n];
    for attempt in 1..=retries {
        let chi: Vec<i8> = xs
            .iter()
            .map(|&v| {
                let p = (1.0 + v.clamp(-1.0, 1.0)) / 2.0;
                if rng.random::<f64>() < p {
                    1
                } else {
                    -1
                }
            })
            .collect();
        for i in 0..n {
            diff[i] = chi[i] as f64 - xs[i];
        }
        let ok = constraints
            .rows()
            .all(|row| row.iter().zip(&diff).map(|(a, b)| a * b).sum::<f64>().abs() <= limit);
        if ok {
            return Ok((Coloring::new(chi)?, attempt));
        }
    }
    Err(Error::RoundingExhausted { attempts: retries })
}

/// Full coloring for systems where every element lies in at most `t` sets, with
/// discrepancy at most `2 C sqrt(t) ceil(log2 n) + n delta`.
///
/// Round thresholds are `c_j = C sqrt(t) / ||v_j||` on the restricted rows, so
/// every round moves each set sum by at most `C sqrt(t)`. The walk runs even
/// when these thresholds miss the feasibility condition.
pub fn beck_fiala_color(sys: &SetSystem, params: &BeckFialaParams) -> Result<ColoringRun> {
    let freq = sys.max_frequency();
    if freq > params.degree_t {
        return Err(Error::Validation(format!(
            "an element lies in {freq} sets, more than t = {}",
            params.degree_t
        )));
    }
    let rows = indicator_matrix(sys);
    let per_round = params.big_c * (params.degree_t as f64).sqrt();
    let cfg = RoundConfig {
        delta: params.delta,
        max_rounds: params.max_rounds,
        retries: params.round_retries,
        seed: params.seed,
        big_c: params.walk_big_c,
        sampler: params.sampler,
        require_feasible: false,
    };
    let rec = recurse(&rows, &cfg, |restricted, _| {
        let c = restricted
            .norms()
            .iter()
            .map(|&len| if len > 0.0 { per_round / len } else { 0.0 })
            .collect();
        (c, per_round, per_round)
    })?;

    let fractional = FractionalColoring::from_vec_unchecked(rec.x);
    let coloring = fractional.sign_coloring();
    let report = discrepancy(&coloring, sys)?.with_bound(params.bound(sys.n()));
    Ok(ColoringRun {
        coloring,
        report,
        fractional,
        rounds: rec.rounds,
        fixed_in_round: rec.fixed_in_round,
        round_points: rec.round_points,
        rounding_attempts: 0,
        seed: params.seed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryResult {
    pub x: FractionalColoring,
    /// `x` with every coordinate within `delta` of `±1` replaced by its sign.
    pub snapped: Vec<f64>,
    pub delta: f64,
    pub attempts: usize,
}

/// Partial coloring with per-set targets: at least half the coordinates end within
/// `delta = min(1/n, 1/16)` of `±1` and `|sum_{i in S} x_i| <= Delta_S` for every
/// set, provided `sum_S exp(-Delta_S^2 / (16 |S|)) <= n / 16`.
pub fn partial_coloring_corollary(sys: &SetSystem, targets: &[f64], seed: u64) -> Result<CorollaryResult> {
    if targets.len() != sys.m() {
        return Err(Error::Dimension {
            expected: sys.m(),
            actual: targets.len(),
        });
    }
    if let Some(j) = targets.iter().position(|t| !(*t >= 0.0)) {
        return Err(Error::Validation(format!("target {j} must be nonnegative")));
    }
    let n = sys.n();
    let rows = indicator_matrix(sys);
    let c: Vec<f64> = rows
        .norms()
        .iter()
        .zip(targets)
        .map(|(&len, &t)| if len > 0.0 { t / len } else { 0.0 })
        .collect();
    let cs = rows.with_thresholds(c)?;
    let delta = (1.0 / n as f64).min(1.0 / 16.0);
    let config = PartialColorConfig::new(delta, DEFAULT_MAX_RETRIES, seed);
    let result = partial_color(&cs, &FractionalColoring::zeros(n), &config)?;
    let snapped = result.outcome.x.snap(delta);
    Ok(CorollaryResult {
        x: result.outcome.x,
        snapped,
        delta,
        attempts: result.attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_feasibility;

    #[test]
    fn delta_rule() {
        assert_eq!(default_delta(1), 1.0 / 64.0);
        assert_eq!(default_delta(7), 1.0 / 64.0);
        assert!((default_delta(8) - 1.0 / (8.0 * 8f64.ln())).abs() < 1e-15);
        assert!(default_delta(8) < 0.1);
        assert!((default_delta(1024) - 0.018_033_688).abs() < 1e-8);
    }

    #[test]
    fn alpha_rule_is_always_feasible() {
        for m in [1usize, 5, 12, 64, 1000, 5000] {
            for n_r in [1usize, 2, 7, 64, 512, 4096] {
                let a = default_alpha(m, n_r);
                assert!(a >= 0.0);
                let f = check_feasibility(&vec![a; m], n_r).unwrap();
                assert!(f.feasible, "m={m} n_r={n_r}");
                if 32 * m > n_r {
                    assert!((f.sum - n_r as f64 / 32.0).abs() < 1e-9 * n_r as f64);
                }
            }
        }
        assert_eq!(default_alpha(1, 64), 0.0);
        assert!((default_alpha(64, 64) - 4.0 * 32f64.ln().sqrt()).abs() < 1e-12);
    }

    #[test]
    fn round_defaults() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
        assert_eq!(default_max_rounds(1024), 20);
        assert_eq!(default_max_rounds(1), 1);
        assert_eq!(default_round_retries(256), 64);
    }

    #[test]
    fn beck_fiala_series_value() {
        let s = beck_fiala_series(5.0);
        // exp(-25/8) + exp(-25/4)/2 + exp(-12.5)/4 + ...
        let oracle = (-3.125f64).exp() + (-6.25f64).exp() / 2.0 + (-12.5f64).exp() / 4.0;
        assert!((s - oracle).abs() < 1e-9);
        assert!((s - 0.0449).abs() < 5e-4);
        assert!(s < 1.0 / 16.0);
        assert!(BeckFialaParams::with_big_c(4, 100, 0, 3.0).is_err());
    }

    #[test]
    fn rounding_integral_point_is_exact() {
        let x = FractionalColoring::new(vec![1.0, -1.0, 1.0]).unwrap();
        let sys = SetSystem::new(3, vec![vec![0, 1, 2]]).unwrap();
        let mut rng = stream(3, ROUNDING_STREAM);
        for _ in 0..20 {
            let (chi, attempts) =
                round_randomized(&x, &indicator_matrix(&sys), 1, &mut rng).unwrap();
            assert_eq!(chi.as_slice(), &[1, -1, 1]);
            assert_eq!(attempts, 1);
        }
    }

    #[test]
    fn rounding_is_unbiased() {
        let n = 4;
        let x = FractionalColoring::new(vec![0.9; n]).unwrap();
        let none = ConstraintSet::new(n, vec![]).unwrap();
        let mut rng = stream(4, ROUNDING_STREAM);
        let draws = 100_000;
        let mut sum = vec![0.0; n];
        for _ in 0..draws {
            let (chi, _) = round_randomized(&x, &none, 1, &mut rng).unwrap();
            for (s, &c) in sum.iter_mut().zip(chi.as_slice()) {
                *s += c as f64;
            }
        }
        for s in sum {
            assert!((s / draws as f64 - 0.9).abs() <= 0.01);
        }
    }

    #[test]
    fn rounding_exhaustion() {
        // Every sample deviates by 10 > sqrt(1).
        let x = FractionalColoring::zeros(1);
        let rows = ConstraintSet::new(1, vec![vec![10.0]]).unwrap();
        let mut rng = stream(5, ROUNDING_STREAM);
        assert!(matches!(
            round_randomized(&x, &rows, 3, &mut rng),
            Err(Error::RoundingExhausted { attempts: 3 })
        ));
    }

    #[test]
    fn singletons_get_discrepancy_one() {
        let sys = SetSystem::singletons(16).unwrap();
        let run = spencer_color(&sys, &SpencerParams::new(16, 16, 11)).unwrap();
        assert_eq!(run.report.max_abs, 1.0);
        assert!(run.report.satisfied);
    }

    #[test]
    fn frequency_violation_rejected() {
        let sys = SetSystem::new(3, vec![vec![0, 1], vec![0, 2], vec![0]]).unwrap();
        let params = BeckFialaParams::new(2, 3, 0).unwrap();
        assert!(matches!(beck_fiala_color(&sys, &params), Err(Error::Validation(_))));
    }

    #[test]
    fn corollary_rejects_infeasible_targets() {
        let sys = crate::instances::bernoulli(32, 32, 0.5, 3).unwrap();
        let err = partial_coloring_corollary(&sys, &vec![0.0; 32], 1).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
        assert!(partial_coloring_corollary(&sys, &[1.0], 1).is_err());
    }

    fn check_rounds(run: &ColoringRun, n: usize) {
        let mut n_r = n;
        for (r, round) in run.rounds.iter().enumerate() {
            assert_eq!(round.n_r, n_r);
            let fixed_here = run.fixed_in_round.iter().filter(|f| **f == Some(r)).count();
            assert!(2 * fixed_here >= n_r, "round {r}: {fixed_here} of {n_r}");
            n_r -= fixed_here;
        }
        // Coordinates fixed in round r keep their value in every later round.
        for (i, f) in run.fixed_in_round.iter().enumerate() {
            if let Some(r) = *f {
                let v = run.round_points[r][i];
                for later in &run.round_points[r..] {
                    assert_eq!(later[i], v);
                }
                assert_eq!(run.fractional.as_slice()[i], v);
            }
        }
    }

    #[test]
    fn oracle_sandwich_small() {
        for seed in 0..8 {
            let sys = crate::instances::bernoulli(12, 12, 0.5, seed).unwrap();
            let run = spencer_color(&sys, &SpencerParams::new(12, 12, seed)).unwrap();
            let opt = crate::oracle::brute_force_disc(&sys).unwrap().opt_disc as f64;
            assert!(opt <= run.report.max_abs && run.report.max_abs <= run.bound());
            assert!(run.report.satisfied);
            check_rounds(&run, 12);
        }
    }

    #[test]
    fn spencer_report_shape() {
        let sys = crate::instances::bernoulli(48, 48, 0.5, 2).unwrap();
        let run = spencer_color(&sys, &SpencerParams::new(48, 48, 7)).unwrap();
        check_rounds(&run, 48);
        let expected: f64 = run
            .rounds
            .iter()
            .map(|r| default_alpha(48, r.n_r) * (r.n_r as f64).sqrt())
            .sum::<f64>()
            + 48f64.sqrt();
        assert!((run.bound() - expected).abs() < 1e-9);
        let json = serde_json::to_value(run.pipeline_report()).unwrap();
        for key in ["chi", "discrepancy", "bound", "rounds", "seed"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!(json["rounds"][0].get("retries_used").is_some());
        let again = spencer_color(&sys, &SpencerParams::new(48, 48, 7)).unwrap();
        assert_eq!(run.pipeline_report(), again.pipeline_report());
    }

    #[test]
    fn rounding_acceptance_rate() {
        let sys = crate::instances::bernoulli(64, 64, 0.5, 3).unwrap();
        let run = spencer_color(&sys, &SpencerParams::new(64, 64, 3)).unwrap();
        let rows = indicator_matrix(&sys);
        let mut rng = stream(17, ROUNDING_STREAM);
        let trials = 400;
        let accepted = (0..trials)
            .filter(|_| round_randomized(&run.fractional, &rows, 1, &mut rng).is_ok())
            .count();
        assert!(accepted as f64 / trials as f64 >= 0.4);
    }

    #[test]
    fn beck_fiala_disjoint_even_sets() {
        let sets: Vec<Vec<usize>> = (0..8).map(|j| (4 * j..4 * j + 4).collect()).collect();
        let sys = SetSystem::new(32, sets).unwrap();
        let params = BeckFialaParams::new(1, 32, 2).unwrap();
        let run = beck_fiala_color(&sys, &params).unwrap();
        assert!(run.report.max_abs <= run.bound());
        assert_eq!(run.report.per_constraint.len(), 8);
        check_rounds(&run, 32);
        // Sign rounding: every fixed coordinate keeps its sign.
        for (i, f) in run.fixed_in_round.iter().enumerate() {
            if f.is_some() {
                let x = run.fractional.as_slice()[i];
                assert_eq!(run.coloring.as_slice()[i], if x >= 0.0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn beck_fiala_low_degree() {
        let sys = crate::instances::low_degree(64, 64, 4, 5).unwrap();
        let params = BeckFialaParams::new(4, 64, 5).unwrap();
        let run = beck_fiala_color(&sys, &params).unwrap();
        assert!(run.report.max_abs <= run.bound());
        let ones = discrepancy(&Coloring::all_ones(64), &sys).unwrap().max_abs;
        assert!(run.report.max_abs <= ones);
        assert!((params.bound(64) - (2.0 * 5.0 * 2.0 * 6.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn corollary_with_zero_targets() {
        let (n, m) = (64, 64);
        let sys = crate::instances::bernoulli(n, m, 0.5, 8).unwrap();
        // Four sets at zero, the rest effectively unconstrained.
        let targets: Vec<f64> = (0..m).map(|j| if j < 4 { 0.0 } else { 1e6 }).collect();
        let c: Vec<f64> = targets
            .iter()
            .zip(sys.sets())
            .map(|(t, s)| t / (s.len() as f64).sqrt())
            .collect();
        let f = check_feasibility(&c, n).unwrap();
        assert_eq!(f.sum, 4.0);
        assert!(f.feasible);

        let out = partial_coloring_corollary(&sys, &targets, 1).unwrap();
        assert!(2 * out.x.count_near_integral(out.delta) >= n);
        for set in &sys.sets()[..4] {
            let raw: f64 = set.iter().map(|&i| out.x.as_slice()[i]).sum();
            let snapped: f64 = set.iter().map(|&i| out.snapped[i]).sum();
            assert!(raw.abs() <= 1e-8);
            assert!(snapped.abs() <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn corollary_with_loose_targets() {
        let sys = crate::instances::bernoulli(40, 20, 0.5, 9).unwrap();
        let out = partial_coloring_corollary(&sys, &[1e9; 20], 2).unwrap();
        assert!(2 * out.x.count_near_integral(out.delta) >= 40);
    }
}
