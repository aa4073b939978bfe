//! The partial-coloring walk.
//!
//! Starting from `x0`, the walk takes `T = ceil(K1 / gamma^2)` Gaussian steps of
//! size `gamma`, each drawn from the subspace orthogonal to every constraint
//! that has been nearly hit so far: coordinate `i` once `|x_i| >= 1 - delta`,
//! row `j` once `|<x - x0, v_j>| >= c_j - delta`. Rows are unit vectors here;
//! [`partial_color`] normalizes arbitrary rows before walking.
//!
//! Coordinates are pinned at activation and never receive noise again, so
//! freezing of variables is exact. Row inner products are checked lazily: a row
//! with margin `mu` to its activation threshold is revisited after
//! `max(1, floor((mu / (8 gamma))^2))` steps, since the walk's projection on a
//! unit vector moves with variance at most `gamma^2` per step. Every basis change
//! triggers a full recheck, and so does the end of the walk.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_feasibility, ConstraintSet, Feasibility, FractionalColoring};
use crate::rng::{mix64, stream, WALK_STREAM};
use crate::subspace::{complement_basis, ActiveSpan, OrthoBasis};

pub const K1: f64 = 16.0 / 3.0;
pub const DEFAULT_BIG_C: f64 = 4.0;
pub const DEFAULT_EPS_SLACK: f64 = 1e-9;
pub const DEFAULT_MAX_RETRIES: usize = 60;

/// Rows must have unit norm to within this tolerance.
const UNIT_TOL: f64 = 1e-9;

/// How the walk draws from the Gaussian on the current subspace.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Gaussian on the free coordinates with the active row span projected out.
    #[default]
    ActiveSpan,
    /// Explicit orthonormal basis of the subspace, downdated on every activation.
    ExplicitBasis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub delta: f64,
    pub gamma: f64,
    pub big_c: f64,
    pub k1: f64,
    pub t_steps: u64,
    pub max_retries: usize,
    pub seed: u64,
    pub eps_slack: f64,
    pub sampler: Sampler,
    pub record_trace: bool,
}

impl WalkParams {
    /// Parameters with `gamma` derived from `delta`, `n`, `m` and `C = 4`.
    pub fn new(delta: f64, n: usize, m: usize) -> Result<Self> {
        Self::with_big_c(delta, n, m, DEFAULT_BIG_C)
    }

    pub fn with_big_c(delta: f64, n: usize, m: usize, big_c: f64) -> Result<Self> {
        check_delta(delta)?;
        if !(big_c >= 1.0 && big_c.is_finite()) {
            return Err(Error::Validation(format!("C = {big_c} must be at least 1")));
        }
        let gamma = derive_gamma(delta, n.max(1), m.max(1), big_c);
        let params = Self {
            delta,
            gamma,
            big_c,
            k1: K1,
            t_steps: step_count(gamma, K1),
            max_retries: DEFAULT_MAX_RETRIES,
            seed: 0,
            eps_slack: DEFAULT_EPS_SLACK,
            sampler: Sampler::default(),
            record_trace: false,
        };
        params.validate()?;
        Ok(params)
    }

    /// Overrides the step size; `T` is recomputed.
    pub fn gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self.t_steps = step_count(gamma, self.k1);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_retries(mut self, retries: usize) -> Self {
        self.max_retries = retries;
        self
    }

    pub fn eps_slack(mut self, eps: f64) -> Self {
        self.eps_slack = eps;
        self
    }

    pub fn sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn record_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_delta(self.delta)?;
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Validation(format!("gamma = {} must be positive", self.gamma)));
        }
        if (self.t_steps as f64) * self.gamma * self.gamma < self.k1 * (1.0 - 1e-12) {
            return Err(Error::Validation(format!(
                "T = {} steps is too few for gamma = {}",
                self.t_steps, self.gamma
            )));
        }
        if !(self.eps_slack >= 0.0) {
            return Err(Error::Validation("eps_slack must be nonnegative".into()));
        }
        Ok(())
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.1) {
        return Err(Error::Validation(format!("delta = {delta} must lie in (0, 0.1)")));
    }
    Ok(())
}

/// Step size satisfying `gamma <= delta / sqrt(C ln(2 m n / gamma))`, by three
/// fixed-point iterations from `gamma = delta`.
pub fn derive_gamma(delta: f64, n: usize, m: usize, big_c: f64) -> f64 {
    let mn2 = 2.0 * (m.max(1) as f64) * (n.max(1) as f64);
    let mut gamma = delta;
    for _ in 0..3 {
        gamma = delta / (big_c * (mn2 / gamma).ln()).sqrt();
    }
    gamma
}

/// `T = ceil(k1 / gamma^2)`.
pub fn step_count(gamma: f64, k1: f64) -> u64 {
    (k1 / (gamma * gamma)).ceil() as u64
}

/// Nearly-hit variable and row constraints at `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActiveSets {
    pub vars: Vec<usize>,
    pub disc: Vec<usize>,
}

/// Exact evaluation of both active sets at `x` (rows assumed unit norm).
pub fn active_sets(x: &[f64], x0: &[f64], constraints: &ConstraintSet, delta: f64) -> ActiveSets {
    let vars = (0..x.len()).filter(|&i| x[i].abs() >= 1.0 - delta).collect();
    let disc = (0..constraints.m())
        .filter(|&j| {
            let ip: f64 = constraints
                .row(j)
                .iter()
                .zip(x.iter().zip(x0))
                .map(|(v, (a, b))| v * (a - b))
                .sum();
            ip.abs() >= constraints.thresholds()[j] - delta
        })
        .collect();
    ActiveSets { vars, disc }
}

/// One change point of the walk subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: u64,
    pub dim: usize,
    pub active_vars: usize,
    pub active_disc: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkOutcome {
    pub success: bool,
    pub n_active_vars: usize,
    pub n_active_disc: usize,
    pub contained: bool,
    pub violations: usize,
    pub steps: u64,
    pub t_steps: u64,
    pub final_norm_sq: f64,
    pub seed: u64,
    pub x: FractionalColoring,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<TracePoint>>,
}

impl WalkOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

/// Evolving state of a walk.
#[derive(Clone, Debug)]
pub struct WalkState {
    x: Vec<f64>,
    step: u64,
    active_vars: Vec<usize>,
    active_disc: Vec<usize>,
    is_var_active: Vec<bool>,
    is_disc_active: Vec<bool>,
    cached_ips: Vec<f64>,
}

impl WalkState {
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// Active coordinates in activation order.
    pub fn active_vars(&self) -> &[usize] {
        &self.active_vars
    }

    /// Active rows in activation order.
    pub fn active_disc(&self) -> &[usize] {
        &self.active_disc
    }

    pub fn is_var_active(&self, i: usize) -> bool {
        self.is_var_active[i]
    }

    pub fn is_disc_active(&self, j: usize) -> bool {
        self.is_disc_active[j]
    }

    /// `<x - x0, v_j>` as of the last check of row `j`. Exact for active rows.
    pub fn cached_ips(&self) -> &[f64] {
        &self.cached_ips
    }
}

enum Backend {
    Span(ActiveSpan),
    Explicit(OrthoBasis),
}

/// A walk that can be advanced one step at a time.
pub struct EdgeWalk<'a> {
    rows: &'a ConstraintSet,
    x0: &'a [f64],
    params: &'a WalkParams,
    state: WalkState,
    free: Vec<bool>,
    free_idx: Vec<usize>,
    backend: Backend,
    schedule: BinaryHeap<Reverse<(u64, u32)>>,
    next_check: Vec<u64>,
    violations: usize,
    noise: Vec<f64>,
    newly_frozen: Vec<usize>,
    trace: Option<Vec<TracePoint>>,
}

impl<'a> EdgeWalk<'a> {
    /// Sets up the walk at `x0`. Rows must be unit norm.
    pub fn new(
        rows: &'a ConstraintSet,
        x0: &'a FractionalColoring,
        params: &'a WalkParams,
    ) -> Result<Self> {
        params.validate()?;
        let n = rows.n();
        if x0.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: x0.len(),
            });
        }
        if let Some(j) = rows.norms().iter().position(|&r| (r - 1.0).abs() > UNIT_TOL) {
            return Err(Error::Validation(format!(
                "row {j} has norm {}; the walk needs unit rows",
                rows.norms()[j]
            )));
        }
        let m = rows.m();
        let x0s = x0.as_slice();
        let mut walk = Self {
            rows,
            x0: x0s,
            params,
            state: WalkState {
                x: x0s.to_vec(),
                step: 0,
                active_vars: Vec::new(),
                active_disc: Vec::new(),
                is_var_active: vec![false; n],
                is_disc_active: vec![false; m],
                cached_ips: vec![0.0; m],
            },
            free: vec![true; n],
            free_idx: Vec::with_capacity(n),
            backend: Backend::Span(ActiveSpan::new()),
            schedule: BinaryHeap::with_capacity(m),
            next_check: vec![0; m],
            violations: 0,
            noise: vec![0.0; n],
            newly_frozen: Vec::new(),
            trace: params.record_trace.then(Vec::new),
        };

        let threshold = 1.0 - params.delta;
        for i in 0..n {
            if x0s[i].abs() >= threshold {
                walk.free[i] = false;
                walk.state.is_var_active[i] = true;
                walk.state.active_vars.push(i);
            } else {
                walk.free_idx.push(i);
            }
        }
        for j in 0..m {
            if walk.check_row(j) {
                walk.state.is_disc_active[j] = true;
                walk.state.active_disc.push(j);
            }
        }
        walk.backend = match params.sampler {
            Sampler::ActiveSpan => {
                let mut span = ActiveSpan::new();
                span.rebuild(walk.state.active_disc.iter().map(|&j| rows.row(j)), &walk.free);
                Backend::Span(span)
            }
            Sampler::ExplicitBasis => {
                let mut normals: Vec<Vec<f64>> = walk
                    .state
                    .active_vars
                    .iter()
                    .map(|&i| {
                        let mut e = vec![0.0; n];
                        e[i] = 1.0;
                        e
                    })
                    .collect();
                normals.extend(walk.state.active_disc.iter().map(|&j| rows.row(j).to_vec()));
                Backend::Explicit(complement_basis(n, &normals))
            }
        };
        walk.reschedule_all();
        walk.record();
        Ok(walk)
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    /// Dimension of the current walk subspace.
    pub fn dim(&self) -> usize {
        match &self.backend {
            Backend::Span(span) => self.free_idx.len() - span.rank(),
            Backend::Explicit(basis) => basis.dim(),
        }
    }

    /// Explicit orthonormal basis of the current walk subspace.
    pub fn subspace_basis(&self) -> OrthoBasis {
        match &self.backend {
            Backend::Span(span) => span.complement(&self.free),
            Backend::Explicit(basis) => basis.clone(),
        }
    }

    pub fn is_finished(&self) -> bool {
        self.state.step >= self.params.t_steps || self.dim() == 0
    }

    /// Containment violations seen so far.
    pub fn violations(&self) -> usize {
        self.violations
    }

    /// Takes one step unless the walk is finished.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        if self.is_finished() {
            return Ok(());
        }
        self.state.step += 1;
        let t = self.state.step;
        let gamma = self.params.gamma;
        let threshold = 1.0 - self.params.delta;
        let ceiling = 1.0 + self.params.eps_slack;

        match &self.backend {
            Backend::Span(span) => span.sample_into(rng, &self.free_idx, &mut self.noise),
            Backend::Explicit(basis) => basis.sample_gaussian_into(rng, &mut self.noise),
        }
        let x = &mut self.state.x;
        for &i in &self.free_idx {
            let xi = x[i] + gamma * self.noise[i];
            if !xi.is_finite() {
                return Err(Error::NumericFailure { step: t });
            }
            x[i] = xi;
            let a = xi.abs();
            if a >= threshold {
                if a > ceiling {
                    self.violations += 1;
                }
                self.newly_frozen.push(i);
            }
        }

        let mut basis_changed = false;
        while let Some(&Reverse((due, j))) = self.schedule.peek() {
            if due > t {
                break;
            }
            self.schedule.pop();
            let j = j as usize;
            if self.next_check[j] != due || self.state.is_disc_active[j] {
                continue;
            }
            if self.check_row(j) {
                self.activate_row(j);
                basis_changed = true;
            } else {
                self.schedule_row(j, t);
            }
        }

        if !self.newly_frozen.is_empty() {
            self.freeze_coordinates();
            basis_changed = true;
        }
        if basis_changed {
            self.recheck_all();
            self.record();
        }
        Ok(())
    }

    /// Runs to completion and reports the outcome.
    pub fn run<R: Rng + ?Sized>(mut self, rng: &mut R) -> Result<WalkOutcome> {
        while !self.is_finished() {
            self.step(rng)?;
        }
        Ok(self.finish())
    }

    /// Final verification pass on fresh inner products.
    pub fn finish(mut self) -> WalkOutcome {
        let n = self.rows.n();
        let delta = self.params.delta;
        let eps = self.params.eps_slack;
        let mut within = true;
        for j in 0..self.rows.m() {
            let ip = self.fresh_ip(j);
            let c = self.rows.thresholds()[j];
            if ip.abs() > c + eps {
                self.violations += 1;
                within = false;
            }
            if !self.state.is_disc_active[j] {
                self.state.cached_ips[j] = ip;
                if ip.abs() >= c - delta {
                    self.state.is_disc_active[j] = true;
                    self.state.active_disc.push(j);
                }
            }
        }
        self.record();
        let x = &self.state.x;
        let n_active_vars = x.iter().filter(|v| v.abs() >= 1.0 - delta).count();
        let contained = self.violations == 0;
        WalkOutcome {
            success: within && contained && 2 * n_active_vars >= n,
            n_active_vars,
            n_active_disc: self.state.active_disc.len(),
            contained,
            violations: self.violations,
            steps: self.state.step,
            t_steps: self.params.t_steps,
            final_norm_sq: x.iter().map(|v| v * v).sum(),
            seed: self.params.seed,
            x: FractionalColoring::from_vec_unchecked(self.state.x),
            trace: self.trace,
        }
    }

    fn fresh_ip(&self, j: usize) -> f64 {
        self.rows
            .row(j)
            .iter()
            .zip(self.state.x.iter().zip(self.x0))
            .map(|(v, (a, b))| v * (a - b))
            .sum()
    }

    /// Refreshes the cached inner product of row `j`; returns whether it is nearly hit.
    fn check_row(&mut self, j: usize) -> bool {
        let ip = self.fresh_ip(j);
        self.state.cached_ips[j] = ip;
        let c = self.rows.thresholds()[j];
        if ip.abs() > c + self.params.eps_slack {
            self.violations += 1;
        }
        ip.abs() >= c - self.params.delta
    }

    fn activate_row(&mut self, j: usize) {
        debug_assert!(!self.state.is_disc_active[j]);
        self.state.is_disc_active[j] = true;
        self.state.active_disc.push(j);
        let row = self.rows.row(j);
        match &mut self.backend {
            Backend::Span(span) => {
                span.insert(row, &self.free);
            }
            Backend::Explicit(basis) => {
                basis.downdate_in_place(row);
            }
        }
    }

    fn freeze_coordinates(&mut self) {
        let before = self.state.active_vars.len();
        for k in 0..self.newly_frozen.len() {
            let i = self.newly_frozen[k];
            self.free[i] = false;
            self.noise[i] = 0.0;
            self.state.is_var_active[i] = true;
            self.state.active_vars.push(i);
        }
        let free = &self.free;
        self.free_idx.retain(|&i| free[i]);
        match &mut self.backend {
            Backend::Span(span) => {
                let rows = self.rows;
                span.rebuild(self.state.active_disc.iter().map(|&j| rows.row(j)), &self.free);
            }
            Backend::Explicit(basis) => {
                let n = self.rows.n();
                for &i in &self.newly_frozen {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    basis.downdate_in_place(&e);
                }
            }
        }
        debug_assert!(self.state.active_vars.len() > before);
        self.newly_frozen.clear();
    }

    fn recheck_all(&mut self) {
        let t = self.state.step;
        self.schedule.clear();
        for j in 0..self.rows.m() {
            if self.state.is_disc_active[j] {
                continue;
            }
            if self.check_row(j) {
                self.activate_row(j);
            } else {
                self.schedule_row(j, t);
            }
        }
    }

    fn reschedule_all(&mut self) {
        let t = self.state.step;
        self.schedule.clear();
        for j in 0..self.rows.m() {
            if !self.state.is_disc_active[j] {
                self.schedule_row(j, t);
            }
        }
    }

    fn schedule_row(&mut self, j: usize, t: u64) {
        let margin = self.rows.thresholds()[j] - self.params.delta - self.state.cached_ips[j].abs();
        let ratio = margin / (8.0 * self.params.gamma);
        let wait = (ratio * ratio).floor().clamp(1.0, (self.params.t_steps + 1) as f64) as u64;
        let due = t + wait;
        self.next_check[j] = due;
        self.schedule.push(Reverse((due, j as u32)));
    }

    fn record(&mut self) {
        let point = TracePoint {
            step: self.state.step,
            dim: self.dim(),
            active_vars: self.state.active_vars.len(),
            active_disc: self.state.active_disc.len(),
        };
        if let Some(trace) = &mut self.trace {
            if trace.last() != Some(&point) {
                trace.push(point);
            }
        }
    }
}

/// One walk from `x0` on unit rows.
pub fn edge_walk<R: Rng + ?Sized>(
    rows: &ConstraintSet,
    x0: &FractionalColoring,
    params: &WalkParams,
    rng: &mut R,
) -> Result<WalkOutcome> {
    EdgeWalk::new(rows, x0, params)?.run(rng)
}

/// Options for [`partial_color`].
#[derive(Clone, Debug, PartialEq)]
pub struct PartialColorConfig {
    pub delta: f64,
    pub max_retries: usize,
    pub seed: u64,
    pub big_c: f64,
    /// Overrides the derived step size.
    pub gamma: Option<f64>,
    pub eps_slack: f64,
    pub sampler: Sampler,
    /// Reject thresholds that fail the feasibility condition instead of walking anyway.
    pub require_feasible: bool,
    pub record_trace: bool,
}

impl PartialColorConfig {
    pub fn new(delta: f64, max_retries: usize, seed: u64) -> Self {
        Self {
            delta,
            max_retries,
            seed,
            big_c: DEFAULT_BIG_C,
            gamma: None,
            eps_slack: DEFAULT_EPS_SLACK,
            sampler: Sampler::default(),
            require_feasible: true,
            record_trace: false,
        }
    }

    /// Walk parameters for `n` coordinates and `m` nonzero rows.
    pub fn walk_params(&self, n: usize, m: usize) -> Result<WalkParams> {
        let mut params = WalkParams::with_big_c(self.delta, n, m, self.big_c)?
            .max_retries(self.max_retries)
            .seed(self.seed)
            .eps_slack(self.eps_slack)
            .sampler(self.sampler)
            .record_trace(self.record_trace);
        if let Some(gamma) = self.gamma {
            params = params.gamma(gamma);
            params.validate()?;
        }
        Ok(params)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialColoring {
    pub outcome: WalkOutcome,
    pub attempts: usize,
    pub feasibility: Feasibility,
}

/// Seed of retry `k` derived from the user-facing seed.
pub fn retry_seed(seed: u64, attempt: usize) -> u64 {
    mix64(seed, attempt as u64)
}

/// Partial coloring of arbitrary rows: normalizes, then retries independent walks
/// until one succeeds. On success `|<x - x0, v_j>| <= c_j ||v_j||` for every row
/// and at least half the coordinates satisfy `|x_i| >= 1 - delta`.
pub fn partial_color(
    constraints: &ConstraintSet,
    x0: &FractionalColoring,
    config: &PartialColorConfig,
) -> Result<PartialColoring> {
    let n = constraints.n();
    if x0.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: x0.len(),
        });
    }
    let (unit, _) = constraints.normalized();
    let feasibility = check_feasibility(unit.thresholds(), n)?;
    if config.require_feasible && !feasibility.feasible {
        return Err(Error::Infeasible {
            sum: feasibility.sum,
            budget: feasibility.budget,
        });
    }
    let base = config.walk_params(n, unit.m())?;
    let mut best: Option<WalkOutcome> = None;
    for attempt in 0..config.max_retries {
        let seed = retry_seed(config.seed, attempt);
        let params = base.clone().seed(seed);
        let mut rng = stream(seed, WALK_STREAM);
        let outcome = edge_walk(&unit, x0, &params, &mut rng)?;
        if outcome.success {
            return Ok(PartialColoring {
                outcome,
                attempts: attempt + 1,
                feasibility,
            });
        }
        let better = best.as_ref().is_none_or(|b| {
            (outcome.contained, outcome.n_active_vars) > (b.contained, b.n_active_vars)
        });
        if better {
            best = Some(outcome);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: config.max_retries,
        best: Box::new(best.unwrap_or_else(|| WalkOutcome {
            success: false,
            n_active_vars: x0.count_near_integral(config.delta),
            n_active_disc: 0,
            contained: true,
            violations: 0,
            steps: 0,
            t_steps: base.t_steps,
            final_norm_sq: x0.as_slice().iter().map(|v| v * v).sum(),
            seed: config.seed,
            x: x0.clone(),
            trace: None,
        })),
    })
}
