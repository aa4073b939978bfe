//! Set systems, constraint vectors, colorings and discrepancy evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default slack on the cube constraint `|x_i| <= 1`.
pub const DEFAULT_EPS_BOX: f64 = 1e-9;

/// Relative tolerance used when comparing the feasibility sum against `n / 16`.
pub const FEASIBILITY_RTOL: f64 = 1e-12;

/// A universe `{0, .., n-1}` together with `m` index sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    /// Builds a set system, checking that every set is strictly increasing and in range.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("universe size must be positive".into()));
        }
        for (j, set) in sets.iter().enumerate() {
            if let Some(&i) = set.iter().find(|&&i| i >= n) {
                return Err(Error::Validation(format!(
                    "set {j} contains index {i} outside [0, {n})"
                )));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!(
                    "set {j} is not strictly increasing"
                )));
            }
        }
        Ok(Self { n, sets })
    }

    /// Like [`SetSystem::new`] but sorts and deduplicates each set first.
    pub fn from_unsorted(n: usize, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
        }
        Self::new(n, sets)
    }

    /// The `n` singleton sets `{0}, {1}, ..`.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| vec![i]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j]
    }

    /// Number of sets containing each element.
    pub fn frequencies(&self) -> Vec<usize> {
        let mut freq = vec![0; self.n];
        for set in &self.sets {
            for &i in set {
                freq[i] += 1;
            }
        }
        freq
    }

    /// Maximum element frequency (the Beck-Fiala degree).
    pub fn max_frequency(&self) -> usize {
        self.frequencies().into_iter().max().unwrap_or(0)
    }

    /// For each element, the indices of the sets containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (j, set) in self.sets.iter().enumerate() {
            for &i in set {
                inc[i].push(j);
            }
        }
        inc
    }

    /// Relabels elements: element `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: perm.len(),
            });
        }
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|&i| perm[i]).collect())
            .collect();
        Self::from_unsorted(self.n, sets)
    }
}

/// `m` real vectors in `R^n` with cached norms and per-row thresholds.
///
/// Thresholds are dimensionless: the guarantee on row `j` is
/// `|<x - x0, v_j>| <= c_j * ||v_j||`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet {
    n: usize,
    rows: Vec<f64>,
    norms: Vec<f64>,
    thresholds: Vec<f64>,
}

impl ConstraintSet {
    /// Builds from row vectors; all thresholds start at zero.
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut flat = Vec::with_capacity(rows.len() * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation("matrix entries must be finite".into()));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self::from_flat(n, flat))
    }

    fn from_flat(n: usize, rows: Vec<f64>) -> Self {
        let m = rows.len().checked_div(n).unwrap_or(0);
        let norms = (0..m)
            .map(|j| norm(&rows[j * n..(j + 1) * n]))
            .collect();
        Self {
            n,
            rows,
            norms,
            thresholds: vec![0.0; m],
        }
    }

    /// Replaces the thresholds, which must be finite and nonnegative.
    pub fn with_thresholds(mut self, thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.len() != self.m() {
            return Err(Error::Dimension {
                expected: self.m(),
                actual: thresholds.len(),
            });
        }
        validate_thresholds(&thresholds)?;
        self.thresholds = thresholds;
        Ok(self)
    }

    pub fn with_uniform_threshold(self, c: f64) -> Result<Self> {
        let m = self.m();
        self.with_thresholds(vec![c; m])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.norms.len()
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.rows[j * self.n..(j + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.m()).map(move |j| self.row(j))
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn is_zero_row(&self, j: usize) -> bool {
        self.norms[j] == 0.0
    }

    /// Unit-norm copy with zero rows dropped, plus the original index of every kept row.
    ///
    /// Thresholds carry over unchanged, so the unit-row guarantee `|<x-x0, u_j>| <= c_j`
    /// is the original-scale guarantee `c_j * ||v_j||`.
    pub fn normalized(&self) -> (ConstraintSet, Vec<usize>) {
        let n = self.n;
        let kept: Vec<usize> = (0..self.m()).filter(|&j| !self.is_zero_row(j)).collect();
        let mut rows = Vec::with_capacity(kept.len() * n);
        for &j in &kept {
            let inv = 1.0 / self.norms[j];
            rows.extend(self.row(j).iter().map(|v| v * inv));
        }
        let mut out = Self::from_flat(n, rows);
        out.thresholds = kept.iter().map(|&j| self.thresholds[j]).collect();
        (out, kept)
    }

    /// Restriction of every row to the given coordinates (thresholds reset to zero).
    pub fn restrict(&self, coords: &[usize]) -> ConstraintSet {
        let k = coords.len();
        let mut rows = Vec::with_capacity(self.m() * k);
        for row in self.rows() {
            rows.extend(coords.iter().map(|&i| row[i]));
        }
        let mut out = Self::from_flat(k, rows);
        if k == 0 {
            out.norms = vec![0.0; self.m()];
            out.thresholds = vec![0.0; self.m()];
        }
        out
    }

    /// `<x, v_j>` for every row.
    pub fn inner_products(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        Ok(self.rows().map(|row| dot(row, x)).collect())
    }
}

/// A point of the cube `[-1, 1]^n`, up to a small slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FractionalColoring {
    x: Vec<f64>,
}

impl FractionalColoring {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        Self::with_slack(x, DEFAULT_EPS_BOX)
    }

    pub fn with_slack(x: Vec<f64>, eps_box: f64) -> Result<Self> {
        if let Some((i, v)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || v.abs() > 1.0 + eps_box)
        {
            return Err(Error::Validation(format!(
                "coordinate {i} = {v} lies outside [-1, 1]"
            )));
        }
        Ok(Self { x })
    }

    pub(crate) fn from_vec_unchecked(x: Vec<f64>) -> Self {
        Self { x }
    }

    pub fn zeros(n: usize) -> Self {
        Self { x: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.x
    }

    /// Number of coordinates with `|x_i| >= 1 - delta`.
    pub fn count_near_integral(&self, delta: f64) -> usize {
        self.x.iter().filter(|v| v.abs() >= 1.0 - delta).count()
    }

    /// Rounds each coordinate with `|x_i| >= 1 - delta` to its sign, leaving the rest.
    pub fn snap(&self, delta: f64) -> Vec<f64> {
        self.x
            .iter()
            .map(|&v| if v.abs() >= 1.0 - delta { sign(v) } else { v })
            .collect()
    }

    /// Deterministic sign rounding, with `sign(0) = +1`.
    pub fn sign_coloring(&self) -> Coloring {
        Coloring {
            chi: self.x.iter().map(|&v| sign(v) as i8).collect(),
        }
    }
}

/// A full `{-1, +1}` coloring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    chi: Vec<i8>,
}

impl Coloring {
    pub fn new(chi: Vec<i8>) -> Result<Self> {
        if let Some(i) = chi.iter().position(|&c| c != 1 && c != -1) {
            return Err(Error::Validation(format!(
                "coloring entry {i} is {} (must be +1 or -1)",
                chi[i]
            )));
        }
        Ok(Self { chi })
    }

    pub fn all_ones(n: usize) -> Self {
        Self { chi: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.chi
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.chi.iter().map(|&c| c as f64).collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            chi: self.chi.iter().map(|c| -c).collect(),
        }
    }
}

/// Per-constraint inner products and their maximum absolute value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub max_abs: f64,
    pub per_constraint: Vec<f64>,
    pub bound: Option<f64>,
    pub satisfied: bool,
}

impl DiscrepancyReport {
    pub fn from_values(per_constraint: Vec<f64>, bound: Option<f64>) -> Self {
        let max_abs = per_constraint.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let satisfied = bound.is_none_or(|b| max_abs <= b);
        Self {
            max_abs,
            per_constraint,
            bound,
            satisfied,
        }
    }

    pub fn with_bound(self, bound: f64) -> Self {
        Self::from_values(self.per_constraint, Some(bound))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Indicator vectors of the sets; thresholds start at zero.
pub fn indicator_matrix(sys: &SetSystem) -> ConstraintSet {
    let n = sys.n();
    let mut rows = vec![0.0; sys.m() * n];
    for (j, set) in sys.sets().iter().enumerate() {
        for &i in set {
            rows[j * n + i] = 1.0;
        }
    }
    ConstraintSet::from_flat(n, rows)
}

/// `chi(S)` for every set, computed with exact integer sums.
pub fn discrepancy(chi: &Coloring, sys: &SetSystem) -> Result<DiscrepancyReport> {
    check_len(sys.n(), chi.len())?;
    let c = chi.as_slice();
    let sums = sys
        .sets()
        .iter()
        .map(|set| set.iter().map(|&i| c[i] as i64).sum::<i64>() as f64)
        .collect();
    Ok(DiscrepancyReport::from_values(sums, None))
}

/// `<x - x0, v_j>` for every row of a constraint set.
pub fn vector_discrepancy(
    x: &[f64],
    x0: &[f64],
    constraints: &ConstraintSet,
) -> Result<DiscrepancyReport> {
    check_len(constraints.n(), x.len())?;
    check_len(constraints.n(), x0.len())?;
    let diff: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
    Ok(DiscrepancyReport::from_values(
        constraints.inner_products(&diff)?,
        None,
    ))
}

/// Result of checking `sum_j exp(-c_j^2 / 16) <= n / 16`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub sum: f64,
    pub budget: f64,
    pub feasible: bool,
}

impl Feasibility {
    pub fn slack(&self) -> f64 {
        self.budget - self.sum
    }
}

pub fn check_feasibility(thresholds: &[f64], n: usize) -> Result<Feasibility> {
    validate_thresholds(thresholds)?;
    let sum: f64 = thresholds.iter().map(|c| (-c * c / 16.0).exp()).sum();
    let budget = n as f64 / 16.0;
    Ok(Feasibility {
        sum,
        budget,
        feasible: sum <= budget * (1.0 + FEASIBILITY_RTOL),
    })
}

fn validate_thresholds(thresholds: &[f64]) -> Result<()> {
    if let Some((j, c)) = thresholds
        .iter()
        .enumerate()
        .find(|(_, c)| !(c.is_finite() && **c >= 0.0))
    {
        return Err(Error::Validation(format!(
            "threshold {j} = {c} must be finite and nonnegative"
        )));
    }
    Ok(())
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::Dimension { expected, actual });
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three_cycle() -> SetSystem {
        SetSystem::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn indicator_rows_and_norms() {
        let sys = SetSystem::new(3, vec![vec![0, 1]]).unwrap();
        let c = indicator_matrix(&sys);
        assert_eq!(c.row(0), &[1.0, 1.0, 0.0]);
        assert_eq!(c.norms()[0], 2f64.sqrt());
        assert_eq!(c.thresholds(), &[0.0]);

        let empty = SetSystem::new(2, vec![]).unwrap();
        assert_eq!(indicator_matrix(&empty).m(), 0);

        let sys = SetSystem::new(4, vec![vec![0], vec![0, 1, 2, 3]]).unwrap();
        let c = indicator_matrix(&sys);
        assert_eq!(c.row(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(c.row(1), &[1.0; 4]);
        assert_eq!(c.norms(), &[1.0, 2.0]);
    }

    #[test]
    fn empty_set_gives_flagged_zero_row() {
        let sys = SetSystem::new(3, vec![vec![], vec![2]]).unwrap();
        let c = indicator_matrix(&sys);
        assert!(c.is_zero_row(0));
        assert!(!c.is_zero_row(1));
        let (unit, kept) = c.normalized();
        assert_eq!(kept, vec![1]);
        assert_eq!(unit.m(), 1);
    }

    #[test]
    fn discrepancy_examples() {
        let all_plus = Coloring::all_ones(3);
        assert_eq!(discrepancy(&all_plus, &three_cycle()).unwrap().max_abs, 2.0);

        let sys = SetSystem::new(2, vec![vec![0, 1]]).unwrap();
        let chi = Coloring::new(vec![1, -1]).unwrap();
        assert_eq!(discrepancy(&chi, &sys).unwrap().max_abs, 0.0);

        let empty = SetSystem::new(4, vec![]).unwrap();
        let r = discrepancy(&Coloring::all_ones(4), &empty).unwrap();
        assert_eq!(r.max_abs, 0.0);
        assert!(r.per_constraint.is_empty());
    }

    #[test]
    fn discrepancy_length_mismatch() {
        let err = discrepancy(&Coloring::all_ones(2), &three_cycle()).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 3, actual: 2 }));
    }

    #[test]
    fn feasibility_examples() {
        let f = check_feasibility(&[0.0], 16).unwrap();
        assert_eq!((f.sum, f.budget, f.feasible), (1.0, 1.0, true));

        let f = check_feasibility(&[0.0; 16], 16).unwrap();
        assert!(!f.feasible);
        assert_eq!(f.sum, 16.0);

        // m * exp(-c^2/16) = n/16 exactly when c = 4 sqrt(ln 16).
        let c = 4.0 * 16f64.ln().sqrt();
        assert!((c - 6.6605).abs() < 1e-4);
        for n in [16, 64, 100] {
            let f = check_feasibility(&vec![c; n], n).unwrap();
            assert!(f.feasible, "n={n} sum={} budget={}", f.sum, f.budget);
            assert!((f.sum - f.budget).abs() < 1e-12 * f.budget);
        }
    }

    #[test]
    fn negative_threshold_rejected() {
        assert!(matches!(
            check_feasibility(&[1.0, -0.5], 4),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn set_system_validation() {
        assert!(SetSystem::new(3, vec![vec![0, 5]]).is_err());
        assert!(SetSystem::new(3, vec![vec![1, 0]]).is_err());
        assert!(SetSystem::new(3, vec![vec![1, 1]]).is_err());
        assert!(SetSystem::new(0, vec![]).is_err());
        let s = SetSystem::from_unsorted(3, vec![vec![2, 0, 2]]).unwrap();
        assert_eq!(s.set(0), &[0, 2]);
    }

    #[test]
    fn coloring_rejects_non_signs() {
        assert!(Coloring::new(vec![1, 0, -1]).is_err());
        assert!(FractionalColoring::new(vec![0.5, 1.0 + 1e-10]).is_ok());
        assert!(FractionalColoring::new(vec![1.1]).is_err());
        assert!(FractionalColoring::new(vec![f64::NAN]).is_err());
    }

    fn arb_system() -> impl Strategy<Value = SetSystem> {
        (1usize..24).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::btree_set(0..n, 0..=n), 0..12).prop_map(
                move |sets| {
                    SetSystem::new(n, sets.into_iter().map(|s| s.into_iter().collect()).collect())
                        .unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn discrepancy_matches_inner_products(
            sys in arb_system(),
            bits in prop::collection::vec(any::<bool>(), 24),
        ) {
            let chi = Coloring::new(
                bits[..sys.n()].iter().map(|&b| if b { 1 } else { -1 }).collect(),
            ).unwrap();
            let exact = discrepancy(&chi, &sys).unwrap();
            let via_rows = indicator_matrix(&sys).inner_products(&chi.to_f64()).unwrap();
            prop_assert_eq!(&exact.per_constraint, &via_rows);
        }

        #[test]
        fn indicator_norms_square_to_sizes(sys in arb_system()) {
            let c = indicator_matrix(&sys);
            for (j, set) in sys.sets().iter().enumerate() {
                prop_assert!((c.norms()[j] * c.norms()[j] - set.len() as f64).abs() < 1e-12);
            }
        }

        #[test]
        fn feasibility_monotone_in_thresholds(
            cs in prop::collection::vec(0.0f64..12.0, 1..40),
            bump in 0.0f64..5.0,
            which in any::<prop::sample::Index>(),
            n in 1usize..64,
        ) {
            let before = check_feasibility(&cs, n).unwrap();
            let mut raised = cs.clone();
            raised[which.index(cs.len())] += bump;
            let after = check_feasibility(&raised, n).unwrap();
            prop_assert!(after.sum <= before.sum);
            prop_assert!(!before.feasible || after.feasible);
        }
    }
}
