//! Orthonormal bases, Gaussian sampling restricted to a subspace, and basis
//! downdating as constraints accumulate.
//!
//! Two representations of the walk subspace live here:
//!
//! * [`OrthoBasis`] stores an orthonormal basis of the subspace itself. Sampling
//!   costs `O(n d)` and a downdate is one Householder reflection in coefficient
//!   space, also `O(n d)`.
//! * [`ActiveSpan`] stores an orthonormal basis of the span of the active
//!   constraint normals, restricted to the free coordinates. The subspace is the
//!   orthogonal complement of that span inside the free coordinates, so a sample
//!   is a standard Gaussian on the free coordinates with `k` directions projected
//!   out, `O(n k)`. This is what the walk uses by default, since `k` (active
//!   discrepancy constraints) stays far below `d` in practice.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::model::{dot, norm};

/// A residual is treated as zero if its norm is at most this multiple of the
/// norm of the vector it came from.
pub const RANK_TOL: f64 = 1e-8;

/// Orthonormal vectors spanning a subspace of `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoBasis {
    dim_ambient: usize,
    vectors: Vec<Vec<f64>>,
}

impl OrthoBasis {
    /// The standard basis of `R^n`.
    pub fn full(n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        Self {
            dim_ambient: n,
            vectors,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            dim_ambient: n,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// `max |<b_i, b_j> - [i == j]|` over all pairs.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    /// Orthogonal projection of `u` onto the span.
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_ambient];
        for b in &self.vectors {
            axpy(dot(b, u), b, &mut out);
        }
        out
    }

    /// Basis of `span(self) ∩ w^⊥`.
    pub fn downdate(&self, w: &[f64]) -> OrthoBasis {
        let mut out = self.clone();
        out.downdate_in_place(w);
        out
    }

    /// In-place [`OrthoBasis::downdate`]; returns whether the dimension dropped.
    ///
    /// With coefficients `a = B^T w`, the new subspace is `{B c : c ⊥ a}`. A
    /// Householder reflection `H` with `H a ∝ e_last` maps it onto the first
    /// `d - 1` columns of `B H`.
    pub fn downdate_in_place(&mut self, w: &[f64]) -> bool {
        assert_eq!(w.len(), self.dim_ambient, "constraint length mismatch");
        let d = self.dim();
        let w_norm = norm(w);
        if d == 0 || w_norm == 0.0 {
            return false;
        }
        let mut a: Vec<f64> = self.vectors.iter().map(|b| dot(b, w)).collect();
        let a_norm = norm(&a);
        if a_norm <= RANK_TOL * w_norm {
            return false;
        }
        let last = d - 1;
        // u = a + sign(a_last) |a| e_last, so H a = -sign(a_last) |a| e_last.
        a[last] += if a[last] < 0.0 { -a_norm } else { a_norm };
        let u = a;
        let uu = dot(&u, &u);
        let mut p = vec![0.0; self.dim_ambient];
        for (b, &uk) in self.vectors.iter().zip(&u) {
            axpy(uk, b, &mut p);
        }
        let scale = 2.0 / uu;
        for (b, &uk) in self.vectors.iter_mut().zip(&u).take(last) {
            axpy(-scale * uk, &p, b);
        }
        self.vectors.truncate(last);
        true
    }

    /// `sum_k g_k b_k` with independent standard normal `g_k`.
    pub fn sample_gaussian<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_ambient];
        self.sample_gaussian_into(rng, &mut out);
        out
    }

    pub fn sample_gaussian_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        out.fill(0.0);
        for b in &self.vectors {
            let g: f64 = rng.sample(StandardNormal);
            axpy(g, b, out);
        }
    }
}

/// Orthonormal basis of `{u : <u, w> = 0 for every given w}`.
///
/// The constraints are orthonormalized with two Gram-Schmidt passes, then the
/// complement is completed greedily from the standard basis vector with the
/// largest remaining residual.
pub fn complement_basis(n: usize, constraints: &[Vec<f64>]) -> OrthoBasis {
    let mut span: Vec<Vec<f64>> = Vec::new();
    for w in constraints {
        assert_eq!(w.len(), n, "constraint length mismatch");
        if let Some(q) = orthonormalize_against(w, &span) {
            span.push(q);
        }
    }
    let target = n - span.len();

    // Squared residual of e_i after projecting out everything chosen so far.
    let mut residual: Vec<f64> = (0..n)
        .map(|i| 1.0 - span.iter().map(|q| q[i] * q[i]).sum::<f64>())
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(target);
    while basis.len() < target {
        let (pivot, best) = residual
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
        if best <= RANK_TOL * RANK_TOL {
            break;
        }
        let mut v = vec![0.0; n];
        v[pivot] = 1.0;
        for _ in 0..2 {
            for q in span.iter().chain(basis.iter()) {
                let c = dot(q, &v);
                axpy(-c, q, &mut v);
            }
        }
        let len = norm(&v);
        v.iter_mut().for_each(|x| *x /= len);
        for (r, &vi) in residual.iter_mut().zip(&v) {
            *r -= vi * vi;
        }
        residual[pivot] = f64::NEG_INFINITY;
        basis.push(v);
    }
    OrthoBasis {
        dim_ambient: n,
        vectors: basis,
    }
}

/// Orthonormal basis of the span of the active constraint normals, restricted to
/// the free coordinates.
#[derive(Clone, Debug, Default)]
pub struct ActiveSpan {
    vectors: Vec<Vec<f64>>,
}

impl ActiveSpan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rank of the span; the walk subspace has dimension `free - rank`.
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Adds `w` restricted to `free`; returns whether the rank grew.
    pub fn insert(&mut self, w: &[f64], free: &[bool]) -> bool {
        let restricted = mask(w, free);
        match orthonormalize_against(&restricted, &self.vectors) {
            Some(q) => {
                self.vectors.push(q);
                true
            }
            None => false,
        }
    }

    /// Rebuilds the span from `sources` after the free set shrank.
    pub fn rebuild<'a>(&mut self, sources: impl IntoIterator<Item = &'a [f64]>, free: &[bool]) {
        self.vectors.clear();
        for w in sources {
            self.insert(w, free);
        }
    }

    /// Fills `g` with a standard Gaussian on `free_idx` and projects out the span.
    /// Entries outside `free_idx` are left untouched (the caller keeps them zero).
    #[inline]
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, free_idx: &[usize], g: &mut [f64]) {
        for &i in free_idx {
            g[i] = rng.sample(StandardNormal);
        }
        for q in &self.vectors {
            let c: f64 = free_idx.iter().map(|&i| q[i] * g[i]).sum();
            for &i in free_idx {
                g[i] -= c * q[i];
            }
        }
    }

    /// Explicit basis of the walk subspace (free coordinates minus the span).
    /// Used for cross-checking; costs `O(n^3)`.
    pub fn complement(&self, free: &[bool]) -> OrthoBasis {
        let n = free.len();
        let mut constraints: Vec<Vec<f64>> = self.vectors.clone();
        for (i, &f) in free.iter().enumerate() {
            if !f {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                constraints.push(e);
            }
        }
        complement_basis(n, &constraints)
    }
}

/// Two-pass Gram-Schmidt of `w` against orthonormal `basis`; `None` when the
/// residual is below `RANK_TOL * ||w||`.
fn orthonormalize_against(w: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let w_norm = norm(w);
    if w_norm == 0.0 {
        return None;
    }
    let mut v = w.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, &v);
            axpy(-c, q, &mut v);
        }
    }
    let r = norm(&v);
    if r <= RANK_TOL * w_norm {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= r);
    Some(v)
}

fn mask(w: &[f64], free: &[bool]) -> Vec<f64> {
    w.iter()
        .zip(free)
        .map(|(&v, &f)| if f { v } else { 0.0 })
        .collect()
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
