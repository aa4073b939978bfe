//! Constructive discrepancy minimization by walking on the edges of a polytope.
//!
//! The central routine is [`walk::partial_color`]: given vectors `v_j`, a start
//! point `x0` in the cube and thresholds `c_j` with
//! `sum_j exp(-c_j^2 / 16) <= n / 16`, a constrained Gaussian walk finds a point
//! `x` in the cube with `|<x - x0, v_j>| <= c_j ||v_j||` for every `j` and
//! `|x_i| >= 1 - delta` for at least half the coordinates.
//!
//! On top of it, [`coloring`] builds full `±1` colorings of set systems by
//! recursing on the unfixed coordinates, [`oracle`] provides brute-force ground
//! truth for small instances, and [`instances`] generates seeded test families.

pub mod coloring;
pub mod error;
pub mod instances;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod subspace;
pub mod walk;
pub mod cli;

pub use error::{Error, Result};
pub use model::{
    check_feasibility, discrepancy, indicator_matrix, Coloring, ConstraintSet, DiscrepancyReport,
    Feasibility, FractionalColoring, SetSystem,
};
pub use walk::{edge_walk, partial_color, PartialColorConfig, WalkOutcome, WalkParams};
