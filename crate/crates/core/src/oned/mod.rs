//! One-dimensional eigenproblems with measure potentials and log-concave weights.

mod bounds;
mod grid;
mod potential;
mod profile;
mod solver;
mod weight;

pub use bounds::{
    check_bound_stima3, check_refined_affine, check_split_bounds, RefinedAffineReport, SplitReport,
    Stima3Report,
};
pub use grid::{GridFunction, Interval, Sampler};
pub use potential::MeasurePotential;
pub use profile::{is_in_class_a, ClassAReport, MonotoneProfile};
pub use solver::{dirichlet_eig1, neumann_weighted_eig1, EigenResult1D};
pub use weight::{measure_from_weight, Weight1D};

/// Default number of cells.
pub const DEFAULT_N: usize = 2048;
/// Smallest admissible number of cells.
pub const MIN_N: usize = 64;
/// Monotonicity tolerance for profiles.
pub const EPS_MONO: f64 = 1e-10;
/// Tolerance of the class-𝒜 pair test.
pub const EPS_A: f64 = 1e-8;
