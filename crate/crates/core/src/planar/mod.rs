//! Finite-difference Dirichlet and weighted Neumann eigenproblems on convex
//! polygons, and the checks built on them.

mod grid;
mod solve;

pub use grid::{CellSample, Grid2D, GridFunction2D, MIN_CELLS_ACROSS};
pub use solve::{
    default_delta, dirichlet_eigs, dirichlet_eigs_with_potential, dirichlet_matrix,
    dirichlet_on_grid, neumann_eig1, weighted_neumann_eig1, weighted_neumann_matrix,
    weighted_neumann_on_grid, EigenPair2D, Kind, EPS_WEIGHT,
};
mod checks;

pub use checks::{
    collapsing_check, gap_identity_check, hypograph, improved_log_concavity_check,
    linf_bound_check, log_concavity_check, CollapsingEntry, CollapsingReport, GapIdentityReport,
    LinfReport, LogConcavityReport, DELTA_U, GAP_IDENTITY_RTOL,
};
