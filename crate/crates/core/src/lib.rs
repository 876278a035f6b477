//! Numerical toolkit for fundamental-gap and Neumann-gap experiments on
//! convex planar domains.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: convex polygons, cuts, diameter/width/depth, John ellipse.
//! - [`linalg`]: tridiagonal and envelope-band solvers, shift-invert eigensolver.
//! - [`oned`]: 1D Dirichlet problems with measure potentials, weighted Neumann
//!   problems, the monotone-profile constraint class and its sharp bounds.
//! - [`rearrangement`]: blocked/stratified rearrangements and stratified potentials.
//! - [`planar`]: masked-grid finite-difference eigensolvers on polygons.
//! - [`partition`]: weighted measure and L² equipartitions by rotating bisection.
//! - [`lab`]: verification harness producing [`lab::GapReport`]s and sweeps.

pub mod error;
pub mod geometry;
pub mod lab;
pub mod linalg;
pub mod oned;
pub mod partition;
pub mod planar;
pub mod rearrangement;
pub mod richardson;
pub mod sampling;

pub use error::{GapError, Result};
