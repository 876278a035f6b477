//! Eigen-solvers for the symmetric problems produced by the discretizations.

mod envelope;
mod sparse;
mod subspace;
pub mod tridiag;

pub use envelope::EnvelopeLdl;
pub use sparse::{SparseSym, TripletBuilder};
pub use subspace::{smallest_eigenpairs, EigenOptions, EigenPairs};
