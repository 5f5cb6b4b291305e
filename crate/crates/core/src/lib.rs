pub mod error;
pub mod herm;
pub mod subspace;
mod barrier;
mod linalg;

pub use error::{Error, Result};
pub mod convex;
pub mod lattice;
pub mod vn;
pub mod random;
pub mod separability;
pub mod bipartite;
pub mod harness;
pub mod io;
