//! Loop-erased random walks, discrete potential theory and hybrid
//! two-scale lattice graphs.

pub mod conformal;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod hybrid;
pub mod lerw;
pub mod graph;
pub mod potential;
pub mod solver;
pub mod walk;

pub use error::{Error, Result};
