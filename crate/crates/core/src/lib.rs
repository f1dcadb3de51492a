//! Exact heights, distances, intersection lattices and cone duality for
//! approximation constants of rational points on rational surfaces.

pub mod approx;
pub mod arith;
pub mod cli;
pub mod cones;
pub mod error;
pub mod fixtures;
pub mod nslattice;
pub mod predictor;
pub mod projective;
pub mod ratcurves;
pub mod serial;
pub mod suite;
pub mod surfaces;

pub use error::{Error, Result};
