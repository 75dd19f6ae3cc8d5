//! Exact combinatorics for ellipsoidal tangency counts.
//!
//! Everything is computed over exact rationals, with an optional positive
//! infinitesimal `δ` used to break ties between ellipsoid factors.

pub mod blowup;
pub mod cusp;
pub mod error;
pub mod f1;
pub mod formal_curves;
pub mod hidden_constraint;
pub mod linear;
pub mod numbers;
pub mod obstruction;
pub mod repro;
pub mod spectrum;

pub use error::{Error, Result};
pub use numbers::PerturbedRational;
pub use spectrum::{EllipsoidShape, LatticeTuple, ReebOrbit};
