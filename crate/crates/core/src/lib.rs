//! Topological parameter calculus for stationary tessellations of space by
//! convex polyhedral cells, with an exact periodic-complex oracle.

pub mod catalog;
pub mod cli;
pub mod complex;
pub mod error;
pub mod feasibility;
pub mod io;
pub mod params;
pub mod scalar;
pub mod transforms;

pub use error::{Error, Result};
pub use params::{check_identities, derive, f_eval, Class, DerivedSummary, TessParams};
pub use scalar::Scalar;
