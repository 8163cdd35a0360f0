//! Exact combinatorics of measured foliations on genus-2 surfaces glued from
//! two flat tori along a transversal slit, plus the supporting models for
//! higher genus.

pub mod builder;
pub mod curves;
pub mod error;
pub mod homotopy;
pub mod hyperelliptic;
pub mod interval;
pub mod lattice;
pub mod oracle;
pub mod sample;
pub mod scalar;
pub mod semigroup;
pub mod spec;
pub mod streets;
pub mod transition;

pub use error::{Error, Result};
pub use interval::Interval;
pub use lattice::LatticeVector;
pub use scalar::Scalar;
pub use spec::{FoliationSpec, Plane};
