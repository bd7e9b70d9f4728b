//! Exact construction of permutation-adapted states for identical particles,
//! one-body expectation values over them, and canonical/grand-canonical
//! partition functions of ideal quantum and semiclassical gases.

pub mod exactnum;
pub mod observables;
pub mod perm;
pub mod statmech;
pub mod symmetry;
pub mod verify;

pub use exactnum::{RadicalRational, Rational};
pub use perm::{Permutation, ProductState};
pub use statmech::{Spectrum, StatisticsKind};
pub use symmetry::{Parity, StateVector, SymmetryClass};
