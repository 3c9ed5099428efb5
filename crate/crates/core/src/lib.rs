//! Smoothed Wigner transforms for one-dimensional semiclassical Schrodinger
//! problems, the exact phase-space equations they satisfy, and Liouville
//! solvers that propagate them along classical characteristics.

pub mod error;
pub mod fourier;
pub mod grid;
pub mod io;
pub mod liouville;
pub mod phasespace;
pub mod poly;
pub mod reference;
pub mod weyl;

pub use error::{Error, Result};
pub use grid::{Axis, ComplexField1D, EpsilonParam};
