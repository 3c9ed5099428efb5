//! Experiments on smoothed Wigner transforms: phase-space pictures of an
//! initial condition, Liouville case studies against reference solutions,
//! and a verification suite.

pub mod casestudy;
pub mod config;
pub mod evolve;
pub mod output;
pub mod pipeline;
pub mod transform;
pub mod verify;
