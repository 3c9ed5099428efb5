//! Classical transport of phase-space densities along the Hamiltonian flow
//! `x' = 2 pi k`, `k' = -V'(x) / (2 pi)`, the leading-order dynamics of the
//! smoothed transform.
//!
//! Two solvers are provided. The particle method seeds one particle per grid
//! node where the initial density is non-negligible, moves the particles
//! with the exact or RK4 flow and reconstructs a gridded density, by default
//! through the seed lattice the particles carry as labels. The semi-Lagrangian solver follows each output node back
//! along the flow and interpolates the initial density at the foot.

mod conservation;
mod flow;
mod kernel;
mod lattice;
mod mls;
mod particles;
mod reconstruct;
mod semilagrangian;

pub use conservation::{conservation_report, relative_drift, write_conservation_csv, ConservationRow};
pub use flow::{default_step, exact_flow, hamilton_rhs, rk4_integrate, rk4_step, FlowKind, FlowMap};
pub use kernel::{distorted_kernel_covariance, gaussian_convolve, kernel_evolution_reference};
pub use lattice::{lattice_deposit, lattice_marginal, lattice_to_grid, Deposit, LatticeOptions, MAX_SUBDIVISION};
pub use mls::{mls_to_grid, MlsOptions};
pub use reconstruct::{interpolate_to_grid, interpolate_to_grid_with, Reconstruction};
pub use particles::{
    propagate, propagate_with, seed_particles, seed_particles_with, seeded_field, ParticleEnsemble, DEFAULT_HALO,
};
pub use semilagrangian::{lagrange_eval, semi_lagrangian_evolve, semi_lagrangian_with_flow, DEFAULT_STENCIL};
