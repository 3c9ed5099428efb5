//! Wavefunctions with known evolution: free Gaussian packets in closed form,
//! harmonic-oscillator eigenstates, the chirped test signal `f^eps`, and a
//! split-step spectral solver for
//!
//! ```text
//! eps u_t - i (eps^2/2) u_xx + i V(x) u = 0.
//! ```

mod packets;
mod potential;
mod series;
mod splitstep;

pub use packets::{
    build_f_eps, f_eps_envelope, f_eps_phase, f_eps_ridge, gaussian_packet_exact, gaussian_sum_exact,
    harmonic_eigenfunction, harmonic_eigenstate_at, hermite_function, three_gaussians, GaussianPacket,
    MAX_HERMITE_INDEX,
};
pub use potential::{PotentialKind, PotentialSpec};
pub use series::{TimeSeries, MANIFEST_NAME};
pub use splitstep::{split_step_solve, split_step_solve_with, SplitStep, SplitStepOptions};
