use crate::error::Result;
use crate::phasespace::{PhaseSpaceField, PhaseSpaceGrid};

use super::lattice::{lattice_to_grid, LatticeOptions};
use super::mls::{mls_to_grid, MlsOptions};
use super::particles::ParticleEnsemble;

/// How particle densities are brought back onto a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reconstruction {
    /// Invert the particle map through the seed lattice (default).
    Lattice(LatticeOptions),
    /// Moving least squares on the scattered positions alone.
    Mls(MlsOptions),
}

impl Default for Reconstruction {
    fn default() -> Self {
        Reconstruction::Lattice(LatticeOptions::default())
    }
}

/// Gridded density from a particle ensemble; zero away from the particles.
pub fn interpolate_to_grid(ens: &ParticleEnsemble, grid: &PhaseSpaceGrid) -> Result<PhaseSpaceField> {
    interpolate_to_grid_with(ens, grid, &Reconstruction::default())
}

pub fn interpolate_to_grid_with(
    ens: &ParticleEnsemble,
    grid: &PhaseSpaceGrid,
    how: &Reconstruction,
) -> Result<PhaseSpaceField> {
    match how {
        Reconstruction::Lattice(o) => lattice_to_grid(ens, grid, o),
        Reconstruction::Mls(o) => mls_to_grid(ens, grid, o),
    }
}
