use std::path::Path;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::grid::Axis;
use crate::io::write_csv;
use crate::phasespace::{FieldKind, PhaseSpaceField, PhaseSpaceGrid};
use crate::reference::PotentialSpec;

use super::flow::{rk4_integrate, FlowMap};

/// Default halo width in grid cells.
pub const DEFAULT_HALO: usize = 3;

/// Particles carrying phase-space density values. Densities are fixed at
/// seeding; moving an ensemble only changes positions.
#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    positions: Vec<(f64, f64)>,
    densities: Vec<f64>,
    labels: Vec<(u32, u32)>,
    seed_grid: PhaseSpaceGrid,
    kind: FieldKind,
}

impl ParticleEnsemble {
    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// Seed-grid node `(i, j)` each particle started from.
    pub fn labels(&self) -> &[(u32, u32)] {
        &self.labels
    }

    pub fn seed_grid(&self) -> &PhaseSpaceGrid {
        &self.seed_grid
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Phase-space area each particle stands for (one seed-grid cell).
    pub fn cell_area(&self) -> f64 {
        self.seed_grid.cell_area()
    }

    /// `sum rho_i phi(x_i, k_i) dA`.
    pub fn quadrature(&self, phi: impl Fn(f64, f64) -> f64) -> f64 {
        self.positions
            .iter()
            .zip(&self.densities)
            .map(|(&(x, k), &d)| d * phi(x, k))
            .sum::<f64>()
            * self.cell_area()
    }

    /// Positions moved by `f`; densities unchanged.
    pub fn mapped(&self, f: impl Fn(f64, f64) -> (f64, f64) + Sync) -> ParticleEnsemble {
        ParticleEnsemble {
            positions: self.positions.par_iter().map(|&(x, k)| f(x, k)).collect(),
            densities: self.densities.clone(),
            labels: self.labels.clone(),
            seed_grid: self.seed_grid,
            kind: self.kind,
        }
    }

    /// CSV with columns `x, k, density`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_csv(
            path,
            &["x", "k", "density"],
            self.positions.iter().zip(&self.densities).map(|(&(x, k), &d)| vec![x, k, d]),
        )
    }

    /// Cloud-in-cell deposition of `int W dk` onto `axis`: every particle
    /// spreads its mass `rho dA` over the two nearest nodes.
    pub fn deposit_marginal_x(&self, axis: &Axis) -> Vec<f64> {
        let mut out = vec![0.0; axis.count()];
        let dx = axis.step();
        let area = self.cell_area();
        for (&(x, _), &d) in self.positions.iter().zip(&self.densities) {
            let s = (x - axis.start()) / dx;
            let i = s.floor();
            let frac = s - i;
            let i = i as i64;
            let m = d * area / dx;
            if i >= 0 && (i as usize) < out.len() {
                out[i as usize] += m * (1.0 - frac);
            }
            if i + 1 >= 0 && ((i + 1) as usize) < out.len() {
                out[(i + 1) as usize] += m * frac;
            }
        }
        out
    }
}

/// Particles at the nodes where `|W0| > tol * max |W0|`, dilated by `halo`
/// cells in every direction.
pub fn seed_particles(w0: &PhaseSpaceField, tol: f64) -> Result<ParticleEnsemble> {
    seed_particles_with(w0, tol, DEFAULT_HALO)
}

pub fn seed_particles_with(w0: &PhaseSpaceField, tol: f64, halo: usize) -> Result<ParticleEnsemble> {
    if !(tol > 0.0) {
        return Err(invalid("seeding tolerance must be positive"));
    }
    let max = w0.max_abs();
    if max == 0.0 {
        return Err(Error::Degenerate("field is identically zero".into()));
    }
    let (nx, nk) = w0.grid().shape();
    let v = w0.values();
    let mut mask = vec![false; nx * nk];
    let h = halo as i64;
    for ((i, j), &w) in v.indexed_iter() {
        if w.abs() > tol * max {
            for di in -h..=h {
                for dj in -h..=h {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a >= 0 && b >= 0 && (a as usize) < nx && (b as usize) < nk {
                        mask[a as usize * nk + b as usize] = true;
                    }
                }
            }
        }
    }
    let g = w0.grid();
    let mut positions = Vec::new();
    let mut densities = Vec::new();
    let mut labels = Vec::new();
    for i in 0..nx {
        for j in 0..nk {
            if mask[i * nk + j] {
                positions.push((g.x_axis().at(i), g.k_axis().at(j)));
                densities.push(v[[i, j]]);
                labels.push((i as u32, j as u32));
            }
        }
    }
    if positions.is_empty() {
        return Err(Error::Degenerate("no node above the seeding tolerance".into()));
    }
    Ok(ParticleEnsemble {
        positions,
        densities,
        labels,
        seed_grid: *g,
        kind: w0.kind(),
    })
}

/// RK4 transport of every particle over time `t` with step at most `dt`.
pub fn propagate(ens: &ParticleEnsemble, v: &PotentialSpec, t: f64, dt: f64) -> Result<ParticleEnsemble> {
    if !(dt > 0.0) {
        return Err(invalid("time step must be positive"));
    }
    Ok(ens.mapped(|x, k| rk4_integrate(v, x, k, t, dt)))
}

/// Transport with a given flow map.
pub fn propagate_with(ens: &ParticleEnsemble, flow: &FlowMap) -> ParticleEnsemble {
    ens.mapped(|x, k| flow.apply(x, k))
}

/// Seed-grid field holding the particle densities at their seed nodes.
pub fn seeded_field(ens: &ParticleEnsemble) -> PhaseSpaceField {
    let g = ens.seed_grid;
    let mut w = PhaseSpaceField::zeros(g, ens.kind);
    let mut values = w.values().clone();
    for (&(i, j), &d) in ens.labels.iter().zip(&ens.densities) {
        values[[i as usize, j as usize]] = d;
    }
    w = w.with_values(values).expect("finite");
    w
}
