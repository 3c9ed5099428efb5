//! Liouville evolution of the smoothed transform on the phase-space grid.

use std::path::Path;

use anyhow::Result;
use smoothwig::io::{write_csv, write_phase_space};
use smoothwig::liouville::{
    conservation_report, interpolate_to_grid, propagate_with, seed_particles, write_conservation_csv, ConservationRow,
};
use smoothwig::phasespace::{marginal_k, smoothed_wigner, PhaseSpaceField};
use smoothwig::weyl::SchrodingerSymbol;

use crate::config::ExperimentConfig;
use crate::output::prepare_dir;
use crate::pipeline::{flow_for, initial_field};

pub struct Evolution {
    pub times: Vec<f64>,
    pub fields: Vec<PhaseSpaceField>,
    pub conservation: Vec<ConservationRow>,
    pub particles: usize,
}

/// Seeds the SWT of the initial condition, moves the particles to each
/// snapshot time and reconstructs the density on the configured grid.
/// Mass carried outside the grid is not represented.
pub fn compute(cfg: &ExperimentConfig) -> Result<Evolution> {
    let u = initial_field(cfg)?;
    let grid = cfg.phase_space_grid()?;
    let w0 = smoothed_wigner(&u, &cfg.smoothing_params()?, &grid)?;
    let ens = seed_particles(&w0, cfg.seed_tolerance)?;
    let times = cfg.snapshot_times();
    let mut fields = Vec::with_capacity(times.len());
    for &t in &times {
        let moved = propagate_with(&ens, &flow_for(&cfg.potential, t, cfg.dt)?);
        fields.push(interpolate_to_grid(&moved, &grid)?);
    }
    let h = SchrodingerSymbol::new(cfg.potential.poly())?.hamiltonian();
    let conservation = conservation_report(times.iter().copied().zip(&fields), &h);
    Ok(Evolution {
        times,
        fields,
        conservation,
        particles: ens.len(),
    })
}

/// Writes `swt_NNN.psf2` and `marginal_NNN.csv` (`x, swt`) per snapshot,
/// `conservation.csv` and `config.toml`.
pub fn write(dir: &Path, cfg: &ExperimentConfig, ev: &Evolution) -> Result<()> {
    prepare_dir(dir, cfg)?;
    for (i, w) in ev.fields.iter().enumerate() {
        write_phase_space(&dir.join(format!("swt_{i:03}.psf2")), w)?;
        let m = marginal_k(w);
        let xs = w.grid().x_axis();
        write_csv(
            &dir.join(format!("marginal_{i:03}.csv")),
            &["x", "swt"],
            xs.samples().zip(m).map(|(x, v)| vec![x, v]),
        )?;
    }
    write_conservation_csv(&dir.join("conservation.csv"), &ev.conservation)?;
    Ok(())
}
