//! Reference solution vs SWT-Liouville vs spectrogram-Liouville on one setup.

use std::path::Path;

use anyhow::{bail, Result};
use serde::Serialize;
use smoothwig::io::{write_csv, write_phase_space};
use smoothwig::liouville::{write_conservation_csv, ConservationRow};
use smoothwig::phasespace::{rel_l1_error, smoothed_wigner, spectrogram, PhaseSpaceField};

use crate::config::{CaseStudy, ExperimentConfig};
use crate::output::{prepare_dir, write_json};
use crate::pipeline::{initial_field, liouville_run, reference_densities, truth_method, LiouvilleRun, TruthMethod};

#[derive(Debug, Clone, Serialize)]
pub struct SnapshotRow {
    pub t: f64,
    /// Normalized L1 error of the marginal against `|u|^2`.
    pub swt_error: f64,
    pub spectrogram_error: f64,
    /// Normalized L1 distance from the method's own initial marginal.
    pub swt_drift: f64,
    pub spectrogram_drift: f64,
    pub swt_mass: f64,
    pub swt_energy: f64,
    pub spectrogram_mass: f64,
    pub spectrogram_energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub eps: f64,
    pub truth: TruthMethod,
    pub swt_particles: usize,
    pub spectrogram_particles: usize,
    pub rows: Vec<SnapshotRow>,
    pub swt_mass_drift: f64,
    pub swt_energy_drift: f64,
    pub spectrogram_mass_drift: f64,
    pub spectrogram_energy_drift: f64,
    pub swt_marginal_drift: f64,
    pub spectrogram_marginal_drift: f64,
}

/// Everything a case-study run computes.
pub struct CaseOutcome {
    pub report: CaseReport,
    pub times: Vec<f64>,
    pub truth: Vec<Vec<f64>>,
    pub swt: LiouvilleRun,
    pub spectrogram: LiouvilleRun,
    pub swt0: PhaseSpaceField,
    pub spectrogram0: PhaseSpaceField,
}

/// Checks that `cfg` uses the potential `case` fixes.
pub fn check_case(case: CaseStudy, cfg: &ExperimentConfig) -> Result<()> {
    let want = case.potential();
    if cfg.potential != want {
        bail!(
            "potential: case '{}' needs kind {:?} with coefficients {:?}",
            case.name(),
            want.kind(),
            want.coefficients()
        );
    }
    Ok(())
}

pub fn run(name: &str, cfg: &ExperimentConfig) -> Result<CaseOutcome> {
    let times = cfg.snapshot_times();
    let grid = cfg.phase_space_grid()?;
    let u0 = initial_field(cfg)?;
    let truth = reference_densities(cfg, &u0, &times)?;
    let swt0 = smoothed_wigner(&u0, &cfg.smoothing_params()?, &grid)?;
    let spectrogram0 = spectrogram(&u0, &cfg.spectrogram_params()?, &grid)?;
    let swt = liouville_run(cfg, &swt0, &times)?;
    let spec = liouville_run(cfg, &spectrogram0, &times)?;
    let rows = times
        .iter()
        .enumerate()
        .map(|(i, &t)| SnapshotRow {
            t,
            swt_error: rel_l1_error(&swt.marginals[i], &truth[i]),
            spectrogram_error: rel_l1_error(&spec.marginals[i], &truth[i]),
            swt_drift: rel_l1_error(&swt.marginals[i], &swt.marginals[0]),
            spectrogram_drift: rel_l1_error(&spec.marginals[i], &spec.marginals[0]),
            swt_mass: swt.mass[i],
            swt_energy: swt.energy[i],
            spectrogram_mass: spec.mass[i],
            spectrogram_energy: spec.energy[i],
        })
        .collect();
    let report = CaseReport {
        case: name.to_string(),
        eps: cfg.eps,
        truth: truth_method(cfg),
        swt_particles: swt.particles,
        spectrogram_particles: spec.particles,
        rows,
        swt_mass_drift: swt.mass_drift(),
        swt_energy_drift: swt.energy_drift(),
        spectrogram_mass_drift: spec.mass_drift(),
        spectrogram_energy_drift: spec.energy_drift(),
        swt_marginal_drift: swt.marginal_drift(),
        spectrogram_marginal_drift: spec.marginal_drift(),
    };
    Ok(CaseOutcome {
        report,
        times,
        truth,
        swt,
        spectrogram: spec,
        swt0,
        spectrogram0,
    })
}

fn conservation(run: &LiouvilleRun, times: &[f64]) -> Vec<ConservationRow> {
    times
        .iter()
        .enumerate()
        .map(|(i, &t)| ConservationRow {
            t,
            mass: run.mass[i],
            energy: run.energy[i],
        })
        .collect()
}

/// Writes the outcome into `dir`:
///
/// - `config.toml`: the resolved config
/// - `marginals_NNN.csv`: `x, exact, swt, spectrogram` at snapshot `NNN`
/// - `report.csv`, `report.json`: errors, drifts and conserved quantities
/// - `conservation_swt.csv`, `conservation_spectrogram.csv`: `t, mass, energy`
/// - `swt_initial.psf2`, `spectrogram_initial.psf2`
pub fn write(dir: &Path, cfg: &ExperimentConfig, out: &CaseOutcome) -> Result<()> {
    prepare_dir(dir, cfg)?;
    let axis = cfg.output_axis()?;
    for (i, _) in out.times.iter().enumerate() {
        let rows = (0..axis.count()).map(|j| {
            vec![
                axis.at(j),
                out.truth[i][j],
                out.swt.marginals[i][j],
                out.spectrogram.marginals[i][j],
            ]
        });
        write_csv(&dir.join(format!("marginals_{i:03}.csv")), &["x", "exact", "swt", "spectrogram"], rows)?;
    }
    let header = [
        "t",
        "swt_error",
        "spectrogram_error",
        "swt_drift",
        "spectrogram_drift",
        "swt_mass",
        "swt_energy",
        "spectrogram_mass",
        "spectrogram_energy",
    ];
    let rows = out.report.rows.iter().map(|r| {
        vec![
            r.t,
            r.swt_error,
            r.spectrogram_error,
            r.swt_drift,
            r.spectrogram_drift,
            r.swt_mass,
            r.swt_energy,
            r.spectrogram_mass,
            r.spectrogram_energy,
        ]
    });
    write_csv(&dir.join("report.csv"), &header, rows)?;
    write_json(&dir.join("report.json"), &out.report)?;
    write_conservation_csv(&dir.join("conservation_swt.csv"), &conservation(&out.swt, &out.times))?;
    write_conservation_csv(&dir.join("conservation_spectrogram.csv"), &conservation(&out.spectrogram, &out.times))?;
    write_phase_space(&dir.join("swt_initial.psf2"), &out.swt0)?;
    write_phase_space(&dir.join("spectrogram_initial.psf2"), &out.spectrogram0)?;
    Ok(())
}
