//! Phase-space pictures of the initial condition.

use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use smoothwig::io::{write_csv, write_phase_space};
use smoothwig::phasespace::{marginal_k, marginal_x, smoothed_wigner, spectrogram, wigner, PhaseSpaceField};
use smoothwig::EpsilonParam;

use crate::config::ExperimentConfig;
use crate::output::{prepare_dir, write_json};
use crate::pipeline::initial_field;

pub struct Transforms {
    pub wigner: PhaseSpaceField,
    pub swt: PhaseSpaceField,
    pub spectrogram: PhaseSpaceField,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub min: f64,
    pub max: f64,
    pub total: f64,
}

impl FieldSummary {
    fn of(w: &PhaseSpaceField) -> Self {
        FieldSummary {
            min: w.min(),
            max: w.values().fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
            total: w.total(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformSummary {
    pub wigner: FieldSummary,
    pub swt: FieldSummary,
    pub spectrogram: FieldSummary,
}

pub fn compute(cfg: &ExperimentConfig) -> Result<Transforms> {
    let u = initial_field(cfg)?;
    let grid = cfg.phase_space_grid()?;
    Ok(Transforms {
        wigner: wigner(&u, &u, EpsilonParam::new(cfg.eps)?, &grid)?,
        swt: smoothed_wigner(&u, &cfg.smoothing_params()?, &grid)?,
        spectrogram: spectrogram(&u, &cfg.spectrogram_params()?, &grid)?,
    })
}

/// Writes `wigner.psf2`, `swt.psf2`, `spectrogram.psf2`, the marginals
/// `marginal_x.csv` (`x, wigner, swt, spectrogram`, integrated over `k`) and
/// `marginal_k.csv` (integrated over `x`), `summary.json` and `config.toml`.
pub fn write(dir: &Path, cfg: &ExperimentConfig, t: &Transforms) -> Result<()> {
    prepare_dir(dir, cfg)?;
    let all = [("wigner", &t.wigner), ("swt", &t.swt), ("spectrogram", &t.spectrogram)];
    for (name, w) in all {
        write_phase_space(&dir.join(format!("{name}.psf2")), w)?;
    }
    let grid = t.wigner.grid();
    let mx: Vec<Vec<f64>> = all.iter().map(|(_, w)| marginal_k(w)).collect();
    write_csv(
        &dir.join("marginal_x.csv"),
        &["x", "wigner", "swt", "spectrogram"],
        grid.x_axis().samples().enumerate().map(|(i, x)| vec![x, mx[0][i], mx[1][i], mx[2][i]]),
    )?;
    let mk: Vec<Vec<f64>> = all.iter().map(|(_, w)| marginal_x(w)).collect();
    write_csv(
        &dir.join("marginal_k.csv"),
        &["k", "wigner", "swt", "spectrogram"],
        grid.k_axis().samples().enumerate().map(|(j, k)| vec![k, mk[0][j], mk[1][j], mk[2][j]]),
    )?;
    let summary = TransformSummary {
        wigner: FieldSummary::of(&t.wigner),
        swt: FieldSummary::of(&t.swt),
        spectrogram: FieldSummary::of(&t.spectrogram),
    };
    write_json(&dir.join("summary.json"), &summary)
}
