use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::ComplexField1D;
use crate::io::{atomic_write, read_field, write_field};

use super::potential::PotentialSpec;

/// Wavefunction snapshots of one run.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub eps: f64,
    pub potential: PotentialSpec,
    pub times: Vec<f64>,
    pub snapshots: Vec<ComplexField1D>,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    eps: f64,
    potential: PotentialSpec,
    snapshots: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    t: f64,
    file: String,
}

pub const MANIFEST_NAME: &str = "manifest.json";

impl TimeSeries {
    pub fn new(eps: f64, potential: PotentialSpec) -> Self {
        TimeSeries {
            eps,
            potential,
            times: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, u: ComplexField1D) {
        self.times.push(t);
        self.snapshots.push(u);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &ComplexField1D)> {
        self.times.iter().copied().zip(&self.snapshots)
    }

    pub fn last(&self) -> Option<&ComplexField1D> {
        self.snapshots.last()
    }

    /// Writes `snap_NNNN.psf1` files and `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut entries = Vec::with_capacity(self.len());
        for (i, (t, u)) in self.iter().enumerate() {
            let file = format!("snap_{i:04}.psf1");
            write_field(&dir.join(&file), u)?;
            entries.push(ManifestEntry { t, file });
        }
        let m = Manifest {
            eps: self.eps,
            potential: self.potential.clone(),
            snapshots: entries,
        };
        let text = serde_json::to_string_pretty(&m).map_err(|e| Error::Format(e.to_string()))?;
        atomic_write(&dir.join(MANIFEST_NAME), text.as_bytes())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST_NAME))?;
        let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
        let mut out = TimeSeries::new(m.eps, m.potential);
        for e in m.snapshots {
            out.push(e.t, read_field(&dir.join(&e.file))?);
        }
        Ok(out)
    }
}
