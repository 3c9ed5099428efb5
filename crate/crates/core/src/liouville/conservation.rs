use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::write_csv;
use crate::phasespace::{trace_observable, PhaseSpaceField};
use crate::poly::RealPoly;

/// Mass and energy of one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationRow {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
}

/// Mass `int W` and energy `int H W` for each `(t, W)`.
pub fn conservation_report<'a>(
    series: impl IntoIterator<Item = (f64, &'a PhaseSpaceField)>,
    hamiltonian: &RealPoly,
) -> Vec<ConservationRow> {
    series
        .into_iter()
        .map(|(t, w)| ConservationRow {
            t,
            mass: w.total(),
            energy: trace_observable(hamiltonian, w),
        })
        .collect()
}

/// Largest relative change of mass and energy with respect to the first row.
pub fn relative_drift(rows: &[ConservationRow]) -> (f64, f64) {
    let Some(first) = rows.first() else {
        return (0.0, 0.0);
    };
    let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
    rows.iter().fold((0.0f64, 0.0f64), |(m, e), r| {
        (m.max(rel(r.mass, first.mass)), e.max(rel(r.energy, first.energy)))
    })
}

pub fn write_conservation_csv(path: &Path, rows: &[ConservationRow]) -> Result<()> {
    write_csv(path, &["t", "mass", "energy"], rows.iter().map(|r| vec![r.t, r.mass, r.energy]))
}
