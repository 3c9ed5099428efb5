use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{same_axis, Axis};

/// Cartesian `(x, k)` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    x_axis: Axis,
    k_axis: Axis,
}

impl PhaseSpaceGrid {
    pub fn new(x_axis: Axis, k_axis: Axis) -> Self {
        PhaseSpaceGrid { x_axis, k_axis }
    }

    /// The grid a discrete transform of samples on `x_axis` naturally lands on:
    /// the same `x` samples and `k = eps * (dual of x_axis)`, i.e. `N` wavenumbers
    /// with step `eps / (N dx)`.
    pub fn natural(x_axis: Axis, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(invalid("epsilon must be positive"));
        }
        Ok(PhaseSpaceGrid {
            x_axis,
            k_axis: x_axis.dual().scaled(eps)?,
        })
    }

    /// A grid whose `x` samples are every `stride`-th node of `field_axis`
    /// inside `[x_lo, x_hi]`.
    pub fn aligned(field_axis: &Axis, x_lo: f64, x_hi: f64, stride: usize, k_axis: Axis) -> Result<Self> {
        if stride == 0 {
            return Err(invalid("stride must be >= 1"));
        }
        let dx = field_axis.step();
        let i0 = ((x_lo - field_axis.start()) / dx - 1e-9).ceil().max(0.0) as usize;
        let i1 = ((x_hi - field_axis.start()) / dx + 1e-9).floor();
        let i1 = i1.min((field_axis.count() - 1) as f64);
        if i1 < i0 as f64 {
            return Err(invalid(format!("no field nodes in [{x_lo}, {x_hi}]")));
        }
        let count = (i1 as usize - i0) / stride + 1;
        let x_axis = Axis::new(field_axis.at(i0), dx * stride as f64, count)?;
        Ok(PhaseSpaceGrid { x_axis, k_axis })
    }

    pub fn x_axis(&self) -> &Axis {
        &self.x_axis
    }

    pub fn k_axis(&self) -> &Axis {
        &self.k_axis
    }

    /// `(nx, nk)`
    pub fn shape(&self) -> (usize, usize) {
        (self.x_axis.count(), self.k_axis.count())
    }

    pub fn cell_area(&self) -> f64 {
        self.x_axis.step() * self.k_axis.step()
    }

    pub fn contains(&self, x: f64, k: f64) -> bool {
        self.x_axis.contains(x) && self.k_axis.contains(k)
    }

    pub(crate) fn same_as(&self, other: &PhaseSpaceGrid) -> bool {
        same_axis(&self.x_axis, &other.x_axis) && same_axis(&self.k_axis, &other.k_axis)
    }
}

/// What a [`PhaseSpaceField`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Wigner,
    Smoothed,
    Spectrogram,
}

impl FieldKind {
    pub fn tag(self) -> u32 {
        match self {
            FieldKind::Wigner => 0,
            FieldKind::Smoothed => 1,
            FieldKind::Spectrogram => 2,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Self> {
        match tag {
            0 => Some(FieldKind::Wigner),
            1 => Some(FieldKind::Smoothed),
            2 => Some(FieldKind::Spectrogram),
            _ => None,
        }
    }
}

/// Real phase-space density. `values[[ix, ik]]` is the value at
/// `(x_axis.at(ix), k_axis.at(ik))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    grid: PhaseSpaceGrid,
    values: Array2<f64>,
    kind: FieldKind,
}

impl PhaseSpaceField {
    pub fn new(grid: PhaseSpaceGrid, values: Array2<f64>, kind: FieldKind) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(invalid(format!(
                "values have shape {:?}, grid is {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("phase-space values must be finite"));
        }
        Ok(PhaseSpaceField { grid, values, kind })
    }

    pub fn zeros(grid: PhaseSpaceGrid, kind: FieldKind) -> Self {
        PhaseSpaceField {
            grid,
            values: Array2::zeros(grid.shape()),
            kind,
        }
    }

    pub fn from_fn(grid: PhaseSpaceGrid, kind: FieldKind, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(grid.x_axis.at(i), grid.k_axis.at(j)));
        PhaseSpaceField { grid, values, kind }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: FieldKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn at(&self, ix: usize, ik: usize) -> f64 {
        self.values[[ix, ik]]
    }

    /// Same grid and kind, new values.
    pub fn with_values(&self, values: Array2<f64>) -> Result<Self> {
        PhaseSpaceField::new(self.grid, values, self.kind)
    }

    /// `int int W dx dk` by the rectangle rule.
    pub fn total(&self) -> f64 {
        self.values.sum() * self.grid.cell_area()
    }

    /// `int int |W| dx dk`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// `int int phi(x, k) W dx dk`.
    pub fn integrate(&self, phi: impl Fn(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for ((i, j), &w) in self.values.indexed_iter() {
            if w != 0.0 {
                acc += phi(self.grid.x_axis.at(i), self.grid.k_axis.at(j)) * w;
            }
        }
        acc * self.grid.cell_area()
    }

    fn check_grid(&self, other: &PhaseSpaceField) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(invalid("phase-space fields live on different grids"));
        }
        Ok(())
    }

    pub fn sub(&self, other: &PhaseSpaceField) -> Result<PhaseSpaceField> {
        self.check_grid(other)?;
        self.with_values(&self.values - &other.values)
    }

    pub fn add(&self, other: &PhaseSpaceField) -> Result<PhaseSpaceField> {
        self.check_grid(other)?;
        self.with_values(&self.values + &other.values)
    }

    pub fn scale(&self, c: f64) -> PhaseSpaceField {
        PhaseSpaceField {
            grid: self.grid,
            values: &self.values * c,
            kind: self.kind,
        }
    }

    /// `max |self - other|`.
    pub fn linf_distance(&self, other: &PhaseSpaceField) -> Result<f64> {
        self.check_grid(other)?;
        let mut m = 0.0f64;
        Zip::from(&self.values).and(&other.values).for_each(|a, b| m = m.max((a - b).abs()));
        Ok(m)
    }

    /// `int int |self - other| / int int |other|`.
    pub fn rel_l1_distance(&self, other: &PhaseSpaceField) -> Result<f64> {
        self.check_grid(other)?;
        let mut num = 0.0;
        Zip::from(&self.values).and(&other.values).for_each(|a, b| num += (a - b).abs());
        let den: f64 = other.values.iter().map(|v| v.abs()).sum();
        if den == 0.0 {
            return Err(Error::Degenerate("reference field is identically zero".into()));
        }
        Ok(num / den)
    }
}

/// Complex phase-space field, e.g. a cross-Wigner transform `W[f, g]` with `f != g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPhaseSpaceField {
    grid: PhaseSpaceGrid,
    values: Array2<Complex64>,
}

/// Largest admissible imaginary residue when a transform of `f` against itself
/// is stored as a real field, relative to `max(1, max |W|)`.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-10;

impl ComplexPhaseSpaceField {
    pub fn new(grid: PhaseSpaceGrid, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(invalid(format!(
                "values have shape {:?}, grid is {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        Ok(ComplexPhaseSpaceField { grid, values })
    }

    pub fn from_fn(grid: PhaseSpaceGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(grid.x_axis.at(i), grid.k_axis.at(j)));
        ComplexPhaseSpaceField { grid, values }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// The real part, without any check.
    pub fn re(&self, kind: FieldKind) -> PhaseSpaceField {
        PhaseSpaceField {
            grid: self.grid,
            values: self.values.mapv(|v| v.re),
            kind,
        }
    }

    /// The real part, after checking that the imaginary part is rounding noise.
    pub fn into_real(self, kind: FieldKind) -> Result<PhaseSpaceField> {
        let scale = self.max_abs().max(1.0);
        let residue = self.max_imag();
        if residue > IMAGINARY_RESIDUE_TOLERANCE * scale {
            return Err(invalid(format!(
                "transform is not real (imaginary residue {residue:e}); use the cross transform for f != g"
            )));
        }
        Ok(self.re(kind))
    }

    pub fn scale(&self, c: Complex64) -> ComplexPhaseSpaceField {
        ComplexPhaseSpaceField {
            grid: self.grid,
            values: self.values.mapv(|v| v * c),
        }
    }

    pub fn sub(&self, other: &ComplexPhaseSpaceField) -> Result<ComplexPhaseSpaceField> {
        if !self.grid.same_as(&other.grid) {
            return Err(invalid("phase-space fields live on different grids"));
        }
        Ok(ComplexPhaseSpaceField {
            grid: self.grid,
            values: &self.values - &other.values,
        })
    }

    pub fn linf_distance(&self, other: &ComplexPhaseSpaceField) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }
}
