//! Both sides of the single-factor identities, for checking a transform
//! implementation against the operators of [`super::evolution`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::fourier::spectral_derivative;
use crate::grid::ComplexField1D;
use crate::phasespace::{cross_smoothed_wigner, ComplexPhaseSpaceField, PhaseSpaceGrid, SmoothingParams};

use super::evolution::{position_operator, position_operator_right, wavenumber_operator, wavenumber_operator_right};
use super::operator::{apply_complex_operator, ComplexOperator};

/// Transform of the modified pair (`lhs`) and the operator applied to the
/// transform of the original pair (`rhs`), on the same grid.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub lhs: ComplexPhaseSpaceField,
    pub rhs: ComplexPhaseSpaceField,
}

impl IdentityCheck {
    /// `max |lhs - rhs|`.
    pub fn abs_residual(&self) -> f64 {
        self.lhs.linf_distance(&self.rhs).expect("same grid")
    }

    /// `max |lhs - rhs| / max(1, max |lhs|)`.
    pub fn residual(&self) -> f64 {
        self.abs_residual() / self.lhs.max_abs().max(1.0)
    }
}

fn check(
    lhs_pair: (&ComplexField1D, &ComplexField1D),
    f: &ComplexField1D,
    g: &ComplexField1D,
    op: &ComplexOperator,
    factor: Complex64,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
) -> Result<IdentityCheck> {
    let lhs = cross_smoothed_wigner(lhs_pair.0, lhs_pair.1, params, grid)?;
    let w = cross_smoothed_wigner(f, g, params, grid)?;
    let rhs = apply_complex_operator(op, &w).scale(factor);
    Ok(IdentityCheck { lhs, rhs })
}

fn times_x(f: &ComplexField1D) -> ComplexField1D {
    let mut out = f.clone();
    let axis = *f.axis();
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        *v *= axis.at(i);
    }
    out
}

fn eps_derivative(f: &ComplexField1D, eps: f64) -> ComplexField1D {
    spectral_derivative(f, 1).scale(Complex64::from(eps))
}

/// `W~[x f, g] = X W~[f, g]`.
pub fn position_identity(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
) -> Result<IdentityCheck> {
    let xf = times_x(f);
    check((&xf, g), f, g, &position_operator(params), Complex64::from(1.0), params, grid)
}

/// `W~[f, x g] = X' W~[f, g]`.
pub fn position_identity_right(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
) -> Result<IdentityCheck> {
    let xg = times_x(g);
    check((f, &xg), f, g, &position_operator_right(params), Complex64::from(1.0), params, grid)
}

/// `W~[eps f', g] = 2 pi i K W~[f, g]`.
pub fn derivative_identity(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
) -> Result<IdentityCheck> {
    let df = eps_derivative(f, params.eps());
    let op = wavenumber_operator(params);
    check((&df, g), f, g, &op, Complex64::new(0.0, 2.0 * PI), params, grid)
}

/// `W~[f, eps g'] = -2 pi i K' W~[f, g]`.
pub fn derivative_identity_right(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
) -> Result<IdentityCheck> {
    let dg = eps_derivative(g, params.eps());
    let op = wavenumber_operator_right(params);
    check((f, &dg), f, g, &op, Complex64::new(0.0, -2.0 * PI), params, grid)
}
