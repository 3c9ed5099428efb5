use std::f64::consts::PI;

use nalgebra::Matrix2;
use ndarray::{Array2, Axis as NdAxis};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{fftfreq, FftPair};
use crate::phasespace::{FieldKind, PhaseSpaceField, SmoothingParams};

use super::flow::FlowMap;

/// Covariance `M S0 M^T` of the smoothing kernel carried by a linear flow,
/// where `S0 = diag(eps sx^2, eps sk^2) / (4 pi)`.
pub fn distorted_kernel_covariance(params: &SmoothingParams, flow: &FlowMap) -> Result<Matrix2<f64>> {
    let (m, _) = flow
        .affine()
        .ok_or_else(|| Error::Unsupported("kernel transport needs a closed-form (linear) flow".into()))?;
    let (vx, vk) = params.kernel_variances();
    let s0 = Matrix2::new(vx, 0.0, 0.0, vk);
    Ok(m * s0 * m.transpose())
}

fn fft_axis(a: &mut Array2<Complex64>, axis: usize, inverse: bool) {
    let n = a.len_of(NdAxis(axis));
    let plans = FftPair::new(n);
    let other = 1 - axis;
    a.axis_iter_mut(NdAxis(other)).into_par_iter().for_each(|mut lane| {
        let mut buf: Vec<Complex64> = lane.iter().copied().collect();
        if inverse {
            plans.inv.process(&mut buf);
        } else {
            plans.fwd.process(&mut buf);
        }
        lane.iter_mut().zip(buf).for_each(|(c, v)| *c = v);
    });
}

/// Convolution with the unit-mass Gaussian of covariance `cov`, by FFT on a
/// grid padded to twice its size in each direction.
pub fn gaussian_convolve(w: &PhaseSpaceField, cov: &Matrix2<f64>) -> PhaseSpaceField {
    let (nx, nk) = w.grid().shape();
    let (px, pk) = (2 * nx, 2 * nk);
    let mut a = Array2::<Complex64>::zeros((px, pk));
    for ((i, j), &v) in w.values().indexed_iter() {
        a[[i, j]] = Complex64::new(v, 0.0);
    }
    fft_axis(&mut a, 0, false);
    fft_axis(&mut a, 1, false);
    let fx = fftfreq(px, w.grid().x_axis().step());
    let fk = fftfreq(pk, w.grid().k_axis().step());
    let norm = 1.0 / (px * pk) as f64;
    for ((i, j), c) in a.indexed_iter_mut() {
        let (p, q) = (fx[i], fk[j]);
        let quad = cov[(0, 0)] * p * p + 2.0 * cov[(0, 1)] * p * q + cov[(1, 1)] * q * q;
        *c *= (-2.0 * PI * PI * quad).exp() * norm;
    }
    fft_axis(&mut a, 0, true);
    fft_axis(&mut a, 1, true);
    let out = Array2::from_shape_fn((nx, nk), |(i, j)| a[[i, j]].re);
    w.with_values(out).expect("finite")
}

/// What the Liouville-transported smoothed transform equals at time `t`:
/// the exact Wigner transform `W_t` convolved with the smoothing kernel
/// carried along the linear flow.
pub fn kernel_evolution_reference(
    w_t: &PhaseSpaceField,
    params: &SmoothingParams,
    flow: &FlowMap,
) -> Result<PhaseSpaceField> {
    let cov = distorted_kernel_covariance(params, flow)?;
    Ok(gaussian_convolve(w_t, &cov).with_kind(FieldKind::Smoothed))
}
