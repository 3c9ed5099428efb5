//! FFT evaluation of Wigner transforms and their Gaussian smoothings.
//!
//! For every lag `y_j` the two fields are shifted by `+-eps y_j / 2` with
//! trigonometric interpolation, multiplied, and damped by the `k`-part of the
//! smoothing multiplier. One FFT per `x` row then maps `y` to `k`, and the
//! `x`-part of the multiplier is applied by one FFT per `k` column along the
//! field axis. Total cost is `O(N^2 log N)`.
//!
//! The lag window is sized from the supports of the inputs (and the decay of
//! the multiplier), so the internal `k` spacing may be a fraction of the grid
//! spacing; only every `stride`-th internal wavenumber is kept.

use std::f64::consts::PI;

use libm::erfc;
use ndarray::{Array2, Axis as NdAxis};
use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{ComplexPhaseSpaceField, FieldKind, PhaseSpaceField, PhaseSpaceGrid};
use super::params::{Regime, SmoothingParams};
use crate::error::{invalid, Error, Result};
use crate::fourier::{fftfreq, forward_ft, is_nyquist, shifted_from_spectrum, transform_onto, Direction, FftPair};
use crate::grid::{Axis, ComplexField1D, EpsilonParam};

/// Amplitudes below this fraction of the maximum count as outside the support.
const NEGLIGIBLE_AMPLITUDE: f64 = 1e-13;
/// `-ln` of the multiplier value at which the lag window is cut.
const MULTIPLIER_CUTOFF: f64 = 36.9;
/// Spectral mass fraction ignored when measuring bandwidth.
const BAND_TAIL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformOptions {
    /// Largest fraction of `|f^|^2` that may land outside the `k` axis (after
    /// smoothing). `None` disables the check.
    pub k_mass_tolerance: Option<f64>,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            k_mass_tolerance: Some(1e-6),
        }
    }
}

/// `W^eps[f, g]` on `grid`. Complex in general.
pub fn cross_wigner(
    f: &ComplexField1D,
    g: &ComplexField1D,
    eps: EpsilonParam,
    grid: &PhaseSpaceGrid,
) -> Result<ComplexPhaseSpaceField> {
    cross_smoothed_wigner(f, g, &SmoothingParams::unsmoothed(eps.get())?, grid)
}

/// Smoothed cross transform `W~[f, g]`.
pub fn cross_smoothed_wigner(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
) -> Result<ComplexPhaseSpaceField> {
    cross_smoothed_wigner_with(f, g, params, grid, &TransformOptions::default())
}

pub fn cross_smoothed_wigner_with(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
    opts: &TransformOptions,
) -> Result<ComplexPhaseSpaceField> {
    let values = engine(f, g, params, grid, opts)?;
    ComplexPhaseSpaceField::new(*grid, values)
}

/// `W^eps[f, g]` stored as a real field. Fails unless the transform is real,
/// which in practice means `f == g`; use [`cross_wigner`] otherwise.
pub fn wigner(
    f: &ComplexField1D,
    g: &ComplexField1D,
    eps: EpsilonParam,
    grid: &PhaseSpaceGrid,
) -> Result<PhaseSpaceField> {
    cross_wigner(f, g, eps, grid)?.into_real(FieldKind::Wigner)
}

/// Smoothed Wigner transform of `f`.
pub fn smoothed_wigner(f: &ComplexField1D, params: &SmoothingParams, grid: &PhaseSpaceGrid) -> Result<PhaseSpaceField> {
    smoothed_wigner_with(f, params, grid, &TransformOptions::default())
}

pub fn smoothed_wigner_with(
    f: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
    opts: &TransformOptions,
) -> Result<PhaseSpaceField> {
    let kind = if params.is_unsmoothed() {
        FieldKind::Wigner
    } else {
        FieldKind::Smoothed
    };
    cross_smoothed_wigner_with(f, f, params, grid, opts)?.into_real(kind)
}

/// Gaussian-window spectrogram, computed as the critically smoothed transform.
pub fn spectrogram(f: &ComplexField1D, params: &SmoothingParams, grid: &PhaseSpaceGrid) -> Result<PhaseSpaceField> {
    spectrogram_with(f, params, grid, &TransformOptions::default())
}

pub fn spectrogram_with(
    f: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
    opts: &TransformOptions,
) -> Result<PhaseSpaceField> {
    if params.regime() != Regime::Critical {
        return Err(invalid(format!(
            "a Gaussian-window spectrogram needs sigma_x * sigma_k = 1, got {}",
            params.product()
        )));
    }
    let s = smoothed_wigner_with(f, params, grid, opts)?.with_kind(FieldKind::Spectrogram);
    let floor = -1e-12 * s.max_abs().max(1.0);
    if s.min() < floor {
        return Err(Error::OutOfDomain(format!(
            "spectrogram has negative value {:e}; the grid is too coarse for this signal",
            s.min()
        )));
    }
    Ok(s)
}

/// Offset and stride of the grid's `x` samples within the field axis.
fn locate(field: &Axis, gx: &Axis) -> Result<(usize, usize)> {
    let dx = field.step();
    let qf = gx.step() / dx;
    let q = qf.round();
    if q < 1.0 || (qf - q).abs() > 1e-6 * q {
        return Err(invalid(format!(
            "grid x step {} is not a multiple of the field step {dx}",
            gx.step()
        )));
    }
    let of = (gx.start() - field.start()) / dx;
    let o = of.round();
    if (of - o).abs() > 1e-6 {
        return Err(invalid("grid x samples are not field nodes"));
    }
    let last = o + (gx.count() - 1) as f64 * q;
    if o < 0.0 || last > (field.count() - 1) as f64 {
        return Err(Error::OutOfDomain(format!(
            "grid x range [{}, {}] exceeds the field axis [{}, {}]",
            gx.start(),
            gx.last(),
            field.start(),
            field.last()
        )));
    }
    Ok((o as usize, q as usize))
}

/// `[x_lo, x_hi]` outside which `|f|` is negligible, or `None` for a zero field.
fn support(f: &ComplexField1D) -> Option<(f64, f64)> {
    let max = f.max_abs();
    if max == 0.0 {
        return None;
    }
    let thr = NEGLIGIBLE_AMPLITUDE * max;
    let v = f.values();
    let lo = v.iter().position(|z| z.norm() > thr)?;
    let hi = v.iter().rposition(|z| z.norm() > thr)?;
    Some((f.axis().at(lo), f.axis().at(hi)))
}

/// Range of frequencies holding all but `BAND_TAIL` of `|f^|^2`.
fn spectral_band(f: &ComplexField1D) -> (f64, f64) {
    let fh = forward_ft(f);
    let p: Vec<f64> = fh.values().iter().map(|v| v.norm_sqr()).collect();
    let total: f64 = p.iter().sum();
    let cut = 0.5 * BAND_TAIL * total;
    let mut acc = 0.0;
    let mut lo = 0;
    for (i, &m) in p.iter().enumerate() {
        acc += m;
        if acc > cut {
            lo = i;
            break;
        }
    }
    acc = 0.0;
    let mut hi = p.len() - 1;
    for (i, &m) in p.iter().enumerate().rev() {
        acc += m;
        if acc > cut {
            hi = i;
            break;
        }
    }
    (fh.axis().at(lo), fh.axis().at(hi))
}

fn check_k_extent(f: &ComplexField1D, params: &SmoothingParams, k_axis: &Axis, tol: f64) -> Result<()> {
    let eps = params.eps();
    let fh = forward_ft(f);
    let sd = params.kernel_variances().1.sqrt();
    let lo = k_axis.start() - 0.5 * k_axis.step();
    let hi = k_axis.last() + 0.5 * k_axis.step();
    let mut total = 0.0;
    let mut outside = 0.0;
    for (kappa, v) in fh.axis().samples().zip(fh.values()) {
        let p = v.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let k = eps * kappa;
        let miss = if sd == 0.0 {
            if k < lo || k > hi {
                1.0
            } else {
                0.0
            }
        } else {
            let s = sd * std::f64::consts::SQRT_2;
            0.5 * erfc((k - lo) / s) + 0.5 * erfc((hi - k) / s)
        };
        total += p;
        outside += p * miss;
    }
    if total > 0.0 && outside > tol * total {
        return Err(Error::OutOfDomain(format!(
            "k axis [{lo}, {hi}] misses {:.3e} of the spectral mass (eps = {eps}); widen it",
            outside / total
        )));
    }
    Ok(())
}

/// Band-limited refinement of `f` by an integer factor (spectral zero padding).
fn upsample(f: &ComplexField1D, factor: usize) -> ComplexField1D {
    if factor == 1 {
        return f.clone();
    }
    let axis = *f.axis();
    let n = axis.count();
    let m = n * factor;
    let p = FftPair::new(n);
    let mut spec = f.values().to_vec();
    p.fwd.process(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for (i, &c) in spec.iter().enumerate() {
        if is_nyquist(i, n) {
            out[i] += 0.5 * c;
            out[m - (n - i)] += 0.5 * c;
        } else if i < n / 2 + n % 2 {
            out[i] = c;
        } else {
            out[m - (n - i)] = c;
        }
    }
    FftPair::new(m).inv.process(&mut out);
    let inv = 1.0 / n as f64;
    out.iter_mut().for_each(|v| *v *= inv);
    let fine = Axis::new(axis.start(), axis.step() / factor as f64, m).expect("refined axis");
    ComplexField1D::new(fine, out).expect("finite refinement")
}

/// Refinement needed so that `f(x + s) conj(g(x - s))` is not aliased.
fn upsample_factor(f: &ComplexField1D, g: &ComplexField1D) -> usize {
    let (flo, fhi) = spectral_band(f);
    let (glo, ghi) = spectral_band(g);
    let zmax = (fhi - glo).max(ghi - flo).abs();
    let dx = f.axis().step();
    let mut u = 1;
    while 2.0 * dx / u as f64 * zmax >= 1.0 && u < 4 {
        u *= 2;
    }
    u
}

fn engine(
    f: &ComplexField1D,
    g: &ComplexField1D,
    params: &SmoothingParams,
    grid: &PhaseSpaceGrid,
    opts: &TransformOptions,
) -> Result<Array2<Complex64>> {
    f.check_same_axis(g)?;
    let axis = *f.axis();
    let (i0, q) = locate(&axis, grid.x_axis())?;
    let (nx, nk) = grid.shape();
    let (sf, sg) = match (support(f), support(g)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(Array2::zeros((nx, nk))),
    };
    let same = f.values() == g.values();
    if let Some(tol) = opts.k_mass_tolerance {
        check_k_extent(f, params, grid.k_axis(), tol)?;
        if !same {
            check_k_extent(g, params, grid.k_axis(), tol)?;
        }
    }

    let eps = params.eps();
    let (sx, sk) = (params.sigma_x(), params.sigma_k());
    let up = if sx > 0.0 { upsample_factor(f, g) } else { 1 };
    let fu = upsample(f, up);
    let gu = if same { fu.clone() } else { upsample(g, up) };
    let fine = *fu.axis();
    let nf = fine.count();
    let rows: Vec<usize> = if sx > 0.0 {
        (0..nf).collect()
    } else {
        (0..nx).map(|ix| (i0 + ix * q) * up).collect()
    };

    // Lag window.
    let reach = (sf.1 - sg.0).max(sg.1 - sf.0).max(0.0) / eps + 2.0 * axis.step() / eps;
    let decay = if sk > 0.0 {
        (2.0 * MULTIPLIER_CUTOFF / (PI * eps * sk * sk)).sqrt()
    } else {
        f64::INFINITY
    };
    let y_half = reach.min(decay);
    let dk = grid.k_axis().step();
    let stride = ((2.0 * y_half * dk).ceil() as usize).max(1);
    let ny = stride * nk;
    let dy = 1.0 / (nk as f64 * dk);
    let y_axis = Axis::new(-((ny / 2) as f64) * dy, dy, ny)?;

    let plans = FftPair::new(nf);
    let freqs = fftfreq(nf, fine.step());
    let mut spec_f = fu.values().to_vec();
    plans.fwd.process(&mut spec_f);
    let spec_g = if same {
        spec_f.clone()
    } else {
        let mut s = gu.values().to_vec();
        plans.fwd.process(&mut s);
        s
    };

    let zero = Complex64::new(0.0, 0.0);
    let corr: Vec<Vec<Complex64>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let y = y_axis.at(j);
            let s = 0.5 * eps * y;
            let damp = (-(PI * eps / 2.0) * sk * sk * y * y).exp();
            if damp == 0.0 {
                return vec![zero; rows.len()];
            }
            let a = shifted_from_spectrum(&spec_f, s, &plans, &freqs);
            let b = shifted_from_spectrum(&spec_g, -s, &plans, &freqs);
            rows.iter()
                .map(|&n| {
                    let x = fine.at(n);
                    if axis.contains(x + s) && axis.contains(x - s) {
                        a[n] * b[n].conj() * damp
                    } else {
                        zero
                    }
                })
                .collect()
        })
        .collect();

    let yplans = FftPair::new(ny);
    let k0 = grid.k_axis().start();
    let mut out = Array2::<Complex64>::zeros((rows.len(), nk));
    out.axis_iter_mut(NdAxis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(r, mut row)| {
            let line: Vec<Complex64> = corr.iter().map(|c| c[r]).collect();
            let t = transform_onto(&line, &y_axis, k0, dk / stride as f64, Direction::Forward, &yplans);
            for m in 0..nk {
                row[m] = t[m * stride];
            }
        });
    drop(corr);

    if sx == 0.0 {
        return Ok(out);
    }
    let damp: Vec<f64> = freqs
        .iter()
        .map(|z| (-(PI * eps / 2.0) * sx * sx * z * z).exp() / nf as f64)
        .collect();
    out.axis_iter_mut(NdAxis(1)).into_par_iter().for_each(|mut col| {
        let mut buf: Vec<Complex64> = col.iter().copied().collect();
        plans.fwd.process(&mut buf);
        buf.iter_mut().zip(&damp).for_each(|(v, d)| *v *= *d);
        plans.inv.process(&mut buf);
        col.iter_mut().zip(buf).for_each(|(c, v)| *c = v);
    });
    Ok(Array2::from_shape_fn((nx, nk), |(ix, m)| out[[(i0 + ix * q) * up, m]]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(axis: Axis) -> ComplexField1D {
        ComplexField1D::from_fn(axis, |x| Complex64::new((-PI * x * x).exp(), 0.0))
    }

    #[test]
    fn upsampling_is_band_limited_interpolation() {
        let axis = Axis::centered(1.0 / 16.0, 256).unwrap();
        let f = ComplexField1D::from_fn(axis, |x| Complex64::from_polar((-PI * x * x).exp(), 2.0 * PI * 1.5 * x));
        let fine = upsample(&f, 2);
        for (x, v) in fine.axis().samples().zip(fine.values()) {
            let exact = Complex64::from_polar((-PI * x * x).exp(), 2.0 * PI * 1.5 * x);
            assert!((v - exact).norm() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn misaligned_or_oversized_grids_rejected() {
        let axis = Axis::centered(0.05, 256).unwrap();
        let f = gaussian(axis);
        let eps = EpsilonParam::new(1.0).unwrap();
        let k = Axis::centered(0.1, 64).unwrap();
        let off = PhaseSpaceGrid::new(Axis::new(0.013, 0.05, 10).unwrap(), k);
        assert!(matches!(wigner(&f, &f, eps, &off), Err(Error::InvalidArgument(_))));
        let wide = PhaseSpaceGrid::new(Axis::new(-7.0, 0.05, 400).unwrap(), k);
        assert!(matches!(wigner(&f, &f, eps, &wide), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn narrow_k_axis_rejected() {
        let axis = Axis::centered(0.05, 256).unwrap();
        let f = gaussian(axis);
        let eps = EpsilonParam::new(1.0).unwrap();
        let grid = PhaseSpaceGrid::new(axis, Axis::centered(0.05, 16).unwrap());
        assert!(matches!(wigner(&f, &f, eps, &grid), Err(Error::OutOfDomain(_))));
    }
}
