//! Brute-force quadrature of the defining integrals, one phase-space point at a
//! time. Slow and independent of the FFT path; meant for tests and `verify`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::SmoothingParams;
use crate::fourier::TrigInterpolant;
use crate::grid::ComplexField1D;

/// `int_{-y_half}^{y_half} e^{-2 pi i k y} f(x + eps y/2) conj(g(x - eps y/2)) dy`
/// by the rectangle rule with `n` nodes.
pub fn wigner_point_oracle(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    eps: f64,
    x: f64,
    k: f64,
    y_half: f64,
    n: usize,
) -> Complex64 {
    let dy = 2.0 * y_half / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let y = -y_half + (j as f64 + 0.5) * dy;
        let v = f(x + 0.5 * eps * y) * g(x - 0.5 * eps * y).conj();
        if v != Complex64::new(0.0, 0.0) {
            acc += v * Complex64::from_polar(1.0, -2.0 * PI * k * y);
        }
    }
    acc * dy
}

/// [`wigner_point_oracle`] for sampled fields, using their trigonometric
/// interpolants (zero off the axis). The lag range and step are chosen from the
/// axis so that the rectangle rule resolves the integrand.
pub fn wigner_point_oracle_fields(f: &ComplexField1D, g: &ComplexField1D, eps: f64, x: f64, k: f64) -> Complex64 {
    let fi = TrigInterpolant::new(f);
    let gi = TrigInterpolant::new(g);
    let axis = f.axis();
    let y_half = axis.period() / eps;
    let dy = 1.0 / (2.0 * (k.abs() + 2.0 * eps / axis.step()));
    let n = (2.0 * y_half / dy).ceil() as usize;
    wigner_point_oracle(|s| fi.eval(s), |s| gi.eval(s), eps, x, k, y_half, n)
}

/// Gaussian-window spectrogram at one point from its short-time Fourier
/// transform: `(1/eps) |int f(y) h(y - x) e^{-2 pi i k y / eps} dy|^2`, with the
/// window of [`SmoothingParams::spectrogram_window`]. Integrates over
/// `[lo, hi]` with `n` nodes.
pub fn spectrogram_point_oracle(
    f: impl Fn(f64) -> Complex64,
    params: &SmoothingParams,
    x: f64,
    k: f64,
    lo: f64,
    hi: f64,
    n: usize,
) -> f64 {
    let eps = params.eps();
    let dy = (hi - lo) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let y = lo + (j as f64 + 0.5) * dy;
        let h = params.spectrogram_window(y - x);
        if h == 0.0 {
            continue;
        }
        acc += f(y) * h * Complex64::from_polar(1.0, -2.0 * PI * k * y / eps);
    }
    (acc * dy).norm_sqr() / eps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_at_origin() {
        let f = |x: f64| Complex64::new((-PI * x * x).exp(), 0.0);
        let v = wigner_point_oracle(f, f, 1.0, 0.0, 0.0, 8.0, 4000);
        assert!((v.re - 2f64.sqrt()).abs() < 1e-8 && v.im.abs() < 1e-12);
    }

    #[test]
    fn far_from_support_vanishes() {
        let f = |x: f64| Complex64::new((-PI * x * x).exp(), 0.0);
        let g = |x: f64| Complex64::new((-PI * (x - 0.5).powi(2)).exp(), 0.0);
        let v = wigner_point_oracle(f, g, 1.0, 40.0, 3.0, 8.0, 4000);
        assert!(v.norm() < 1e-12);
    }
}
