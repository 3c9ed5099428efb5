//! Continuous Fourier transforms approximated on uniform grids.
//!
//! One convention is used everywhere in the crate:
//!
//! ```text
//! f^(k) = \int e^{-2 pi i k x} f(x) dx,      f(x) = \int e^{2 pi i k x} f^(k) dk
//! ```
//!
//! Integrals are rectangle-rule sums evaluated with an FFT. Fields are treated
//! as zero outside their axis and every transform is periodized, so callers
//! must pad their data.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::grid::{Axis, ComplexField1D};

type Plan = Arc<dyn Fft<f64>>;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// Forward and inverse (unnormalized) FFT plans for one length.
#[derive(Clone)]
pub(crate) struct FftPair {
    pub fwd: Plan,
    pub inv: Plan,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        let mut p = planner().lock().expect("fft planner poisoned");
        FftPair {
            fwd: p.plan_fft_forward(n),
            inv: p.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }
}

/// Signed FFT frequencies for `n` samples of spacing `d`, in FFT order.
pub fn fftfreq(n: usize, d: f64) -> Vec<f64> {
    let scale = 1.0 / (n as f64 * d);
    (0..n)
        .map(|i| {
            let m = if i <= (n - 1) / 2 { i as i64 } else { i as i64 - n as i64 };
            m as f64 * scale
        })
        .collect()
}

/// True for the unpaired Nyquist bin of an even-length transform.
pub(crate) fn is_nyquist(i: usize, n: usize) -> bool {
    n % 2 == 0 && i == n / 2
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Direction {
    /// kernel e^{-2 pi i k x}
    Forward,
    /// kernel e^{+2 pi i k x}
    Inverse,
}

/// Rectangle-rule transform of samples on `from` onto the reciprocal axis
/// starting at `to_start`. `to_step` must equal `1 / from.period()` up to
/// rounding; passing the caller's own value keeps round trips exact.
pub(crate) fn transform_onto(
    values: &[Complex64],
    from: &Axis,
    to_start: f64,
    to_step: f64,
    dir: Direction,
    plans: &FftPair,
) -> Vec<Complex64> {
    let n = from.count();
    debug_assert_eq!(values.len(), n);
    debug_assert_eq!(plans.len(), n);
    let s = match dir {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let dy = from.step();
    let y0 = from.start();
    debug_assert!((to_step * from.period() - 1.0).abs() < 1e-9);
    let dk = to_step;
    // Phases are tracked in turns and reduced to [-1/2, 1/2] before scaling by
    // 2 pi, so long axes far from the origin keep full precision.
    let mut buf: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(j, &h)| h * turn(s * product_turns(to_start, dy, j as f64)))
        .collect();
    match dir {
        Direction::Forward => plans.fwd.process(&mut buf),
        Direction::Inverse => plans.inv.process(&mut buf),
    }
    let base = product_turns(to_start, y0, 1.0);
    for (l, v) in buf.iter_mut().enumerate() {
        *v *= dy * turn(s * frac(base + product_turns(dk, y0, l as f64)));
    }
    buf
}

fn frac(t: f64) -> f64 {
    t - t.round()
}

/// Fractional part of `a * b * j`, with the two products compensated so the
/// result stays accurate when the product is many turns.
fn product_turns(a: f64, b: f64, j: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    let r = frac(p);
    let q = r * j;
    let qe = r.mul_add(j, -q);
    frac(frac(q) + qe + e * j)
}

/// `e^{2 pi i t}`
fn turn(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t)
}

/// `f^` sampled on the dual axis of `f`.
pub fn forward_ft(f: &ComplexField1D) -> ComplexField1D {
    let dual = f.axis().dual();
    forward_ft_onto(f, dual.start())
}

/// `f^` sampled on the reciprocal axis of `f` that starts at `k_start`.
pub fn forward_ft_onto(f: &ComplexField1D, k_start: f64) -> ComplexField1D {
    let axis = *f.axis();
    let plans = FftPair::new(axis.count());
    let dk = 1.0 / axis.period();
    let out = transform_onto(f.values(), &axis, k_start, dk, Direction::Forward, &plans);
    let k_axis = Axis::new(k_start, dk, axis.count()).expect("valid dual axis");
    ComplexField1D::new(k_axis, out).expect("transform output is finite")
}

/// Inverse transform of a spectrum onto `x_axis`, which must be reciprocal to
/// the spectrum's axis (same count, step `1 / fhat.axis().period()`).
pub fn inverse_ft(fhat: &ComplexField1D, x_axis: &Axis) -> Result<ComplexField1D> {
    let k_axis = *fhat.axis();
    if x_axis.count() != k_axis.count() || (x_axis.step() * k_axis.period() - 1.0).abs() > 1e-9 {
        return Err(invalid("target axis is not reciprocal to the spectrum axis"));
    }
    let plans = FftPair::new(k_axis.count());
    let out = transform_onto(fhat.values(), &k_axis, x_axis.start(), x_axis.step(), Direction::Inverse, &plans);
    ComplexField1D::new(*x_axis, out)
}

/// `d^order f / dx^order` by multiplication with `(2 pi i k)^order`.
///
/// The field must be smooth and decay to machine zero at both axis ends (or be
/// genuinely periodic on the axis); otherwise the periodization shows up as
/// Gibbs ringing.
pub fn spectral_derivative(f: &ComplexField1D, order: u32) -> ComplexField1D {
    if order == 0 {
        return f.clone();
    }
    let axis = *f.axis();
    let n = axis.count();
    let plans = FftPair::new(n);
    let mut buf = f.values().to_vec();
    derivative_in_place(&mut buf, axis.step(), order, &plans);
    ComplexField1D::new(axis, buf).expect("finite derivative")
}

pub(crate) fn derivative_in_place(buf: &mut [Complex64], dx: f64, order: u32, plans: &FftPair) {
    let n = buf.len();
    plans.fwd.process(buf);
    let freqs = fftfreq(n, dx);
    for (i, v) in buf.iter_mut().enumerate() {
        if order % 2 == 1 && is_nyquist(i, n) {
            *v = Complex64::new(0.0, 0.0);
            continue;
        }
        let m = Complex64::new(0.0, 2.0 * PI * freqs[i]).powu(order);
        *v *= m / n as f64;
    }
    plans.inv.process(buf);
}

/// Band-limited (trigonometric) interpolation of periodic samples, evaluated at
/// every node shifted by `shift`: returns `f(x_n + shift)`.
///
/// `spectrum` is the unnormalized forward FFT of the samples.
pub(crate) fn shifted_from_spectrum(
    spectrum: &[Complex64],
    shift: f64,
    plans: &FftPair,
    freqs: &[f64],
) -> Vec<Complex64> {
    let n = spectrum.len();
    let inv_n = 1.0 / n as f64;
    let mut buf: Vec<Complex64> = spectrum
        .iter()
        .zip(freqs)
        .enumerate()
        .map(|(i, (&c, &k))| {
            if is_nyquist(i, n) {
                c * (2.0 * PI * k * shift).cos() * inv_n
            } else {
                c * Complex64::from_polar(inv_n, 2.0 * PI * k * shift)
            }
        })
        .collect();
    plans.inv.process(&mut buf);
    buf
}

/// Trigonometric interpolant of a sampled field, evaluated by direct summation.
/// O(N) per point; meant for oracles and spot checks.
pub struct TrigInterpolant {
    axis: Axis,
    spectrum: Vec<Complex64>,
    freqs: Vec<f64>,
}

impl TrigInterpolant {
    pub fn new(f: &ComplexField1D) -> Self {
        let axis = *f.axis();
        let n = axis.count();
        let plans = FftPair::new(n);
        let mut spectrum = f.values().to_vec();
        plans.fwd.process(&mut spectrum);
        let inv_n = 1.0 / n as f64;
        spectrum.iter_mut().for_each(|c| *c *= inv_n);
        TrigInterpolant {
            axis,
            spectrum,
            freqs: fftfreq(n, axis.step()),
        }
    }

    /// Value of the periodic interpolant at `x`.
    pub fn eval_periodic(&self, x: f64) -> Complex64 {
        let n = self.spectrum.len();
        let t = x - self.axis.start();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (&c, &k)) in self.spectrum.iter().zip(&self.freqs).enumerate() {
            if is_nyquist(i, n) {
                acc += c * (2.0 * PI * k * t).cos();
            } else {
                acc += c * Complex64::from_polar(1.0, 2.0 * PI * k * t);
            }
        }
        acc
    }

    /// Like [`eval_periodic`](Self::eval_periodic) but zero outside the axis.
    pub fn eval(&self, x: f64) -> Complex64 {
        if self.axis.contains(x) {
            self.eval_periodic(x)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Evaluates the trigonometric interpolant of a field at one point.
pub fn trig_interpolate(f: &ComplexField1D, x: f64) -> Complex64 {
    TrigInterpolant::new(f).eval_periodic(x)
}
