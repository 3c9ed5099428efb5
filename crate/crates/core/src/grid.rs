//! Uniform axes and sampled complex fields.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A uniform one-dimensional sampling: sample `i` sits at `start + i * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    start: f64,
    step: f64,
    count: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(invalid(format!("axis step must be positive, got {step}")));
        }
        if !start.is_finite() {
            return Err(invalid("axis start must be finite"));
        }
        if count < 2 {
            return Err(invalid(format!("axis needs at least 2 samples, got {count}")));
        }
        Ok(Axis { start, step, count })
    }

    /// Axis of `count` samples centred on zero: `(i - count/2) * step`.
    pub fn centered(step: f64, count: usize) -> Result<Self> {
        Axis::new(-((count / 2) as f64) * step, step, count)
    }

    /// Axis with `count` samples spanning `[lo, hi)` (the right end is excluded,
    /// matching the periodic picture used by the transforms).
    pub fn spanning(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(invalid(format!("empty span [{lo}, {hi})")));
        }
        Axis::new(lo, (hi - lo) / count as f64, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Position of the last sample.
    pub fn last(&self) -> f64 {
        self.at(self.count - 1)
    }

    /// Length of one period of the sampling, `count * step`.
    pub fn period(&self) -> f64 {
        self.count as f64 * self.step
    }

    pub fn samples(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.at(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.samples().collect()
    }

    /// True when `x` lies in `[start, last]` up to a small relative slack.
    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-9 * self.step;
        x >= self.start - slack && x <= self.last() + slack
    }

    /// Index of the sample closest to `x`, clamped to the axis.
    pub fn nearest_index(&self, x: f64) -> usize {
        let r = ((x - self.start) / self.step).round();
        r.clamp(0.0, (self.count - 1) as f64) as usize
    }

    /// The frequency axis paired with this one by the discrete transform:
    /// step `1 / (count * step)`, centred on zero frequency.
    pub fn dual(&self) -> Axis {
        let dk = 1.0 / self.period();
        Axis {
            start: -((self.count / 2) as f64) * dk,
            step: dk,
            count: self.count,
        }
    }

    /// Every coordinate multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Axis> {
        Axis::new(self.start * factor, self.step * factor, self.count)
    }
}

/// The semiclassical parameter (typical wavelength). Always positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EpsilonParam(f64);

impl EpsilonParam {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid(format!("epsilon must be positive, got {eps}")));
        }
        Ok(EpsilonParam(eps))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Uniformly sampled complex wavefunction. Treated as zero outside its axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField1D {
    axis: Axis,
    values: Vec<Complex64>,
}

impl ComplexField1D {
    pub fn new(axis: Axis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != axis.count() {
            return Err(invalid(format!(
                "field has {} values for an axis of {} samples",
                values.len(),
                axis.count()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("field contains non-finite values"));
        }
        Ok(ComplexField1D { axis, values })
    }

    pub fn zeros(axis: Axis) -> Self {
        ComplexField1D {
            axis,
            values: vec![Complex64::new(0.0, 0.0); axis.count()],
        }
    }

    pub fn from_fn(axis: Axis, f: impl Fn(f64) -> Complex64) -> Self {
        let values = axis.samples().map(f).collect();
        ComplexField1D { axis, values }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Squared L2 norm by the rectangle rule.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.axis.step()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other> = sum conj(self) * other * dx`.
    pub fn inner(&self, other: &ComplexField1D) -> Result<Complex64> {
        self.check_same_axis(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.axis.step())
    }

    /// `|u(x)|^2` at every sample.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> ComplexField1D {
        let values = self
            .axis
            .samples()
            .zip(&self.values)
            .map(|(x, &v)| f(x, v))
            .collect();
        ComplexField1D {
            axis: self.axis,
            values,
        }
    }

    pub fn scale(&self, c: Complex64) -> ComplexField1D {
        self.map(|_, v| c * v)
    }

    pub fn add(&self, other: &ComplexField1D) -> Result<ComplexField1D> {
        self.check_same_axis(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexField1D {
            axis: self.axis,
            values,
        })
    }

    pub fn sub(&self, other: &ComplexField1D) -> Result<ComplexField1D> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Relative L2 distance `||self - other|| / ||other||` (absolute if `other` is zero).
    pub fn rel_l2_distance(&self, other: &ComplexField1D) -> Result<f64> {
        self.check_same_axis(other)?;
        let diff: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let base: f64 = other.values.iter().map(|b| b.norm_sqr()).sum();
        Ok(if base > 0.0 {
            (diff / base).sqrt()
        } else {
            diff.sqrt()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_same_axis(&self, other: &ComplexField1D) -> Result<()> {
        if !same_axis(&self.axis, &other.axis) {
            return Err(invalid("fields live on different axes"));
        }
        Ok(())
    }
}

pub(crate) fn same_axis(a: &Axis, b: &Axis) -> bool {
    a.count() == b.count()
        && (a.step() - b.step()).abs() <= 1e-12 * a.step()
        && (a.start() - b.start()).abs() <= 1e-9 * a.step()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_an_arithmetic_progression() {
        let a = Axis::new(-1.0, 0.5, 5).unwrap();
        assert_eq!(a.to_vec(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let b = Axis::new(0.0, 1.0, 2).unwrap();
        assert_eq!(b.to_vec(), vec![0.0, 1.0]);
    }

    #[test]
    fn dual_step_matches_transform_spacing() {
        let a = Axis::new(-8.0, 1.0 / 64.0, 1024).unwrap();
        assert!((a.dual().step() - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(a.dual().count(), 1024);
        assert!((a.dual().start() + 32.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(Axis::new(0.0, 0.0, 4).is_err());
        assert!(Axis::new(0.0, -1.0, 4).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(f64::NAN, 1.0, 4).is_err());
        assert!(EpsilonParam::new(0.0).is_err());
        assert!(EpsilonParam::new(0.3).is_ok());
    }

    #[test]
    fn field_length_must_match_axis() {
        let a = Axis::new(0.0, 1.0, 3).unwrap();
        assert!(ComplexField1D::new(a, vec![Complex64::new(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn gaussian_norm_by_rectangle_rule() {
        let a = Axis::centered(0.01, 2048).unwrap();
        let f = ComplexField1D::from_fn(a, |x| Complex64::new((-std::f64::consts::PI * x * x).exp(), 0.0));
        // integral of exp(-2 pi x^2) = 1/sqrt(2)
        assert!((f.norm_sqr() - 0.5f64.sqrt()).abs() < 1e-12);
    }
}
