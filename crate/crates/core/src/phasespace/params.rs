use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::EpsilonParam;

/// How much a Gaussian kernel smooths, measured by `sigma_x * sigma_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `sigma_x * sigma_k < 1`; values may be negative.
    Subcritical,
    /// `sigma_x * sigma_k = 1`; the transform is a Gaussian-window spectrogram.
    Critical,
    /// `sigma_x * sigma_k > 1`.
    Supercritical,
}

/// Tolerance used when deciding whether `sigma_x * sigma_k == 1`.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Widths of the smoothing kernel together with the semiclassical parameter.
///
/// The kernel is
///
/// ```text
/// G(x, k) = 2 / (eps sx sk) * exp(-2 pi x^2 / (eps sx^2) - 2 pi k^2 / (eps sk^2))
/// ```
///
/// with unit mass and variances `eps sx^2 / (4 pi)` in `x`, `eps sk^2 / (4 pi)` in `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    sigma_x: f64,
    sigma_k: f64,
    eps: EpsilonParam,
}

impl SmoothingParams {
    pub fn new(sigma_x: f64, sigma_k: f64, eps: f64) -> Result<Self> {
        for (name, s) in [("sigma_x", sigma_x), ("sigma_k", sigma_k)] {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(invalid(format!("{name} must be finite and >= 0, got {s}")));
            }
        }
        Ok(SmoothingParams {
            sigma_x,
            sigma_k,
            eps: EpsilonParam::new(eps)?,
        })
    }

    /// No smoothing: the plain Wigner transform.
    pub fn unsmoothed(eps: f64) -> Result<Self> {
        Self::new(0.0, 0.0, eps)
    }

    /// Critical smoothing with the given `sigma_x` (`sigma_k = 1 / sigma_x`).
    pub fn critical(sigma_x: f64, eps: f64) -> Result<Self> {
        if !(sigma_x > 0.0) {
            return Err(invalid("critical smoothing needs sigma_x > 0"));
        }
        Self::new(sigma_x, 1.0 / sigma_x, eps)
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn sigma_k(&self) -> f64 {
        self.sigma_k
    }

    pub fn eps(&self) -> f64 {
        self.eps.get()
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.sigma_x, self.sigma_k, eps)
    }

    pub fn product(&self) -> f64 {
        self.sigma_x * self.sigma_k
    }

    pub fn regime(&self) -> Regime {
        let p = self.product();
        if (p - 1.0).abs() <= CRITICAL_TOLERANCE {
            Regime::Critical
        } else if p < 1.0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }

    pub fn is_unsmoothed(&self) -> bool {
        self.sigma_x == 0.0 && self.sigma_k == 0.0
    }

    /// Kernel variances `(eps sx^2 / 4pi, eps sk^2 / 4pi)`.
    pub fn kernel_variances(&self) -> (f64, f64) {
        let e = self.eps();
        (
            e * self.sigma_x * self.sigma_x / (4.0 * PI),
            e * self.sigma_k * self.sigma_k / (4.0 * PI),
        )
    }

    /// Fourier multiplier of the kernel, `exp(-(pi eps / 2)(sx^2 z^2 + sk^2 y^2))`,
    /// where `z` is dual to `x` and `y` dual to `k`.
    pub fn multiplier(&self, z: f64, y: f64) -> f64 {
        let e = self.eps();
        (-(PI * e / 2.0) * (self.sigma_x.powi(2) * z * z + self.sigma_k.powi(2) * y * y)).exp()
    }

    /// Kernel value at `(x, k)`. Undefined (panics) for a zero width.
    pub fn kernel(&self, x: f64, k: f64) -> f64 {
        assert!(self.sigma_x > 0.0 && self.sigma_k > 0.0, "kernel needs positive widths");
        let e = self.eps();
        2.0 / (e * self.product())
            * (-2.0 * PI * x * x / (e * self.sigma_x.powi(2))
                - 2.0 * PI * k * k / (e * self.sigma_k.powi(2)))
            .exp()
    }

    /// Window of the equivalent spectrogram at critical smoothing,
    /// `h(x) = c exp(-pi x^2 / (eps sx^2))` with `c^2 = sqrt(2) / (sx sqrt(eps))`.
    ///
    /// `|h|^2` is a unit-mass Gaussian of variance `eps sx^2 / (4 pi)` and
    /// `S(x, k) = (1/eps) |int f(y) h(y - x) exp(-2 pi i k y / eps) dy|^2`.
    pub fn spectrogram_window(&self, x: f64) -> f64 {
        let e = self.eps();
        let c = (2f64.sqrt() / (self.sigma_x * e.sqrt())).sqrt();
        c * (-PI * x * x / (e * self.sigma_x.powi(2))).exp()
    }
}
