use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{Axis, ComplexField1D};

/// `exp(-(K x^2 + Lambda x + M))` with `Re K > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    k: Complex64,
    lambda: Complex64,
    m: Complex64,
}

impl GaussianPacket {
    pub fn new(k: Complex64, lambda: Complex64, m: Complex64) -> Result<Self> {
        if !(k.re > 0.0) {
            return Err(invalid(format!("Re K must be positive, got {}", k.re)));
        }
        Ok(GaussianPacket { k, lambda, m })
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn m(&self) -> Complex64 {
        self.m
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (-(self.k * x * x + self.lambda * x + self.m)).exp()
    }

    /// Free evolution under `eps u_t = i (eps^2/2) u_xx`:
    ///
    /// ```text
    /// s = 1 + 2 i eps t K
    /// u(x, t) = s^{-1/2} exp(-(K x^2 + Lambda x) / s - M + i eps t Lambda^2 / (2 s))
    /// ```
    ///
    /// `s` stays in the upper half plane for `t > 0`, so the principal root is
    /// the continuous branch.
    pub fn eval_at(&self, eps: f64, t: f64, x: f64) -> Complex64 {
        let s = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 2.0 * eps * t) * self.k;
        let e = -(self.k * x * x + self.lambda * x) / s - self.m
            + Complex64::new(0.0, eps * t) * self.lambda * self.lambda / (2.0 * s);
        e.exp() / s.sqrt()
    }
}

/// Samples of the exact free-space solution at time `t`.
pub fn gaussian_packet_exact(p: &GaussianPacket, eps: f64, t: f64, axis: Axis) -> Result<ComplexField1D> {
    if !(t >= 0.0) {
        return Err(invalid(format!("time must be >= 0, got {t}")));
    }
    if !(eps > 0.0) {
        return Err(invalid("epsilon must be positive"));
    }
    Ok(ComplexField1D::from_fn(axis, |x| p.eval_at(eps, t, x)))
}

/// Sum of exact packets.
pub fn gaussian_sum_exact(ps: &[GaussianPacket], eps: f64, t: f64, axis: Axis) -> Result<ComplexField1D> {
    let mut out = ComplexField1D::zeros(axis);
    for p in ps {
        out = out.add(&gaussian_packet_exact(p, eps, t, axis)?)?;
    }
    Ok(out)
}

/// The three diagonal packets `exp(-(1+7i) x^2 / 0.1)`, `exp(-(0.2+3i) x^2 / 0.1)`,
/// `exp(-(0.9-8i) x^2 / 0.1)`.
pub fn three_gaussians() -> [GaussianPacket; 3] {
    let z = Complex64::new(0.0, 0.0);
    [(1.0, 7.0), (0.2, 3.0), (0.9, -8.0)]
        .map(|(a, b)| GaussianPacket::new(Complex64::new(a, b) / 0.1, z, z).expect("Re K > 0"))
}

/// Largest supported Hermite index.
pub const MAX_HERMITE_INDEX: usize = 60;

/// Normalized eigenfunction `n` of `-(eps^2/2) d^2/dx^2 + (omega^2/2) x^2`:
/// `(omega/eps)^{1/4} h_n(x sqrt(omega/eps))` with `h_n` the L2-normalized
/// Hermite functions from their three-term recurrence. Eigenvalue
/// `eps omega (n + 1/2)`.
pub fn harmonic_eigenfunction(n: usize, omega: f64, eps: f64, axis: Axis) -> Result<ComplexField1D> {
    if n > MAX_HERMITE_INDEX {
        return Err(Error::Unsupported(format!(
            "Hermite index {n} exceeds {MAX_HERMITE_INDEX}"
        )));
    }
    if !(omega > 0.0) || !(eps > 0.0) {
        return Err(invalid("omega and eps must be positive"));
    }
    let scale = (omega / eps).sqrt();
    let norm = scale.sqrt();
    Ok(ComplexField1D::from_fn(axis, |x| Complex64::from(norm * hermite_function(n, x * scale))))
}

/// `h_n(xi)` with `int h_n^2 = 1`.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for j in 0..n {
        let next = (2.0 / (j + 1) as f64).sqrt() * xi * cur - (j as f64 / (j + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenfunction `n` at time `t`: `u(t) = u(0) exp(-i omega (n + 1/2) t)`.
pub fn harmonic_eigenstate_at(n: usize, omega: f64, eps: f64, t: f64, axis: Axis) -> Result<ComplexField1D> {
    let phase = Complex64::from_polar(1.0, -omega * (n as f64 + 0.5) * t);
    Ok(harmonic_eigenfunction(n, omega, eps, axis)?.scale(phase))
}

/// Envelope `A(x) = 0.25 [tanh(6.87 (x + 2.42)) + 1] [tanh(6.87 (2.42 - x)) + 1]`.
pub fn f_eps_envelope(x: f64) -> f64 {
    0.25 * ((6.87 * (x + 2.42)).tanh() + 1.0) * ((6.87 * (2.42 - x)).tanh() + 1.0)
}

/// Phase `S(x) = -x^4/4 - x^2 + 2x`.
pub fn f_eps_phase(x: f64) -> f64 {
    -x.powi(4) / 4.0 - x * x + 2.0 * x
}

/// Ridge `k = S'(x) = -x^3 - 2x + 2` on which the transforms concentrate.
pub fn f_eps_ridge(x: f64) -> f64 {
    -x.powi(3) - 2.0 * x + 2.0
}

/// `f^eps(x) = A(x) exp(2 pi i S(x) / eps)`.
pub fn build_f_eps(eps: f64, axis: Axis) -> Result<ComplexField1D> {
    if !(eps > 0.0) {
        return Err(invalid("epsilon must be positive"));
    }
    Ok(ComplexField1D::from_fn(axis, |x| {
        Complex64::from_polar(f_eps_envelope(x), 2.0 * PI * f_eps_phase(x) / eps)
    }))
}
