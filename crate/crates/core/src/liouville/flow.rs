use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::error::{invalid, Error, Result};
use crate::reference::PotentialSpec;

/// Characteristics of the Liouville equation:
/// `dx/dt = 2 pi k`, `dk/dt = -V'(x) / (2 pi)`.
pub fn hamilton_rhs(v: &PotentialSpec, x: f64, k: f64) -> (f64, f64) {
    (2.0 * PI * k, -v.slope(x) / (2.0 * PI))
}

/// One classic Runge-Kutta step of size `h` (negative `h` runs backward).
pub fn rk4_step(v: &PotentialSpec, x: f64, k: f64, h: f64) -> (f64, f64) {
    let (a1, b1) = hamilton_rhs(v, x, k);
    let (a2, b2) = hamilton_rhs(v, x + 0.5 * h * a1, k + 0.5 * h * b1);
    let (a3, b3) = hamilton_rhs(v, x + 0.5 * h * a2, k + 0.5 * h * b2);
    let (a4, b4) = hamilton_rhs(v, x + h * a3, k + h * b3);
    (
        x + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        k + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
    )
}

/// RK4 over time `t` in `ceil(|t| / dt)` equal steps.
pub fn rk4_integrate(v: &PotentialSpec, x: f64, k: f64, t: f64, dt: f64) -> (f64, f64) {
    if t == 0.0 {
        return (x, k);
    }
    let n = (t.abs() / dt).ceil().max(1.0) as usize;
    let h = t / n as f64;
    (0..n).fold((x, k), |(x, k), _| rk4_step(v, x, k, h))
}

/// Default RK4 step: `min(0.01, period / 1000)` for a confining quadratic
/// potential, `0.01` otherwise.
pub fn default_step(v: &PotentialSpec) -> f64 {
    match v.omega() {
        Some(w) => (2.0 * PI / w / 1000.0).min(0.01),
        None => 0.01,
    }
}

/// Closed-form flow for `V = a x^s`, `s` in {0, 1, 2}.
pub fn exact_flow(a: f64, s: u32, t: f64, x: f64, k: f64) -> Result<(f64, f64)> {
    let (m, c) = affine_flow(a, s, t)?;
    let r = m * Vector2::new(x, k) + c;
    Ok((r[0], r[1]))
}

/// `(M, c)` with `phi_t(z) = M z + c`.
fn affine_flow(a: f64, s: u32, t: f64) -> Result<(Matrix2<f64>, Vector2<f64>)> {
    let shear = Matrix2::new(1.0, 2.0 * PI * t, 0.0, 1.0);
    match s {
        0 => Ok((shear, Vector2::zeros())),
        1 => Ok((shear, Vector2::new(-0.5 * a * t * t, -a * t / (2.0 * PI)))),
        2 if a == 0.0 => Ok((shear, Vector2::zeros())),
        2 => {
            // x'' = -2 a x
            let w = (2.0 * a.abs()).sqrt();
            let (c, sn, sign) = if a > 0.0 {
                ((w * t).cos(), (w * t).sin(), -1.0)
            } else {
                ((w * t).cosh(), (w * t).sinh(), 1.0)
            };
            let m = Matrix2::new(c, 2.0 * PI * sn / w, sign * w * sn / (2.0 * PI), c);
            Ok((m, Vector2::zeros()))
        }
        _ => Err(Error::Unsupported(format!("no closed-form flow for V = a x^{s}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    ExactS0,
    ExactS1,
    ExactS2,
    Numeric,
}

/// Time-`t` Hamiltonian flow `phi_t`.
#[derive(Debug, Clone)]
pub struct FlowMap {
    kind: FlowKind,
    t: f64,
    a: f64,
    potential: PotentialSpec,
    dt: f64,
}

impl FlowMap {
    /// Closed-form flow of `V = a x^s`.
    pub fn exact(a: f64, s: u32, t: f64) -> Result<Self> {
        let kind = match s {
            0 => FlowKind::ExactS0,
            1 => FlowKind::ExactS1,
            2 => FlowKind::ExactS2,
            _ => return Err(Error::Unsupported(format!("no closed-form flow for V = a x^{s}"))),
        };
        let coeffs = match s {
            0 => vec![a],
            1 => vec![0.0, a],
            _ => vec![0.0, 0.0, a],
        };
        Ok(FlowMap {
            kind,
            t,
            a,
            potential: PotentialSpec::polynomial(coeffs)?,
            dt: 0.01,
        })
    }

    /// RK4 flow with step `dt`.
    pub fn numeric(v: &PotentialSpec, t: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(invalid("time step must be positive"));
        }
        Ok(FlowMap {
            kind: FlowKind::Numeric,
            t,
            a: 0.0,
            potential: v.clone(),
            dt,
        })
    }

    /// Exact when `V = a x^s` with `s <= 2`, RK4 with [`default_step`] otherwise.
    pub fn for_potential(v: &PotentialSpec, t: f64) -> Self {
        match v.monomial() {
            Some((a, s)) => Self::exact(a, s, t).expect("s <= 2"),
            None => Self::numeric(v, t, default_step(v)).expect("positive step"),
        }
    }

    pub fn kind(&self) -> FlowKind {
        self.kind
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    fn s(&self) -> Option<u32> {
        match self.kind {
            FlowKind::ExactS0 => Some(0),
            FlowKind::ExactS1 => Some(1),
            FlowKind::ExactS2 => Some(2),
            FlowKind::Numeric => None,
        }
    }

    pub fn at_time(&self, t: f64) -> Self {
        FlowMap { t, ..self.clone() }
    }

    /// `phi_{-t}`.
    pub fn inverse(&self) -> Self {
        self.at_time(-self.t)
    }

    pub fn apply(&self, x: f64, k: f64) -> (f64, f64) {
        match self.s() {
            Some(s) => exact_flow(self.a, s, self.t, x, k).expect("valid exact flow"),
            None => rk4_integrate(&self.potential, x, k, self.t, self.dt),
        }
    }

    /// `(M, c)` with `phi_t(z) = M z + c`, for exact flows.
    pub fn affine(&self) -> Option<(Matrix2<f64>, Vector2<f64>)> {
        self.s().map(|s| affine_flow(self.a, s, self.t).expect("valid exact flow"))
    }
}
