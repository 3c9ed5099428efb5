use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::poly::RealPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Free,
    UniformField,
    Harmonic,
    GeneralPolynomial,
}

/// Real polynomial potential `V(x) = sum c_j x^j`, tagged with its family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPotential", into = "RawPotential")]
pub struct PotentialSpec {
    kind: PotentialKind,
    coefficients: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPotential {
    kind: PotentialKind,
    /// Ascending powers of `x`.
    coefficients: Vec<f64>,
}

impl TryFrom<RawPotential> for PotentialSpec {
    type Error = crate::Error;

    fn try_from(r: RawPotential) -> Result<Self> {
        PotentialSpec::new(r.kind, r.coefficients)
    }
}

impl From<PotentialSpec> for RawPotential {
    fn from(p: PotentialSpec) -> Self {
        RawPotential {
            kind: p.kind,
            coefficients: p.coefficients,
        }
    }
}

fn trim(mut c: Vec<f64>) -> Vec<f64> {
    while c.last() == Some(&0.0) {
        c.pop();
    }
    c
}

impl PotentialSpec {
    /// Checks that `coefficients` (ascending powers) fit `kind`.
    pub fn new(kind: PotentialKind, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(invalid("potential coefficients must be finite"));
        }
        let c = trim(coefficients);
        let only = |j: usize| c.iter().enumerate().all(|(i, &v)| i == j || v == 0.0);
        match kind {
            PotentialKind::Free if !c.is_empty() => Err(invalid("free potential must be zero")),
            PotentialKind::UniformField if !(c.len() == 2 && only(1)) => {
                Err(invalid("uniform field potential must be c x with c != 0"))
            }
            PotentialKind::Harmonic if !(c.len() == 3 && only(2) && c[2] > 0.0) => {
                Err(invalid("harmonic potential must be (omega^2 / 2) x^2 with omega^2 > 0"))
            }
            _ => Ok(PotentialSpec { kind, coefficients: c }),
        }
    }

    pub fn free() -> Self {
        PotentialSpec {
            kind: PotentialKind::Free,
            coefficients: Vec::new(),
        }
    }

    /// `V(x) = c x`.
    pub fn uniform_field(c: f64) -> Result<Self> {
        Self::new(PotentialKind::UniformField, vec![0.0, c])
    }

    /// `V(x) = (omega_sq / 2) x^2`.
    pub fn harmonic(omega_sq: f64) -> Result<Self> {
        Self::new(PotentialKind::Harmonic, vec![0.0, 0.0, omega_sq / 2.0])
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        Self::new(PotentialKind::GeneralPolynomial, coefficients)
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn poly(&self) -> RealPoly {
        RealPoly::from_terms(self.coefficients.iter().enumerate().map(|(j, &c)| ((j as u32, 0), c)))
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    fn horner(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
    }

    pub fn value(&self, x: f64) -> f64 {
        Self::horner(&self.coefficients, x)
    }

    /// `V'(x)`.
    pub fn slope(&self, x: f64) -> f64 {
        let d: Vec<f64> = self.coefficients.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect();
        Self::horner(&d, x)
    }

    pub fn curvature(&self, x: f64) -> f64 {
        let d: Vec<f64> = self
            .coefficients
            .iter()
            .enumerate()
            .skip(2)
            .map(|(j, &c)| (j * (j - 1)) as f64 * c)
            .collect();
        Self::horner(&d, x)
    }

    /// `(a, s)` with `V = a x^s` when `s` is 0, 1 or 2 (a constant potential
    /// counts as `s = 0`).
    pub fn monomial(&self) -> Option<(f64, u32)> {
        match self.coefficients.len() {
            0 => Some((0.0, 0)),
            1 => Some((self.coefficients[0], 0)),
            n @ (2 | 3) if self.coefficients[..n - 1].iter().all(|&c| c == 0.0) => {
                Some((self.coefficients[n - 1], (n - 1) as u32))
            }
            _ => None,
        }
    }

    /// Angular frequency for a harmonic potential.
    pub fn omega(&self) -> Option<f64> {
        match self.monomial() {
            Some((a, 2)) if a > 0.0 => Some((2.0 * a).sqrt()),
            _ => None,
        }
    }
}
