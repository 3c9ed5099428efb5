//! Differential operators `sum eps^p c(x, k) d_x^a d_k^b` with polynomial
//! coefficients, their algebra, and their action on sampled phase-space fields.

use std::collections::BTreeMap;
use std::fmt;

use ndarray::{Array2, Axis as NdAxis, Zip};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::fourier::{derivative_in_place, FftPair};
use crate::phasespace::{ComplexPhaseSpaceField, PhaseSpaceField, PhaseSpaceGrid};
use crate::poly::{Coeff, Poly2};

/// One term `eps^eps_power * coeff(x, k) * d_x^dx d_k^dk`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpTerm<T: Coeff> {
    pub eps_power: u32,
    pub dx: u32,
    pub dk: u32,
    pub coeff: Poly2<T>,
}

/// Linear differential operator on phase space. The power of `eps` of every
/// term is kept symbolically; `eps` itself is stored for evaluation.
#[derive(Clone, PartialEq)]
pub struct DiffOperator<T: Coeff> {
    eps: f64,
    terms: BTreeMap<(u32, u32, u32), Poly2<T>>,
}

/// Real-coefficient operator; maps real fields to real fields.
pub type PhaseSpaceOperator = DiffOperator<f64>;
pub type ComplexOperator = DiffOperator<Complex64>;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl<T: Coeff> DiffOperator<T> {
    pub fn zero(eps: f64) -> Self {
        DiffOperator {
            eps,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(eps: f64) -> Self {
        Self::multiplication(eps, Poly2::constant(T::one()))
    }

    /// Multiplication by `c(x, k)`.
    pub fn multiplication(eps: f64, c: Poly2<T>) -> Self {
        let mut op = Self::zero(eps);
        op.add_term(0, 0, 0, c);
        op
    }

    pub fn from_terms(eps: f64, terms: impl IntoIterator<Item = OpTerm<T>>) -> Self {
        let mut op = Self::zero(eps);
        for t in terms {
            op.add_term(t.eps_power, t.dx, t.dk, t.coeff);
        }
        op
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn add_term(&mut self, eps_power: u32, dx: u32, dk: u32, coeff: Poly2<T>) {
        let key = (eps_power, dx, dk);
        let sum = match self.terms.get(&key) {
            Some(c) => c + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = OpTerm<T>> + '_ {
        self.terms.iter().map(|(&(p, a, b), c)| OpTerm {
            eps_power: p,
            dx: a,
            dk: b,
            coeff: c.clone(),
        })
    }

    /// Coefficient of `eps^p d_x^a d_k^b` (zero if absent).
    pub fn coefficient(&self, eps_power: u32, dx: u32, dk: u32) -> Poly2<T> {
        self.terms.get(&(eps_power, dx, dk)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_eps_power(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_derivative_order(&self) -> u32 {
        self.terms.keys().map(|k| k.1 + k.2).max().unwrap_or(0)
    }

    /// Terms with `eps` power at most `max_power`.
    pub fn keep_eps_powers(&self, max_power: u32) -> Self {
        DiffOperator {
            eps: self.eps,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.0 <= max_power)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    fn check_eps(&self, other: &Self) -> Result<()> {
        if (self.eps - other.eps).abs() > 1e-15 * self.eps.abs().max(1.0) {
            return Err(invalid("operators built for different eps"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_eps(other)?;
        let mut out = self.clone();
        for t in other.terms() {
            out.add_term(t.eps_power, t.dx, t.dk, t.coeff);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, c: T) -> Self {
        let mut out = Self::zero(self.eps);
        for t in self.terms() {
            out.add_term(t.eps_power, t.dx, t.dk, t.coeff.scale(c));
        }
        out
    }

    /// `self o other`, normalized by moving every derivative of `self` past the
    /// coefficients of `other` with the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_eps(other)?;
        let mut out = Self::zero(self.eps);
        for s in self.terms() {
            for o in other.terms() {
                for i in 0..=s.dx {
                    for j in 0..=s.dk {
                        let d = o.coeff.derivative(i, j);
                        if d.is_zero() {
                            continue;
                        }
                        let w = T::from_f64(binomial(s.dx, i) * binomial(s.dk, j));
                        let c = (&s.coeff * &d).scale(w);
                        out.add_term(s.eps_power + o.eps_power, s.dx - i + o.dx, s.dk - j + o.dk, c);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::identity(self.eps);
        for _ in 0..e {
            out = out.compose(self).expect("same eps");
        }
        out
    }

    /// Drops coefficients below `tol` in magnitude.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = Self::zero(self.eps);
        for t in self.terms() {
            out.add_term(t.eps_power, t.dx, t.dk, t.coeff.pruned(tol));
        }
        out
    }
}

impl ComplexOperator {
    /// Operator with the real parts of all coefficients.
    pub fn re(&self) -> PhaseSpaceOperator {
        let mut out = PhaseSpaceOperator::zero(self.eps);
        for t in self.terms() {
            out.add_term(t.eps_power, t.dx, t.dk, t.coeff.re());
        }
        out
    }
}

impl PhaseSpaceOperator {
    pub fn to_complex(&self) -> ComplexOperator {
        let mut out = ComplexOperator::zero(self.eps);
        for t in self.terms() {
            out.add_term(t.eps_power, t.dx, t.dk, t.coeff.to_complex());
        }
        out
    }
}

impl<T: Coeff> fmt::Debug for DiffOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DiffOperator(eps = {}) [", self.eps)?;
        for (&(p, a, b), c) in &self.terms {
            writeln!(f, "  eps^{p} d_x^{a} d_k^{b} : {c:?}")?;
        }
        write!(f, "]")
    }
}

/// `d_x^a d_k^b` of a sampled field by FFT along each axis. The field is
/// treated as periodic on the grid, so it must decay at the grid edges.
pub fn mixed_derivative(values: &Array2<Complex64>, grid: &PhaseSpaceGrid, a: u32, b: u32) -> Array2<Complex64> {
    let mut out = values.clone();
    let (nx, nk) = grid.shape();
    if a > 0 {
        let plans = FftPair::new(nx);
        let dx = grid.x_axis().step();
        out.axis_iter_mut(NdAxis(1)).into_par_iter().for_each(|mut col| {
            let mut buf: Vec<Complex64> = col.iter().copied().collect();
            derivative_in_place(&mut buf, dx, a, &plans);
            col.iter_mut().zip(buf).for_each(|(c, v)| *c = v);
        });
    }
    if b > 0 {
        let plans = FftPair::new(nk);
        let dk = grid.k_axis().step();
        out.axis_iter_mut(NdAxis(0)).into_par_iter().for_each(|mut row| {
            let mut buf: Vec<Complex64> = row.iter().copied().collect();
            derivative_in_place(&mut buf, dk, b, &plans);
            row.iter_mut().zip(buf).for_each(|(c, v)| *c = v);
        });
    }
    out
}

fn apply_values<T: Coeff>(
    op: &DiffOperator<T>,
    values: &Array2<Complex64>,
    grid: &PhaseSpaceGrid,
    to_complex: impl Fn(T) -> Complex64 + Sync,
) -> Array2<Complex64> {
    let mut by_order: BTreeMap<(u32, u32), Poly2<T>> = BTreeMap::new();
    for t in op.terms() {
        let scaled = t.coeff.scale(T::from_f64(op.eps.powi(t.eps_power as i32)));
        let e = by_order.entry((t.dx, t.dk)).or_default();
        *e = &*e + &scaled;
    }
    let mut out = Array2::<Complex64>::zeros(values.dim());
    for ((a, b), coeff) in by_order {
        if coeff.is_zero() {
            continue;
        }
        let d = mixed_derivative(values, grid, a, b);
        Zip::indexed(&mut out).and(&d).par_for_each(|(i, j), o, &dv| {
            let c = coeff.eval(grid.x_axis().at(i), grid.k_axis().at(j));
            *o += to_complex(c) * dv;
        });
    }
    out
}

/// Applies a real operator to a real field; the result is real by construction.
pub fn apply_operator(op: &PhaseSpaceOperator, w: &PhaseSpaceField) -> PhaseSpaceField {
    let values = w.values().mapv(|v| Complex64::new(v, 0.0));
    let out = apply_values(op, &values, w.grid(), |c| Complex64::new(c, 0.0));
    w.with_values(out.mapv(|v| v.re)).expect("finite result")
}

pub fn apply_complex_operator(op: &ComplexOperator, w: &ComplexPhaseSpaceField) -> ComplexPhaseSpaceField {
    let out = apply_values(op, w.values(), w.grid(), |c| c);
    ComplexPhaseSpaceField::new(*w.grid(), out).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RealPoly;

    #[test]
    fn leibniz_composition() {
        // d_x o x = x d_x + 1
        let dx = PhaseSpaceOperator::from_terms(
            1.0,
            [OpTerm {
                eps_power: 0,
                dx: 1,
                dk: 0,
                coeff: RealPoly::constant(1.0),
            }],
        );
        let x = PhaseSpaceOperator::multiplication(1.0, RealPoly::x());
        let c = dx.compose(&x).unwrap();
        assert_eq!(c.coefficient(0, 1, 0), RealPoly::x());
        assert_eq!(c.coefficient(0, 0, 0), RealPoly::constant(1.0));
        assert_eq!(c.len(), 2);
        // [d_x, x] = 1
        let comm = c.sub(&x.compose(&dx).unwrap()).unwrap();
        assert_eq!(comm, PhaseSpaceOperator::identity(1.0));
    }

    #[test]
    fn eps_powers_add_under_composition() {
        let a = PhaseSpaceOperator::from_terms(
            0.3,
            [OpTerm {
                eps_power: 1,
                dx: 0,
                dk: 1,
                coeff: RealPoly::constant(2.0),
            }],
        );
        let sq = a.pow(2);
        assert_eq!(sq.coefficient(2, 0, 2), RealPoly::constant(4.0));
        assert_eq!(sq.max_eps_power(), 2);
        assert!(sq.keep_eps_powers(1).is_zero());
    }

    #[test]
    fn mismatched_eps_rejected() {
        let a = PhaseSpaceOperator::identity(1.0);
        let b = PhaseSpaceOperator::identity(0.5);
        assert!(a.compose(&b).is_err());
        assert!(a.add(&b).is_err());
    }
}
