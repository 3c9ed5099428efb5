//! Sparse bivariate polynomials `sum c_mn x^m k^n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Coefficient ring for [`Poly2`].
pub trait Coeff:
    Copy
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + fmt::Debug
    + Send
    + Sync
{
    fn from_f64(v: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl Coeff for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Coeff for Complex64 {
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Polynomial in `(x, k)`; the key `(m, n)` stands for `x^m k^n`.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Poly2<T: Coeff> {
    terms: BTreeMap<(u32, u32), T>,
}

pub type RealPoly = Poly2<f64>;
pub type ComplexPoly = Poly2<Complex64>;

impl<T: Coeff> Default for Poly2<T> {
    fn default() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Coeff> Poly2<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(m: u32, n: u32, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(m, n, c);
        p
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, 0, T::one())
    }

    /// The polynomial `k`.
    pub fn k() -> Self {
        Self::monomial(0, 1, T::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), T)>) -> Self {
        let mut p = Self::zero();
        for ((m, n), c) in terms {
            p.add_term(m, n, c);
        }
        p
    }

    pub fn add_term(&mut self, m: u32, n: u32, c: T) {
        if c == T::zero() {
            return;
        }
        let entry = self.terms.entry((m, n)).or_insert(T::zero());
        *entry = *entry + c;
        if *entry == T::zero() {
            self.terms.remove(&(m, n));
        }
    }

    pub fn coeff(&self, m: u32, n: u32) -> T {
        self.terms.get(&(m, n)).copied().unwrap_or(T::zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), T)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
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

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(m, _)| m).max().unwrap_or(0)
    }

    pub fn degree_k(&self) -> u32 {
        self.terms.keys().map(|&(_, n)| n).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(m, n)| m + n).max().unwrap_or(0)
    }

    pub fn depends_on_k(&self) -> bool {
        self.terms.keys().any(|&(_, n)| n > 0)
    }

    pub fn eval(&self, x: f64, k: f64) -> T {
        let mut acc = T::zero();
        for (&(m, n), &c) in &self.terms {
            acc = acc + c * T::from_f64(x.powi(m as i32) * k.powi(n as i32));
        }
        acc
    }

    pub fn scale(&self, c: T) -> Self {
        Self::from_terms(self.terms().map(|(key, v)| (key, v * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(T::one());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `d^a/dx^a d^b/dk^b` of the polynomial.
    pub fn derivative(&self, a: u32, b: u32) -> Self {
        let mut out = Self::zero();
        for (&(m, n), &c) in &self.terms {
            if m < a || n < b {
                continue;
            }
            let f = falling(m, a) * falling(n, b);
            out.add_term(m - a, n - b, c * T::from_f64(f));
        }
        out
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(T) -> U) -> Poly2<U> {
        Poly2::from_terms(self.terms().map(|(key, v)| (key, f(v))))
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Drops coefficients below `tol` in magnitude.
    pub fn pruned(&self, tol: f64) -> Self {
        Self::from_terms(self.terms().filter(|(_, c)| c.magnitude() > tol))
    }
}

impl ComplexPoly {
    pub fn re(&self) -> RealPoly {
        self.map(|c| c.re)
    }

    pub fn im(&self) -> RealPoly {
        self.map(|c| c.im)
    }
}

impl RealPoly {
    pub fn to_complex(&self) -> ComplexPoly {
        self.map(|c| Complex64::new(c, 0.0))
    }
}

/// `m (m-1) ... (m-a+1)`
fn falling(m: u32, a: u32) -> f64 {
    (0..a).map(|i| (m - i) as f64).product()
}

impl<T: Coeff> Add for &Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for ((m, n), c) in rhs.terms() {
            out.add_term(m, n, c);
        }
        out
    }
}

impl<T: Coeff> Sub for &Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for ((m, n), c) in rhs.terms() {
            out.add_term(m, n, -c);
        }
        out
    }
}

impl<T: Coeff> Mul for &Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = Poly2::zero();
        for ((m1, n1), c1) in self.terms() {
            for ((m2, n2), c2) in rhs.terms() {
                out.add_term(m1 + m2, n1 + n2, c1 * c2);
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        self.scale(-T::one())
    }
}

impl<T: Coeff> fmt::Debug for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(m, n), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            if m > 0 {
                write!(f, "*x^{m}")?;
            }
            if n > 0 {
                write!(f, "*k^{n}")?;
            }
        }
        Ok(())
    }
}
