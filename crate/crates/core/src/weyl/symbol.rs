//! Polynomial Weyl symbols and their text form.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! symbol  := term ((';' | newline) term)*
//! term    := [label ':'] expr          labels are annotations and do not change the value
//! expr    := factor (('+' | '-') factor)*   where the first factor may carry a sign
//! factor  := unary ('*' unary)*
//! unary   := ('+' | '-') unary | power
//! power   := atom ['^' integer]
//! atom    := number ['i'] | 'i' | 'x' | 'k' | 'pi' | '(' expr ')'
//! ```
//!
//! A number written directly before `i` is imaginary: `0.5i`, `145i`. Terms
//! are summed, so `"kinetic: 0.5i*(2*pi*k)^2; potential: 145i*x^2"` is the
//! symbol `i ((2 pi k)^2 / 2 + 145 x^2)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::poly::{ComplexPoly, RealPoly};

/// `L(x, k) = sum c_mn x^m k^n` with complex coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct PolynomialSymbol(ComplexPoly);

impl PolynomialSymbol {
    pub fn new(p: ComplexPoly) -> Self {
        PolynomialSymbol(p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut total = ComplexPoly::zero();
        let mut line_no = 0;
        for line in text.lines() {
            line_no += 1;
            let mut offset = 0;
            for piece in line.split(';') {
                let body_start = match piece.find(':') {
                    Some(p) => p + 1,
                    None => 0,
                };
                let body = &piece[body_start..];
                if !body.trim().is_empty() {
                    let mut p = Parser {
                        chars: body.chars().collect(),
                        pos: 0,
                        base: offset + body_start,
                        line: line_no,
                    };
                    let v = p.expr()?;
                    p.skip_ws();
                    if p.pos != p.chars.len() {
                        return Err(p.error("unexpected character"));
                    }
                    total = &total + &v;
                } else if body_start > 0 {
                    return Err(Error::Parse {
                        column: offset + body_start + 1,
                        message: format!("line {line_no}: empty term after label"),
                    });
                }
                offset += piece.chars().count() + 1;
            }
        }
        Ok(PolynomialSymbol(total))
    }

    pub fn poly(&self) -> &ComplexPoly {
        &self.0
    }

    pub fn into_poly(self) -> ComplexPoly {
        self.0
    }
}

impl Deref for PolynomialSymbol {
    type Target = ComplexPoly;
    fn deref(&self) -> &ComplexPoly {
        &self.0
    }
}

impl From<ComplexPoly> for PolynomialSymbol {
    fn from(p: ComplexPoly) -> Self {
        PolynomialSymbol(p)
    }
}

impl From<RealPoly> for PolynomialSymbol {
    fn from(p: RealPoly) -> Self {
        PolynomialSymbol(p.to_complex())
    }
}

impl fmt::Debug for PolynomialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialSymbol({self})")
    }
}

/// Writes the symbol in the text form accepted by [`PolynomialSymbol::parse`],
/// with full round-trip precision.
impl fmt::Display for PolynomialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for ((m, n), c) in self.0.terms() {
            let mut mono = String::new();
            if m > 0 {
                mono.push_str(&format!("*x^{m}"));
            }
            if n > 0 {
                mono.push_str(&format!("*k^{n}"));
            }
            if c.re != 0.0 {
                parts.push(format!("{:?}{mono}", c.re));
            }
            if c.im != 0.0 {
                parts.push(format!("{:?}i{mono}", c.im));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    base: usize,
    line: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            column: self.base + self.pos + 1,
            message: format!("line {}: {msg}", self.line),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ComplexPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.factor()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ComplexPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ComplexPoly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ComplexPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("exponent must be a non-negative integer"));
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = s.parse().map_err(|_| self.error("exponent too large"))?;
            if e > 64 {
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn word_end(&self, from: usize) -> usize {
        let mut p = from;
        while p < self.chars.len() && (self.chars[p].is_ascii_alphanumeric() || self.chars[p] == '_') {
            p += 1;
        }
        p
    }

    fn atom(&mut self) -> Result<ComplexPoly> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error("unexpected end of expression")),
        };
        if c == '(' {
            self.pos += 1;
            let v = self.expr()?;
            if self.peek() != Some(')') {
                return Err(self.error("expected ')'"));
            }
            self.pos += 1;
            return Ok(v);
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            let end = self.word_end(self.pos);
            let word: String = self.chars[self.pos..end].iter().collect();
            let v = match word.as_str() {
                "x" => ComplexPoly::x(),
                "k" => ComplexPoly::k(),
                "i" => ComplexPoly::constant(Complex64::i()),
                "pi" => ComplexPoly::constant(Complex64::new(PI, 0.0)),
                _ => return Err(self.error(&format!("unknown identifier '{word}'"))),
            };
            self.pos = end;
            return Ok(v);
        }
        Err(self.error(&format!("unexpected '{c}'")))
    }

    fn number(&mut self) -> Result<ComplexPoly> {
        let start = self.pos;
        let n = self.chars.len();
        let digits = |p: &mut usize, chars: &[char]| {
            while *p < n && chars[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        let mut p = self.pos;
        digits(&mut p, &self.chars);
        if p < n && self.chars[p] == '.' {
            p += 1;
            digits(&mut p, &self.chars);
        }
        if p < n && (self.chars[p] == 'e' || self.chars[p] == 'E') {
            let mut q = p + 1;
            if q < n && (self.chars[q] == '+' || self.chars[q] == '-') {
                q += 1;
            }
            if q < n && self.chars[q].is_ascii_digit() {
                digits(&mut q, &self.chars);
                p = q;
            }
        }
        let s: String = self.chars[start..p].iter().collect();
        let v: f64 = s.parse().map_err(|_| self.error(&format!("bad number '{s}'")))?;
        self.pos = p;
        if p < n && self.chars[p] == 'i' && self.word_end(p) == p + 1 {
            self.pos += 1;
            return Ok(ComplexPoly::constant(Complex64::new(0.0, v)));
        }
        if p < n && self.chars[p].is_ascii_alphabetic() {
            return Err(self.error("missing '*' between number and identifier"));
        }
        Ok(ComplexPoly::constant(Complex64::new(v, 0.0)))
    }
}

/// Symbol of `eps d/dt u - i (eps^2 / 2) u'' + i V u = 0`, namely
/// `L(x, k) = i ((2 pi k)^2 / 2 + V(x)) = i H(x, k)`.
///
/// `eps d/dx` has symbol `2 pi i k`, so `-i (eps^2/2) d^2/dx^2` has symbol
/// `+(i/2)(2 pi k)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerSymbol {
    potential: RealPoly,
}

impl SchrodingerSymbol {
    pub fn new(potential: RealPoly) -> Result<Self> {
        if potential.depends_on_k() {
            return Err(invalid("the potential must depend on x only"));
        }
        Ok(SchrodingerSymbol { potential })
    }

    pub fn potential(&self) -> &RealPoly {
        &self.potential
    }

    /// `H(x, k) = (2 pi k)^2 / 2 + V(x)`
    pub fn hamiltonian(&self) -> RealPoly {
        &RealPoly::monomial(0, 2, 2.0 * PI * PI) + &self.potential
    }

    /// `L = i H`
    pub fn symbol(&self) -> PolynomialSymbol {
        PolynomialSymbol(self.hamiltonian().to_complex().scale(Complex64::i()))
    }
}
