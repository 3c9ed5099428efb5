//! The phase-space operators that replace multiplication by `x` and
//! `eps d/dx / (2 pi i)` under the smoothed transform, Weyl quantization of
//! polynomial symbols in terms of them, and the generator of the exact
//! equation `eps dW~/dt + G W~ = 0`.
//!
//! For smoothing widths `(sx, sk)`:
//!
//! ```text
//! X  = x + eps ( i/(4 pi) d_k + sx^2/(4 pi) d_x )     W~[x f, g]     = X  W~[f, g]
//! K  = k + eps (-i/(4 pi) d_x + sk^2/(4 pi) d_k )     W~[eps f', g]  = 2 pi i K W~[f, g]
//! X' = x + eps (-i/(4 pi) d_k + sx^2/(4 pi) d_x )     W~[f, x g]     = X' W~[f, g]
//! K' = k + eps ( i/(4 pi) d_x + sk^2/(4 pi) d_k )     W~[f, eps g']  = -2 pi i K' W~[f, g]
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::phasespace::SmoothingParams;
use crate::poly::{ComplexPoly, Poly2};

use super::operator::{ComplexOperator, OpTerm, PhaseSpaceOperator};
use super::symbol::PolynomialSymbol;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn term(eps_power: u32, dx: u32, dk: u32, c: Complex64) -> OpTerm<Complex64> {
    OpTerm {
        eps_power,
        dx,
        dk,
        coeff: Poly2::constant(c),
    }
}

/// Correction `(X - x) / eps` for the left or right factor.
fn x_correction(params: &SmoothingParams, right: bool) -> ComplexOperator {
    let s = if right { -1.0 } else { 1.0 };
    ComplexOperator::from_terms(
        params.eps(),
        [
            term(1, 0, 1, s * I / (4.0 * PI)),
            term(1, 1, 0, Complex64::from(params.sigma_x().powi(2) / (4.0 * PI))),
        ],
    )
}

fn k_correction(params: &SmoothingParams, right: bool) -> ComplexOperator {
    let s = if right { 1.0 } else { -1.0 };
    ComplexOperator::from_terms(
        params.eps(),
        [
            term(1, 1, 0, s * I / (4.0 * PI)),
            term(1, 0, 1, Complex64::from(params.sigma_k().powi(2) / (4.0 * PI))),
        ],
    )
}

fn with_multiplier(op: ComplexOperator, c: ComplexPoly) -> ComplexOperator {
    let mut op = op;
    op.add_term(0, 0, 0, c);
    op
}

/// `X`, acting for multiplication of the left argument by `x`.
pub fn position_operator(params: &SmoothingParams) -> ComplexOperator {
    with_multiplier(x_correction(params, false), ComplexPoly::x())
}

/// `K`, acting for `eps d/dx / (2 pi i)` on the left argument.
pub fn wavenumber_operator(params: &SmoothingParams) -> ComplexOperator {
    with_multiplier(k_correction(params, false), ComplexPoly::k())
}

/// `X'`, acting for multiplication of the right argument by `x`.
pub fn position_operator_right(params: &SmoothingParams) -> ComplexOperator {
    with_multiplier(x_correction(params, true), ComplexPoly::x())
}

/// `K'`, with `W~[f, eps g'] = -2 pi i K' W~[f, g]` (the sign comes from
/// the conjugation of the right argument).
pub fn wavenumber_operator_right(params: &SmoothingParams) -> ComplexOperator {
    with_multiplier(k_correction(params, true), ComplexPoly::k())
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn powers(op: &ComplexOperator, n: u32) -> Vec<ComplexOperator> {
    let mut out = vec![ComplexOperator::identity(op.eps())];
    for j in 1..=n as usize {
        let next = out[j - 1].compose(op).expect("same eps");
        out.push(next);
    }
    out
}

/// Weyl quantization of `symbol` with `x -> X`, `k -> K`: each monomial
/// `x^m k^n` becomes `2^-m sum_j C(m, j) X^j K^n X^(m-j)`. The result
/// satisfies `W~[L f, g] = Phi(L) W~[f, g]` where `L` is the Weyl-quantized
/// operator with symbol `L(x, k)` and `k` stands for `eps d/dx / (2 pi i)`.
pub fn quantize(symbol: &ComplexPoly, params: &SmoothingParams) -> ComplexOperator {
    let eps = params.eps();
    let xp = powers(&position_operator(params), symbol.degree_x());
    let kp = powers(&wavenumber_operator(params), symbol.degree_k());
    let mut out = ComplexOperator::zero(eps);
    for ((m, n), c) in symbol.terms() {
        let mut mono = ComplexOperator::zero(eps);
        for j in 0..=m {
            let t = xp[j as usize]
                .compose(&kp[n as usize])
                .and_then(|t| t.compose(&xp[(m - j) as usize]))
                .expect("same eps");
            mono = mono.add(&t.scale(Complex64::from(binomial(m, j)))).expect("same eps");
        }
        out = out.add(&mono.scale(c * 0.5f64.powi(m as i32))).expect("same eps");
    }
    out
}

/// Generator `G` of `eps dW~/dt + G W~ = 0` for a wavefunction obeying
/// `eps du/dt + L u = 0` with `L` anti-self-adjoint (`L(x, k) = i H(x, k)`,
/// `H` real). `G = 2 Re Phi(L)`, coefficientwise.
pub fn build_evolution_operator(symbol: &PolynomialSymbol, params: &SmoothingParams) -> PhaseSpaceOperator {
    quantize(symbol.poly(), params).scale(Complex64::from(2.0)).re()
}

/// Same generator from the Taylor form
/// `sum_{i,j} (d_x^i d_k^j L)(x, k) / (i! j!) E_x^i E_k^j` with the
/// coefficient on the left, where `E_x = (X - x)` and `E_k = (K - k)`.
/// Coincides with [`build_evolution_operator`] when `L = i H` with
/// `H = a k^2 + V(x)` and either `V` is at most quadratic or `sx = 0`.
/// Otherwise `X` does not commute with `x` and the Taylor form loses the
/// ordering terms from `eps^2` on.
pub fn series_generator(symbol: &PolynomialSymbol, params: &SmoothingParams) -> PhaseSpaceOperator {
    let eps = params.eps();
    let l = symbol.poly();
    let ex = powers(&x_correction(params, false), l.degree_x());
    let ek = powers(&k_correction(params, false), l.degree_k());
    let mut out = ComplexOperator::zero(eps);
    for i in 0..=l.degree_x() {
        for j in 0..=l.degree_k() {
            let d = l.derivative(i, j);
            if d.is_zero() {
                continue;
            }
            let c = d.scale(Complex64::from(1.0 / (factorial(i) * factorial(j))));
            let t = ComplexOperator::multiplication(eps, c)
                .compose(&ex[i as usize].compose(&ek[j as usize]).expect("same eps"))
                .expect("same eps");
            out = out.add(&t).expect("same eps");
        }
    }
    out.scale(Complex64::from(2.0)).re()
}

/// Keeps the terms of `G` up to `eps^order` relative to the transport
/// term: the `eps^0` part (multiplication, vanishing for real `H`) and the
/// `eps^1` part are always kept, `order = n` keeps powers up to `eps^(n+1)`.
pub fn truncate(op: &PhaseSpaceOperator, order: i64) -> Result<PhaseSpaceOperator> {
    if order < 0 {
        return Err(invalid(format!("truncation order must be nonnegative, got {order}")));
    }
    let keep = u32::try_from(order + 1).unwrap_or(u32::MAX);
    Ok(op.keep_eps_powers(keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RealPoly;
    use crate::weyl::symbol::SchrodingerSymbol;

    fn harmonic(eps: f64, sx: f64, sk: f64) -> (PolynomialSymbol, SmoothingParams) {
        let v = RealPoly::monomial(2, 0, 0.5);
        let l = SchrodingerSymbol::new(v).unwrap().symbol();
        (l, SmoothingParams::new(sx, sk, eps).unwrap())
    }

    #[test]
    fn transport_term_of_schrodinger_generator() {
        // V = x^2/2: G = eps (2 pi k d_x - x/(2 pi) d_k) + eps^2 (...) d_x d_k
        let (l, p) = harmonic(0.3, 0.5, 0.7);
        let g = build_evolution_operator(&l, &p).pruned(1e-14);
        assert!(g.coefficient(0, 0, 0).is_zero());
        let a = g.coefficient(1, 1, 0);
        assert!((a.coeff(0, 1) - 2.0 * PI).abs() < 1e-12 && a.len() == 1);
        let b = g.coefficient(1, 0, 1);
        assert!((b.coeff(1, 0) + 1.0 / (2.0 * PI)).abs() < 1e-12 && b.len() == 1);
    }

    fn quartic() -> PolynomialSymbol {
        let v = RealPoly::from_terms([((4, 0), 0.1), ((2, 0), -1.0), ((1, 0), 0.25), ((0, 0), 3.0)]);
        SchrodingerSymbol::new(v).unwrap().symbol()
    }

    fn generator_gap(l: &PolynomialSymbol, p: &SmoothingParams) -> PhaseSpaceOperator {
        build_evolution_operator(l, p).sub(&series_generator(l, p)).unwrap().pruned(1e-12)
    }

    #[test]
    fn series_form_exact_for_quadratic_potentials_or_no_x_smoothing() {
        for (sx, sk) in [(0.0, 0.0), (0.5, 0.5), (1.0, 0.3)] {
            let (l, p) = harmonic(0.4, sx, sk);
            let gap = generator_gap(&l, &p);
            assert!(gap.is_zero(), "{gap:?}");
        }
        let p = SmoothingParams::new(0.0, 0.8, 0.4).unwrap();
        assert!(generator_gap(&quartic(), &p).is_zero());
    }

    #[test]
    fn series_form_misses_ordering_terms_for_quartic() {
        // with x-smoothing, X no longer commutes with x
        let p = SmoothingParams::new(0.5, 0.5, 0.4).unwrap();
        let gap = generator_gap(&quartic(), &p);
        assert!(!gap.is_zero());
        assert_eq!(gap.max_eps_power(), 3);
        assert!(gap.coefficient(1, 1, 0).is_zero() && gap.coefficient(1, 0, 1).is_zero());
    }

    #[test]
    fn negative_order_rejected() {
        let (l, p) = harmonic(0.5, 0.5, 0.5);
        let g = build_evolution_operator(&l, &p);
        assert!(truncate(&g, -1).is_err());
        assert_eq!(truncate(&g, 0).unwrap().max_eps_power(), 1);
    }
}
