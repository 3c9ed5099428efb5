//! Polynomial symbols, phase-space differential operators and the exact
//! evolution equation satisfied by the smoothed transform.

mod evolution;
mod identities;
mod operator;
mod symbol;

pub use evolution::{
    build_evolution_operator, position_operator, position_operator_right, quantize, series_generator, truncate,
    wavenumber_operator, wavenumber_operator_right,
};
pub use identities::{
    derivative_identity, derivative_identity_right, position_identity, position_identity_right, IdentityCheck,
};
pub use operator::{
    apply_complex_operator, apply_operator, mixed_derivative, ComplexOperator, DiffOperator, OpTerm,
    PhaseSpaceOperator,
};
pub use symbol::{PolynomialSymbol, SchrodingerSymbol};
