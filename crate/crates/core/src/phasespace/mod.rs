//! Wigner transforms, their Gaussian smoothings and spectrograms on
//! `(x, k)` grids, with marginals and trace-formula observables.
//!
//! With `eps > 0` the transform of a pair of wavefunctions is
//!
//! ```text
//! W[f, g](x, k) = int e^{-2 pi i k y} f(x + eps y / 2) conj(g(x - eps y / 2)) dy
//! ```
//!
//! so that `int W dk = f conj(g)` and `int W dx = (1/eps) f^(k/eps) conj(g^(k/eps))`.

mod field;
mod marginals;
pub mod oracle;
mod params;
mod wigner;

pub use field::{ComplexPhaseSpaceField, FieldKind, PhaseSpaceField, PhaseSpaceGrid, IMAGINARY_RESIDUE_TOLERANCE};
pub use marginals::{l1_distance, marginal_k, marginal_x, rel_l1_error, trace_observable};
pub use params::{Regime, SmoothingParams, CRITICAL_TOLERANCE};
pub use wigner::{
    cross_smoothed_wigner, cross_smoothed_wigner_with, cross_wigner, smoothed_wigner, smoothed_wigner_with,
    spectrogram, spectrogram_with, wigner, TransformOptions,
};
