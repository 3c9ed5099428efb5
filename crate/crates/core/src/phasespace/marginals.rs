use ndarray::Axis as NdAxis;

use super::field::PhaseSpaceField;
use crate::poly::{Coeff, Poly2};

/// `int W dk` at every grid `x`.
pub fn marginal_k(w: &PhaseSpaceField) -> Vec<f64> {
    let dk = w.grid().k_axis().step();
    w.values().sum_axis(NdAxis(1)).iter().map(|v| v * dk).collect()
}

/// `int W dx` at every grid `k`.
pub fn marginal_x(w: &PhaseSpaceField) -> Vec<f64> {
    let dx = w.grid().x_axis().step();
    w.values().sum_axis(NdAxis(0)).iter().map(|v| v * dx).collect()
}

/// `int int L(x, k) W(x, k) dx dk` by the rectangle rule.
pub fn trace_observable<T: Coeff>(l: &Poly2<T>, w: &PhaseSpaceField) -> T {
    let g = w.grid();
    let mut acc = T::zero();
    for ((i, j), &v) in w.values().indexed_iter() {
        if v != 0.0 {
            acc = acc + l.eval(g.x_axis().at(i), g.k_axis().at(j)) * T::from_f64(v);
        }
    }
    acc * T::from_f64(g.cell_area())
}

/// `int |a - b| / int |b|` for two sampled profiles on a common grid.
pub fn rel_l1_error(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    let den: f64 = b.iter().map(|y| y.abs()).sum();
    num / den
}

/// `int |a - b| dx` for profiles with spacing `dx`.
pub fn l1_distance(a: &[f64], b: &[f64], dx: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * dx
}
