use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::grid::Axis;
use crate::phasespace::{PhaseSpaceField, PhaseSpaceGrid};
use crate::reference::PotentialSpec;

use super::flow::{rk4_integrate, FlowMap};

/// Stencil width of the default Lagrange interpolation.
pub const DEFAULT_STENCIL: usize = 6;

fn stencil(axis: &Axis, x: f64, p: usize) -> (i64, Vec<f64>) {
    let s = (x - axis.start()) / axis.step();
    let i0 = s.floor() as i64 - (p as i64 / 2 - 1);
    let w = (0..p)
        .map(|a| {
            let xa = (i0 + a as i64) as f64;
            (0..p)
                .filter(|&b| b != a)
                .map(|b| {
                    let xb = (i0 + b as i64) as f64;
                    (s - xb) / (xa - xb)
                })
                .product()
        })
        .collect();
    (i0, w)
}

/// Tensor-product Lagrange interpolation of `w` at `(x, k)` with a
/// `p x p` stencil; the field counts as zero off its grid.
pub fn lagrange_eval(w: &PhaseSpaceField, x: f64, k: f64, p: usize) -> f64 {
    let g = w.grid();
    let (nx, nk) = g.shape();
    let span = |a: &Axis, v: f64| v >= a.start() - a.step() && v <= a.last() + a.step();
    if !span(g.x_axis(), x) || !span(g.k_axis(), k) {
        return 0.0;
    }
    let (i0, wx) = stencil(g.x_axis(), x, p);
    let (j0, wk) = stencil(g.k_axis(), k, p);
    let v = w.values();
    let mut acc = 0.0;
    for (a, &cx) in wx.iter().enumerate() {
        let i = i0 + a as i64;
        if i < 0 || i as usize >= nx {
            continue;
        }
        let mut row = 0.0;
        for (b, &ck) in wk.iter().enumerate() {
            let j = j0 + b as i64;
            if j >= 0 && (j as usize) < nk {
                row += ck * v[[i as usize, j as usize]];
            }
        }
        acc += cx * row;
    }
    acc
}

/// `W(x, k, t) = W0(phi_{-t}(x, k))` on `grid`, with the backward
/// characteristics integrated by RK4 and `W0` interpolated by 6-point
/// Lagrange stencils.
pub fn semi_lagrangian_evolve(
    w0: &PhaseSpaceField,
    v: &PotentialSpec,
    t: f64,
    dt: f64,
    grid: &PhaseSpaceGrid,
) -> Result<PhaseSpaceField> {
    if !(dt > 0.0) {
        return Err(invalid("time step must be positive"));
    }
    pull_back(w0, grid, |x, k| rk4_integrate(v, x, k, -t, dt))
}

/// Same with a given forward flow map (its inverse is used for the feet).
pub fn semi_lagrangian_with_flow(
    w0: &PhaseSpaceField,
    flow: &FlowMap,
    grid: &PhaseSpaceGrid,
) -> Result<PhaseSpaceField> {
    let back = flow.inverse();
    pull_back(w0, grid, |x, k| back.apply(x, k))
}

fn pull_back(
    w0: &PhaseSpaceField,
    grid: &PhaseSpaceGrid,
    foot: impl Fn(f64, f64) -> (f64, f64) + Sync,
) -> Result<PhaseSpaceField> {
    let (nx, nk) = grid.shape();
    let values: Vec<f64> = (0..nx * nk)
        .into_par_iter()
        .map(|idx| {
            let (x0, k0) = foot(grid.x_axis().at(idx / nk), grid.k_axis().at(idx % nk));
            lagrange_eval(w0, x0, k0, DEFAULT_STENCIL)
        })
        .collect();
    let arr = ndarray::Array2::from_shape_vec((nx, nk), values).expect("shape");
    PhaseSpaceField::new(*grid, arr, w0.kind())
}
