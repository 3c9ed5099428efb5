use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::grid::Axis;
use crate::phasespace::{PhaseSpaceField, PhaseSpaceGrid};

use super::mls::Buckets;
use super::particles::ParticleEnsemble;

/// Settings for reconstruction through the seed lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeOptions {
    /// Largest Lagrange stencil (even, at least 2); smaller ones are used
    /// where the ensemble has gaps.
    pub stencil: usize,
    /// Nodes with no particle within this many seed cells get zero.
    pub search_radius: f64,
    pub max_newton: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions {
            stencil: 6,
            search_radius: 8.0,
            max_newton: 30,
        }
    }
}

/// Lagrange basis values and derivatives at `s` for nodes `i0..i0 + p`.
fn basis(s: f64, i0: i64, p: usize, w: &mut [f64; 8], dw: &mut [f64; 8]) {
    for a in 0..p {
        let xa = (i0 + a as i64) as f64;
        let mut prod = 1.0;
        let mut der = 0.0;
        for b in 0..p {
            if b == a {
                continue;
            }
            let xb = (i0 + b as i64) as f64;
            let f = (s - xb) / (xa - xb);
            der = der * f + prod / (xa - xb);
            prod *= f;
        }
        w[a] = prod;
        dw[a] = der;
    }
}

struct Lattice<'a> {
    index: Vec<u32>,
    nx: i64,
    nk: i64,
    ens: &'a ParticleEnsemble,
}

impl<'a> Lattice<'a> {
    fn new(ens: &'a ParticleEnsemble) -> Self {
        let (nx, nk) = ens.seed_grid().shape();
        let mut index = vec![u32::MAX; nx * nk];
        for (id, &(i, j)) in ens.labels().iter().enumerate() {
            index[i as usize * nk + j as usize] = id as u32;
        }
        Lattice {
            index,
            nx: nx as i64,
            nk: nk as i64,
            ens,
        }
    }

    /// Stencil for `xi`, keeping `prev` when `xi` is still inside its
    /// central cell.
    fn stencil_near(&self, xi: (f64, f64), prev: (i64, i64, usize), max_p: usize) -> (i64, i64, usize) {
        let (i0, j0, p) = prev;
        let off = p as i64 / 2 - 1;
        let (ci, cj) = (xi.0.floor() as i64, xi.1.floor() as i64);
        if ci == i0 + off && cj == j0 + off {
            return prev;
        }
        self.stencil(xi, max_p).unwrap_or(prev)
    }

    fn particle(&self, i: i64, j: i64) -> Option<usize> {
        if i < 0 || j < 0 || i >= self.nx || j >= self.nk {
            return None;
        }
        match self.index[(i * self.nk + j) as usize] {
            u32::MAX => None,
            id => Some(id as usize),
        }
    }

    /// Largest stencil `p <= max_p` around `floor(xi)` with every particle present.
    fn stencil(&self, xi: (f64, f64), max_p: usize) -> Option<(i64, i64, usize)> {
        let (ci, cj) = (xi.0.floor() as i64, xi.1.floor() as i64);
        let mut p = max_p;
        while p >= 2 {
            let off = p as i64 / 2 - 1;
            let (i0, j0) = (ci - off, cj - off);
            let full = (0..p as i64).all(|a| (0..p as i64).all(|b| self.particle(i0 + a, j0 + b).is_some()));
            if full {
                return Some((i0, j0, p));
            }
            p -= 2;
        }
        None
    }

    /// Position, Jacobian in label space and density at fractional label `xi`.
    fn eval(&self, xi: (f64, f64), (i0, j0, p): (i64, i64, usize)) -> (Vector2<f64>, Matrix2<f64>, f64) {
        let (mut wi, mut dwi, mut wj, mut dwj) = ([0.0; 8], [0.0; 8], [0.0; 8], [0.0; 8]);
        basis(xi.0, i0, p, &mut wi, &mut dwi);
        basis(xi.1, j0, p, &mut wj, &mut dwj);
        let pos = self.ens.positions();
        let dens = self.ens.densities();
        let mut r = Vector2::zeros();
        let mut jac = Matrix2::zeros();
        let mut d = 0.0;
        for a in 0..p {
            for b in 0..p {
                let id = self.particle(i0 + a as i64, j0 + b as i64).expect("full stencil");
                let z = Vector2::new(pos[id].0, pos[id].1);
                r += z * (wi[a] * wj[b]);
                jac.column_mut(0).axpy(dwi[a] * wj[b], &z, 1.0);
                jac.column_mut(1).axpy(wi[a] * dwj[b], &z, 1.0);
                d += dens[id] * wi[a] * wj[b];
            }
        }
        (r, jac, d)
    }
}

/// Density at the grid nodes obtained by inverting the particle map: the
/// particles are an image of the seed lattice, so each node is located in
/// lattice coordinates by Newton's method on the tensor Lagrange
/// interpolant of the positions, and the density is interpolated there.
pub fn lattice_to_grid(ens: &ParticleEnsemble, grid: &PhaseSpaceGrid, opts: &LatticeOptions) -> Result<PhaseSpaceField> {
    if ens.is_empty() {
        return Err(invalid("empty particle ensemble"));
    }
    if opts.stencil < 2 || opts.stencil % 2 != 0 || opts.stencil > 8 {
        return Err(invalid(format!("stencil must be even and in 2..=8, got {}", opts.stencil)));
    }
    let lat = Lattice::new(ens);
    let sx = ens.seed_grid().x_axis().step();
    let sk = ens.seed_grid().k_axis().step();
    let buckets = Buckets::new(ens.positions().iter().map(|&(x, k)| (x / sx, k / sk)).collect());
    let max_ring = opts.search_radius.ceil() as i64;
    let (nx, nk) = grid.shape();
    let values: Vec<f64> = (0..nx * nk)
        .into_par_iter()
        .map(|idx| {
            let q = Vector2::new(grid.x_axis().at(idx / nk), grid.k_axis().at(idx % nk));
            let near = buckets.nearest((q[0] / sx, q[1] / sk), 1, max_ring, opts.search_radius);
            let Some(&(d2, id)) = near.first() else {
                return 0.0;
            };
            if d2.sqrt() > opts.search_radius {
                return 0.0;
            }
            let (li, lj) = ens.labels()[id as usize];
            let mut xi = (li as f64, lj as f64);
            for _ in 0..opts.max_newton {
                let Some(st) = lat.stencil(xi, opts.stencil) else {
                    return 0.0;
                };
                let (r, jac, _) = lat.eval(xi, st);
                let Some(step) = jac.lu().solve(&(q - r)) else {
                    return 0.0;
                };
                xi = (xi.0 + step[0], xi.1 + step[1]);
                if step.norm() < 1e-12 {
                    return lat.stencil(xi, opts.stencil).map_or(0.0, |st| lat.eval(xi, st).2);
                }
            }
            0.0
        })
        .collect();
    let arr = ndarray::Array2::from_shape_vec((nx, nk), values).expect("shape");
    PhaseSpaceField::new(*grid, arr, ens.kind())
}

/// Upper bound on the per-direction subdivision in [`lattice_marginal`].
pub const MAX_SUBDIVISION: usize = 128;

/// Box widths below this (in output steps) are treated as points.
const THIN_BOX: f64 = 1e-4;

/// Weight that a unit mass spread uniformly over a parallelogram, whose
/// x-projection is `box(a) * box(b)` centred at 0, gives the unit hat
/// function centred at `y` (all lengths in output steps). Summed over
/// integer `y` it is exactly 1, so uniformly spread mass deposits without
/// the aliasing ripple of point deposition.
fn projected_hat(y: f64, a: f64, b: f64) -> f64 {
    fn ramp(z: f64, p: i32) -> f64 {
        let f = [1.0, 1.0, 2.0, 6.0][p as usize];
        z.max(0.0).powi(p) / f
    }
    // p-th antiderivative of the hat, as a second difference of ramp(., p + 1)
    let h = |z: f64, p: i32| ramp(z + 1.0, p + 1) - 2.0 * ramp(z, p + 1) + ramp(z - 1.0, p + 1);
    let (a, b) = if a < b { (b, a) } else { (a, b) };
    if a < THIN_BOX {
        h(y, 0)
    } else if b < THIN_BOX {
        (h(y + 0.5 * a, 1) - h(y - 0.5 * a, 1)) / a
    } else {
        let (p, q) = (0.5 * (a + b), 0.5 * (a - b));
        (h(y + p, 2) - h(y + q, 2) - h(y - q, 2) + h(y - p, 2)) / (a * b)
    }
}

/// Output of [`lattice_deposit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Deposit {
    /// `int W dk` at the axis nodes.
    pub marginal: Vec<f64>,
    /// Total mass of the sub-particles, on or off the axis.
    pub mass: f64,
    /// `int phi W` by the same sub-particle quadrature.
    pub moment: f64,
}

/// `int W dk` on `axis` by deposition: every seed cell is split into
/// sub-cells fine enough that neighbouring sub-particles land less than half
/// an output step apart, their positions and densities come from the lattice
/// interpolant, and their masses are shared linearly between the two nearest
/// nodes. Also integrates `phi` against the density with the same
/// sub-particles. Summation order is fixed, so the result is deterministic.
pub fn lattice_deposit(
    ens: &ParticleEnsemble,
    axis: &Axis,
    opts: &LatticeOptions,
    phi: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<Deposit> {
    if ens.is_empty() {
        return Err(invalid("empty particle ensemble"));
    }
    let lat = Lattice::new(ens);
    let dx = axis.step();
    let n = axis.count();
    let area = ens.cell_area();
    let chunks: Vec<(Vec<f64>, f64, f64)> = ens
        .labels()
        .par_chunks(2048)
        .map(|labels| {
            let mut out = vec![0.0; n];
            let (mut mass, mut moment) = (0.0, 0.0);
            // (a, b): x-extents of the two edges of the sub-cell, in output steps
            let mut deposit = |x: f64, k: f64, m: f64, a: f64, b: f64| {
                mass += m;
                moment += m * phi(x, k);
                let s = (x - axis.start()) / dx;
                let reach = 1.0 + 0.5 * (a + b);
                let lo = (s - reach).floor().max(0.0);
                let hi = (s + reach).ceil().min(n as f64 - 1.0);
                if hi >= lo {
                    for i in lo as usize..=hi as usize {
                        out[i] += m / dx * projected_hat(i as f64 - s, a, b);
                    }
                }
            };
            for &(li, lj) in labels {
                let xi = (li as f64, lj as f64);
                let Some(st) = lat.stencil(xi, opts.stencil) else {
                    let id = lat.particle(li as i64, lj as i64).expect("own label");
                    let (x, k) = ens.positions()[id];
                    deposit(x, k, ens.densities()[id] * area, 0.0, 0.0);
                    continue;
                };
                let (_, jac, _) = lat.eval(xi, st);
                let split = |d: f64| ((2.0 * d.abs() / dx).ceil() as usize).clamp(1, MAX_SUBDIVISION);
                let (mi, mj) = (split(jac[(0, 0)]), split(jac[(0, 1)]));
                let w = area / (mi * mj) as f64;
                for a in 0..mi {
                    for b in 0..mj {
                        let sub = (
                            xi.0 + (a as f64 + 0.5) / mi as f64 - 0.5,
                            xi.1 + (b as f64 + 0.5) / mj as f64 - 0.5,
                        );
                        let st = lat.stencil_near(sub, st, opts.stencil);
                        let (r, j, d) = lat.eval(sub, st);
                        let a = j[(0, 0)].abs() / (mi as f64 * dx);
                        let b = j[(0, 1)].abs() / (mj as f64 * dx);
                        deposit(r[0], r[1], d * w, a, b);
                    }
                }
            }
            (out, mass, moment)
        })
        .collect();
    let mut total = Deposit {
        marginal: vec![0.0; n],
        mass: 0.0,
        moment: 0.0,
    };
    for (c, m, e) in chunks {
        for (t, v) in total.marginal.iter_mut().zip(c) {
            *t += v;
        }
        total.mass += m;
        total.moment += e;
    }
    Ok(total)
}

/// The marginal part of [`lattice_deposit`].
pub fn lattice_marginal(ens: &ParticleEnsemble, axis: &Axis, opts: &LatticeOptions) -> Result<Vec<f64>> {
    Ok(lattice_deposit(ens, axis, opts, |_, _| 0.0)?.marginal)
}
