use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::phasespace::{PhaseSpaceField, PhaseSpaceGrid};

use super::particles::ParticleEnsemble;

/// Moving-least-squares settings. Distances are measured in units of the
/// seed-grid spacing along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlsOptions {
    /// Total degree of the local polynomial.
    pub degree: usize,
    /// Neighbours per fit; `None` picks `2.5x` the number of basis functions.
    pub neighbors: Option<usize>,
    /// Nodes farther than this from every particle get zero.
    pub cutoff: f64,
}

impl Default for MlsOptions {
    fn default() -> Self {
        MlsOptions {
            degree: 3,
            neighbors: None,
            cutoff: 2.0,
        }
    }
}

impl MlsOptions {
    fn basis_len(&self) -> usize {
        (self.degree + 1) * (self.degree + 2) / 2
    }

    fn neighbor_count(&self) -> usize {
        self.neighbors.unwrap_or((self.basis_len() * 5).div_ceil(2))
    }
}

pub(super) struct Buckets {
    cells: HashMap<(i64, i64), Vec<u32>>,
    pts: Vec<(f64, f64)>,
}

impl Buckets {
    pub(super) fn new(pts: Vec<(f64, f64)>) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, &(u, v)) in pts.iter().enumerate() {
            cells.entry((u.floor() as i64, v.floor() as i64)).or_default().push(i as u32);
        }
        Buckets { cells, pts }
    }

    /// The `n` nearest points as `(distance^2, index)`, or fewer if the
    /// search radius `max_ring` is exhausted.
    /// Gives up early (empty result) when nothing lies within `cutoff`.
    pub(super) fn nearest(&self, q: (f64, f64), n: usize, max_ring: i64, cutoff: f64) -> Vec<(f64, u32)> {
        let (ci, cj) = (q.0.floor() as i64, q.1.floor() as i64);
        let mut found: Vec<(f64, u32)> = Vec::new();
        for r in 0..=max_ring {
            for di in -r..=r {
                for dj in -r..=r {
                    if di.abs() != r && dj.abs() != r {
                        continue;
                    }
                    if let Some(ids) = self.cells.get(&(ci + di, cj + dj)) {
                        for &id in ids {
                            let (u, v) = self.pts[id as usize];
                            found.push(((u - q.0).powi(2) + (v - q.1).powi(2), id));
                        }
                    }
                }
            }
            if found.is_empty() && r as f64 >= cutoff {
                return found;
            }
            if found.len() >= n {
                found.select_nth_unstable_by(n - 1, |a, b| a.0.total_cmp(&b.0));
                if found[n - 1].0.sqrt() <= r as f64 {
                    found.truncate(n);
                    return found;
                }
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        found.truncate(n);
        found
    }
}

fn monomials(du: f64, dv: f64, degree: usize, out: &mut Vec<f64>) {
    out.clear();
    for d in 0..=degree {
        for j in 0..=d {
            out.push(du.powi((d - j) as i32) * dv.powi(j as i32));
        }
    }
}

/// Scattered-data approximation of the particle densities on `grid` by
/// local weighted polynomial fits (Wendland weights on the neighbour radius).
/// Smooths rather than interpolates: seed values are reproduced only up to
/// the fit error.
pub fn mls_to_grid(ens: &ParticleEnsemble, grid: &PhaseSpaceGrid, opts: &MlsOptions) -> Result<PhaseSpaceField> {
    if ens.is_empty() {
        return Err(invalid("empty particle ensemble"));
    }
    let nb = opts.basis_len();
    let want = opts.neighbor_count();
    if want < nb {
        return Err(invalid(format!("need at least {nb} neighbours for degree {}", opts.degree)));
    }
    let sx = ens.seed_grid().x_axis().step();
    let sk = ens.seed_grid().k_axis().step();
    let pts: Vec<(f64, f64)> = ens.positions().iter().map(|&(x, k)| (x / sx, k / sk)).collect();
    let buckets = Buckets::new(pts);
    let dens = ens.densities();
    let (nx, nk) = grid.shape();
    let max_ring = (opts.cutoff.ceil() as i64 + 2).max(2 * (want as f64).sqrt().ceil() as i64);
    let values: Vec<f64> = (0..nx * nk)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(nb), DMatrix::<f64>::zeros(nb, nb), DVector::<f64>::zeros(nb)),
            |(p, a, b), idx| {
                let q = (grid.x_axis().at(idx / nk) / sx, grid.k_axis().at(idx % nk) / sk);
                let near = buckets.nearest(q, want, max_ring, opts.cutoff);
                let closest = near.iter().map(|n| n.0).fold(f64::INFINITY, f64::min);
                if near.len() < nb || closest.sqrt() > opts.cutoff {
                    return 0.0;
                }
                let h = near.iter().map(|n| n.0).fold(0.0, f64::max).sqrt() * 1.05;
                a.fill(0.0);
                b.fill(0.0);
                for &(d2, id) in &near {
                    let r = d2.sqrt() / h;
                    let w = (1.0 - r).powi(4) * (4.0 * r + 1.0);
                    let (u, v) = buckets.pts[id as usize];
                    monomials(u - q.0, v - q.1, opts.degree, p);
                    for i in 0..nb {
                        let wi = w * p[i];
                        b[i] += wi * dens[id as usize];
                        for j in 0..=i {
                            a[(i, j)] += wi * p[j];
                        }
                    }
                }
                for i in 0..nb {
                    for j in 0..i {
                        a[(j, i)] = a[(i, j)];
                    }
                }
                match a.clone().cholesky() {
                    Some(c) => c.solve(b)[0],
                    None => a.clone().svd(true, true).solve(b, 1e-12).map(|s| s[0]).unwrap_or(0.0),
                }
            },
        )
        .collect();
    let arr = ndarray::Array2::from_shape_vec((nx, nk), values).expect("shape");
    PhaseSpaceField::new(*grid, arr, ens.kind())
}
