//! The pieces every command shares: the initial wavefunction, the reference
//! solution, and Liouville runs of a smoothed transform.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use smoothwig::liouville::{lattice_deposit, propagate_with, seed_particles, FlowMap, LatticeOptions, ParticleEnsemble};
use smoothwig::phasespace::{rel_l1_error, PhaseSpaceField};
use smoothwig::reference::{
    build_f_eps, gaussian_sum_exact, harmonic_eigenfunction, harmonic_eigenstate_at, split_step_solve, PotentialSpec,
};
use smoothwig::weyl::SchrodingerSymbol;
use smoothwig::{Axis, ComplexField1D};

use crate::config::{ExperimentConfig, InitialCondition};

/// Samples of the initial condition on the field axis.
pub fn initial_field(cfg: &ExperimentConfig) -> Result<ComplexField1D> {
    let axis = cfg.field_axis()?;
    let (u, amp) = match &cfg.initial_condition {
        InitialCondition::FEps { amplitude } => (build_f_eps(cfg.eps, axis)?, *amplitude),
        InitialCondition::GaussianSum { amplitude, .. } => (gaussian_sum_exact(&cfg.packets(), cfg.eps, 0.0, axis)?, *amplitude),
        InitialCondition::Hermite { n, omega, amplitude } => (harmonic_eigenfunction(*n, *omega, cfg.eps, axis)?, *amplitude),
        InitialCondition::File { path } => {
            let u = smoothwig::io::read_field(path).with_context(|| format!("initial_condition.path {}", path.display()))?;
            if u.axis() != &axis {
                bail!(
                    "initial_condition.path: field axis {:?} does not match grid.field_step / grid.field_points {:?}",
                    u.axis(),
                    axis
                );
            }
            (u, 1.0)
        }
    };
    Ok(u.scale(Complex64::from(amp)))
}

fn amplitude(cfg: &ExperimentConfig) -> f64 {
    match &cfg.initial_condition {
        InitialCondition::FEps { amplitude }
        | InitialCondition::GaussianSum { amplitude, .. }
        | InitialCondition::Hermite { amplitude, .. } => *amplitude,
        InitialCondition::File { .. } => 1.0,
    }
}

/// How the reference `|u(t)|^2` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthMethod {
    ClosedForm,
    Eigenstate,
    SplitStep,
}

pub fn truth_method(cfg: &ExperimentConfig) -> TruthMethod {
    match (&cfg.initial_condition, cfg.potential.omega()) {
        (InitialCondition::GaussianSum { .. }, _) if cfg.potential.monomial() == Some((0.0, 0)) => TruthMethod::ClosedForm,
        (InitialCondition::Hermite { omega, .. }, Some(w)) if (omega - w).abs() <= 1e-12 * w => TruthMethod::Eigenstate,
        _ => TruthMethod::SplitStep,
    }
}

/// `|u(t)|^2` on the output axis at each time.
pub fn reference_densities(cfg: &ExperimentConfig, u0: &ComplexField1D, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let out = cfg.output_axis()?;
    let a2 = amplitude(cfg).powi(2);
    let scaled = |u: ComplexField1D| u.density().into_iter().map(|d| d * a2).collect::<Vec<f64>>();
    match truth_method(cfg) {
        TruthMethod::ClosedForm => {
            times.iter().map(|&t| Ok(scaled(gaussian_sum_exact(&cfg.packets(), cfg.eps, t, out)?))).collect()
        }
        TruthMethod::Eigenstate => {
            let InitialCondition::Hermite { n, omega, .. } = cfg.initial_condition else {
                unreachable!()
            };
            times.iter().map(|&t| Ok(scaled(harmonic_eigenstate_at(n, omega, cfg.eps, t, out)?))).collect()
        }
        TruthMethod::SplitStep => {
            if out != *u0.axis() {
                bail!("grid.output_step: must be omitted when the reference solution is computed by split-step");
            }
            let series = split_step_solve(u0, &cfg.potential, cfg.eps, times, cfg.dt)
                .context("reference split-step solver")?;
            Ok(series.snapshots.iter().map(|u| u.density()).collect())
        }
    }
}

/// Exact flow for `V = a x^s`, `s <= 2`; RK4 with the configured step otherwise.
pub fn flow_for(v: &PotentialSpec, t: f64, dt: f64) -> Result<FlowMap> {
    Ok(match v.monomial() {
        Some((a, s)) => FlowMap::exact(a, s, t)?,
        None => FlowMap::numeric(v, t, dt)?,
    })
}

/// `H(x, k) = (2 pi k)^2 / 2 + V(x)`.
pub fn hamiltonian(v: &PotentialSpec) -> Result<impl Fn(f64, f64) -> f64 + Sync> {
    let h = SchrodingerSymbol::new(v.poly())?.hamiltonian();
    Ok(move |x: f64, k: f64| h.eval(x, k))
}

/// One Liouville-propagated transform, sampled at the snapshot times.
#[derive(Debug, Clone)]
pub struct LiouvilleRun {
    pub particles: usize,
    /// `int W dk` on the output axis per snapshot.
    pub marginals: Vec<Vec<f64>>,
    pub mass: Vec<f64>,
    /// Slow-scale energy `int H W`.
    pub energy: Vec<f64>,
}

impl LiouvilleRun {
    pub fn mass_drift(&self) -> f64 {
        max_relative_change(&self.mass)
    }

    pub fn energy_drift(&self) -> f64 {
        max_relative_change(&self.energy)
    }

    /// Largest normalized L1 distance of a marginal from the first one.
    pub fn marginal_drift(&self) -> f64 {
        self.marginals.iter().map(|m| rel_l1_error(m, &self.marginals[0])).fold(0.0, f64::max)
    }
}

fn max_relative_change(v: &[f64]) -> f64 {
    let v0 = v[0];
    v.iter().map(|x| ((x - v0) / v0).abs()).fold(0.0, f64::max)
}

/// Seeds particles from `w0`, moves them along the flow of the configured
/// potential and deposits the marginal, mass and energy at each time.
pub fn liouville_run(cfg: &ExperimentConfig, w0: &PhaseSpaceField, times: &[f64]) -> Result<LiouvilleRun> {
    let ens = seed_particles(w0, cfg.seed_tolerance)?;
    liouville_run_from(cfg, &ens, times)
}

pub fn liouville_run_from(cfg: &ExperimentConfig, ens: &ParticleEnsemble, times: &[f64]) -> Result<LiouvilleRun> {
    let out: Axis = cfg.output_axis()?;
    let h = hamiltonian(&cfg.potential)?;
    let mut run = LiouvilleRun {
        particles: ens.len(),
        marginals: Vec::new(),
        mass: Vec::new(),
        energy: Vec::new(),
    };
    for &t in times {
        let moved = propagate_with(ens, &flow_for(&cfg.potential, t, cfg.dt)?);
        let d = lattice_deposit(&moved, &out, &LatticeOptions::default(), &h)?;
        run.marginals.push(d.marginal);
        run.mass.push(d.mass);
        run.energy.push(d.moment);
    }
    Ok(run)
}
