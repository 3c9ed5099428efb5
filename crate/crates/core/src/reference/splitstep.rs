use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fourier::{fftfreq, FftPair};
use crate::grid::ComplexField1D;

use super::potential::PotentialSpec;
use super::series::TimeSeries;

/// Guard against the periodic wrap-around of the spectral solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStepOptions {
    /// Fraction of the axis at each end that counts as boundary layer.
    pub boundary_fraction: f64,
    /// Largest allowed share of the mass inside the boundary layer.
    pub boundary_tolerance: f64,
}

impl Default for SplitStepOptions {
    fn default() -> Self {
        SplitStepOptions {
            boundary_fraction: 1.0 / 16.0,
            boundary_tolerance: 1e-10,
        }
    }
}

/// Strang splitting for `eps u_t = i (eps^2/2) u_xx - i V u`: half a step of
/// `exp(-i V dt / (2 eps))`, a full kinetic step `exp(-i eps (2 pi xi)^2 dt / 2)`
/// in Fourier space, and another half potential step.
pub struct SplitStep {
    eps: f64,
    potential: PotentialSpec,
    plans: FftPair,
    freqs: Vec<f64>,
    opts: SplitStepOptions,
}

impl SplitStep {
    pub fn new(potential: &PotentialSpec, eps: f64, n: usize, dx: f64, opts: SplitStepOptions) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(invalid("epsilon must be positive"));
        }
        Ok(SplitStep {
            eps,
            potential: potential.clone(),
            plans: FftPair::new(n),
            freqs: fftfreq(n, dx),
            opts,
        })
    }

    fn boundary_share(&self, u: &[Complex64]) -> f64 {
        let n = u.len();
        let w = ((n as f64 * self.opts.boundary_fraction).ceil() as usize).max(1);
        let total: f64 = u.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = u[..w].iter().chain(&u[n - w..]).map(|v| v.norm_sqr()).sum();
        edge / total
    }

    /// Advances `u` by `steps` steps of size `dt`; checks the boundary layer
    /// after every step.
    pub fn advance(&self, u: &mut ComplexField1D, dt: f64, steps: usize, t0: f64) -> Result<()> {
        let axis = *u.axis();
        let n = axis.count();
        let half: Vec<Complex64> = axis
            .samples()
            .map(|x| Complex64::from_polar(1.0, -self.potential.value(x) * dt / (2.0 * self.eps)))
            .collect();
        let inv_n = 1.0 / n as f64;
        let kin: Vec<Complex64> = self
            .freqs
            .iter()
            .map(|&f| Complex64::from_polar(inv_n, -0.5 * self.eps * (2.0 * PI * f).powi(2) * dt))
            .collect();
        let free = self.potential.coefficients().is_empty();
        let buf = u.values_mut();
        for s in 0..steps {
            if !free {
                buf.iter_mut().zip(&half).for_each(|(v, p)| *v *= p);
            }
            self.plans.fwd.process(buf);
            buf.iter_mut().zip(&kin).for_each(|(v, p)| *v *= p);
            self.plans.inv.process(buf);
            if !free {
                buf.iter_mut().zip(&half).for_each(|(v, p)| *v *= p);
            }
            let share = self.boundary_share(buf);
            if share > self.opts.boundary_tolerance {
                return Err(Error::SolverAborted(format!(
                    "boundary layer holds {share:.3e} of the mass at t = {:.6} (tolerance {:.1e}); enlarge the axis",
                    t0 + (s + 1) as f64 * dt,
                    self.opts.boundary_tolerance
                )));
            }
        }
        Ok(())
    }
}

/// Snapshots of the split-step solution at each of `times` (ascending,
/// nonnegative). Steps are at most `dt` and land exactly on every requested
/// time.
pub fn split_step_solve(
    u0: &ComplexField1D,
    potential: &PotentialSpec,
    eps: f64,
    times: &[f64],
    dt: f64,
) -> Result<TimeSeries> {
    split_step_solve_with(u0, potential, eps, times, dt, SplitStepOptions::default())
}

pub fn split_step_solve_with(
    u0: &ComplexField1D,
    potential: &PotentialSpec,
    eps: f64,
    times: &[f64],
    dt: f64,
    opts: SplitStepOptions,
) -> Result<TimeSeries> {
    if !(dt > 0.0) {
        return Err(invalid("time step must be positive"));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("snapshot times must be nonnegative and ascending"));
    }
    let axis = *u0.axis();
    let solver = SplitStep::new(potential, eps, axis.count(), axis.step(), opts)?;
    let share = solver.boundary_share(u0.values());
    if share > opts.boundary_tolerance {
        return Err(Error::SolverAborted(format!(
            "initial data has {share:.3e} of its mass in the boundary layer; pad the axis"
        )));
    }
    let mut u = u0.clone();
    let mut t = 0.0;
    let mut series = TimeSeries::new(eps, potential.clone());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt).ceil() as usize;
            solver.advance(&mut u, span / steps as f64, steps, t)?;
            t = target;
        }
        series.push(target, u.clone());
    }
    Ok(series)
}
