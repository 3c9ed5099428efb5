//! Desk-scale run of the oracle and identity checks, one line per check.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use anyhow::Result;
use ndarray::Axis as NdAxis;
use num_complex::Complex64;
use serde::Serialize;
use smoothwig::liouville::{
    interpolate_to_grid, kernel_evolution_reference, lattice_deposit, propagate_with, rk4_integrate, seed_particles,
    FlowMap, LatticeOptions,
};
use smoothwig::phasespace::oracle::{spectrogram_point_oracle, wigner_point_oracle};
use smoothwig::phasespace::{
    marginal_k, marginal_x, smoothed_wigner, spectrogram, wigner, FieldKind, PhaseSpaceField, PhaseSpaceGrid,
    SmoothingParams,
};
use smoothwig::poly::RealPoly;
use smoothwig::reference::{
    build_f_eps, gaussian_packet_exact, harmonic_eigenfunction, split_step_solve, GaussianPacket, PotentialSpec,
};
use smoothwig::weyl::{
    build_evolution_operator, derivative_identity, derivative_identity_right, position_identity,
    position_identity_right, truncate, SchrodingerSymbol,
};
use smoothwig::{Axis, ComplexField1D, EpsilonParam};

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Test hook: mirror `k` in every transform the checks compute, which is
    /// what flipping the sign of the Fourier kernel does. The marginal and
    /// oracle checks must then fail.
    pub corrupt_fourier: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    pub seconds: f64,
    /// Why the check could not be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<28} {:>10.3e} (limit {:.0e}, {:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold,
            self.seconds
        )?;
        match &self.error {
            Some(e) => write!(f, ": {e}"),
            None => Ok(()),
        }
    }
}

struct Ctx {
    corrupt: bool,
}

impl Ctx {
    fn mirror(&self, w: PhaseSpaceField) -> PhaseSpaceField {
        if !self.corrupt {
            return w;
        }
        let mut v = w.values().clone();
        v.invert_axis(NdAxis(1));
        w.with_values(v.to_owned()).expect("same shape")
    }

    fn wigner(&self, u: &ComplexField1D, eps: f64, grid: &PhaseSpaceGrid) -> Result<PhaseSpaceField> {
        Ok(self.mirror(wigner(u, u, EpsilonParam::new(eps)?, grid)?))
    }

    fn smoothed(&self, u: &ComplexField1D, p: &SmoothingParams, grid: &PhaseSpaceGrid) -> Result<PhaseSpaceField> {
        Ok(self.mirror(smoothed_wigner(u, p, grid)?))
    }
}

/// Chirped Gaussian `exp(-a (x - x0)^2 + i (b x^2 + c x))`.
fn chirp(a: f64, x0: f64, b: f64, c: f64) -> impl Fn(f64) -> Complex64 + Copy {
    move |x| Complex64::from_polar((-a * (x - x0).powi(2)).exp(), b * x * x + c * x)
}

fn two_packets(x: f64) -> Complex64 {
    chirp(3.0, -0.5, 2.0, 5.0)(x) + chirp(1.5, 1.0, -1.0, 0.0)(x) * 0.5
}

fn std_axis() -> Axis {
    Axis::centered(1.0 / 16.0, 256).expect("valid axis")
}

/// FFT-path transform against direct quadrature at 20 scattered nodes.
fn point_oracle(ctx: &Ctx) -> Result<f64> {
    let axis = std_axis();
    let eps = 0.7;
    let f = ComplexField1D::from_fn(axis, two_packets);
    let grid = PhaseSpaceGrid::natural(axis, eps)?;
    let w = ctx.wigner(&f, eps, &grid)?;
    let mut worst = 0.0f64;
    for m in 0..20 {
        let (i, j) = (96 + (m * 37) % 64, 80 + (m * 53) % 96);
        let (x, k) = (grid.x_axis().at(i), grid.k_axis().at(j));
        let o = wigner_point_oracle(two_packets, two_packets, eps, x, k, 12.0, 24_000);
        worst = worst.max((w.at(i, j) - o.re).abs() / w.max_abs());
    }
    Ok(worst)
}

/// Both marginals against `|f|^2` and `(1/eps) |f^(k/eps)|^2` from a direct sum.
fn marginals(ctx: &Ctx) -> Result<f64> {
    let axis = std_axis();
    let eps = 0.7;
    let f = ComplexField1D::from_fn(axis, two_packets);
    let grid = PhaseSpaceGrid::natural(axis, eps)?;
    let w = ctx.wigner(&f, eps, &grid)?;
    let dx = axis.step();
    let err_k: f64 = marginal_k(&w).iter().zip(f.density()).map(|(a, b)| (a - b).abs()).sum::<f64>() * dx;
    let dk = grid.k_axis().step();
    let err_x: f64 = marginal_x(&w)
        .iter()
        .zip(grid.k_axis().samples())
        .map(|(a, k)| {
            let fh: Complex64 = axis
                .samples()
                .zip(f.values())
                .map(|(x, v)| v * Complex64::from_polar(dx, -2.0 * PI * k / eps * x))
                .sum();
            (a - fh.norm_sqr() / eps).abs()
        })
        .sum::<f64>()
        * dk;
    Ok(err_k.max(err_x))
}

/// The four single-factor identities over a small parameter sweep.
fn identities() -> Result<f64> {
    let axis = std_axis();
    let f = ComplexField1D::from_fn(axis, chirp(3.0, -0.5, 2.0, 5.0));
    let g = ComplexField1D::from_fn(axis, chirp(1.5, 1.0, -1.0, 0.0));
    let mut worst = 0.0f64;
    for eps in [1.0, 0.25] {
        let grid = PhaseSpaceGrid::natural(axis, eps)?;
        for s in [0.0, 0.5, 1.0] {
            let p = SmoothingParams::new(s, s, eps)?;
            for c in [
                position_identity(&f, &g, &p, &grid)?,
                position_identity_right(&f, &g, &p, &grid)?,
                derivative_identity(&f, &g, &p, &grid)?,
                derivative_identity_right(&f, &g, &p, &grid)?,
            ] {
                worst = worst.max(c.residual());
            }
        }
    }
    Ok(worst)
}

/// Critical smoothing: most negative value of the spectrogram of `f^eps`
/// over its maximum, and agreement of a two-packet spectrogram with the
/// windowed Fourier transform.
fn spectrogram_check(ctx: &Ctx) -> Result<f64> {
    let eps = 0.7;
    let p = SmoothingParams::critical(1.0, eps)?;
    let axis = Axis::centered(1.0 / 128.0, 1024)?;
    let grid = PhaseSpaceGrid::aligned(&axis, -3.0, 3.0, 4, Axis::centered(70.0 / 256.0, 256)?)?;
    let s = ctx.mirror(spectrogram(&build_f_eps(eps, axis)?, &p, &grid)?);
    let mut worst = (-s.min()).max(0.0) / s.max_abs();

    let axis = std_axis();
    let grid = PhaseSpaceGrid::natural(axis, eps)?;
    let s = ctx.mirror(spectrogram(&ComplexField1D::from_fn(axis, two_packets), &p, &grid)?);
    for (i, j) in [(128, 128), (120, 150), (140, 100), (100, 128)] {
        let (x, k) = (grid.x_axis().at(i), grid.k_axis().at(j));
        let o = spectrogram_point_oracle(two_packets, &p, x, k, -8.0, 8.0, 16_000);
        worst = worst.max((s.at(i, j) - o).abs() / s.max_abs());
    }
    Ok(worst)
}

/// Transport and first-order coefficients of the truncated generator for a
/// harmonic potential, against `2 pi k`, `-V'/(2 pi)` and
/// `sk^2/2 - V'' sx^2 / (8 pi^2)`.
fn truncation() -> Result<f64> {
    let (eps, sx, sk, w2) = (0.7, 0.5, 0.8, 290.0);
    let l = SchrodingerSymbol::new(PotentialSpec::harmonic(w2)?.poly())?.symbol();
    let g = truncate(&build_evolution_operator(&l, &SmoothingParams::new(sx, sk, eps)?), 1)?.pruned(1e-13);
    let mixed = sk * sk / 2.0 - w2 * sx * sx / (8.0 * PI * PI);
    let gaps = [
        (&g.coefficient(1, 1, 0) - &RealPoly::monomial(0, 1, 2.0 * PI)).max_coeff(),
        (&g.coefficient(1, 0, 1) - &RealPoly::monomial(1, 0, -w2 / (2.0 * PI))).max_coeff(),
        (&g.coefficient(2, 1, 1) - &RealPoly::constant(mixed)).max_coeff(),
    ];
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// RK4 over one harmonic period returns to the start.
fn rk4_period() -> Result<f64> {
    let v = PotentialSpec::harmonic(290.0)?;
    let period = 2.0 * PI / 290f64.sqrt();
    let mut worst = 0.0f64;
    for (x, k) in [(0.3, -1.0), (-0.8, 2.5), (0.0, 0.1)] {
        let (a, b) = rk4_integrate(&v, x, k, period, period / 1000.0);
        worst = worst.max((a - x).abs().max((b - k).abs()));
    }
    Ok(worst)
}

/// Particle transport of a Gaussian bump vs its exact pullback.
fn particle_pullback() -> Result<f64> {
    let g = PhaseSpaceGrid::new(Axis::centered(12.0 / 128.0, 128)?, Axis::centered(6.0 / 128.0, 128)?);
    let w0 = |x: f64, k: f64| (-(x / 0.5).powi(2) / 2.0 - (k / 0.4).powi(2) / 2.0).exp();
    let f0 = PhaseSpaceField::from_fn(g, FieldKind::Smoothed, w0);
    let flow = FlowMap::exact(0.0, 0, 0.5)?;
    let moved = interpolate_to_grid(&propagate_with(&seed_particles(&f0, 1e-10)?, &flow), &g)?;
    let back = flow.inverse();
    let exact = PhaseSpaceField::from_fn(g, FieldKind::Smoothed, |x, k| {
        let (a, b) = back.apply(x, k);
        w0(a, b)
    });
    Ok(moved.linf_distance(&exact)?)
}

/// Transported SWT of a moving packet vs the flow-distorted kernel reference.
fn kernel_reference(ctx: &Ctx) -> Result<f64> {
    let eps = 0.5;
    let axis = Axis::centered(1.0 / 32.0, 1024)?;
    let g = PhaseSpaceGrid::aligned(&axis, -4.0, 3.99, 2, Axis::centered(6.0 / 256.0, 256)?)?;
    let params = SmoothingParams::new(0.5, 0.5, eps)?;
    let p = GaussianPacket::new(
        Complex64::new(PI, 0.5 * PI),
        Complex64::new(0.0, -2.0 * PI * 0.4 / eps),
        Complex64::default(),
    )?;
    let t = 0.3;
    let flow = FlowMap::exact(0.0, 0, t)?;
    let u0 = gaussian_packet_exact(&p, eps, 0.0, axis)?;
    let ut = gaussian_packet_exact(&p, eps, t, axis)?;
    let ens = seed_particles(&ctx.smoothed(&u0, &params, &g)?, 1e-12)?;
    let transported = interpolate_to_grid(&propagate_with(&ens, &flow), &g)?;
    let reference = kernel_evolution_reference(&ctx.wigner(&ut, eps, &g)?, &params, &flow)?;
    Ok(transported.linf_distance(&reference)? / reference.max_abs())
}

/// Deposited mass of an SWT ensemble under the uniform field.
fn mass_conservation() -> Result<f64> {
    let eps = 0.7;
    let axis = Axis::centered(1.0 / 128.0, 1024)?;
    let u = build_f_eps(eps, axis)?;
    let grid = PhaseSpaceGrid::aligned(&axis, -3.0, 3.0, 4, Axis::centered(70.0 / 192.0, 192)?)?;
    let w = smoothed_wigner(&u, &SmoothingParams::new(0.5, 0.5, eps)?, &grid)?;
    let ens = seed_particles(&w, 1e-8)?;
    let v = PotentialSpec::uniform_field(2.0 * PI * 300.0)?;
    let out = Axis::new(-8.0, 1.0 / 32.0, 513)?;
    let mut masses = Vec::new();
    for t in [0.0, 0.02, 0.04] {
        let moved = propagate_with(&ens, &FlowMap::for_potential(&v, t));
        masses.push(lattice_deposit(&moved, &out, &LatticeOptions::default(), |_, _| 0.0)?.mass);
    }
    Ok(masses.iter().map(|m| ((m - masses[0]) / masses[0]).abs()).fold(0.0, f64::max))
}

/// `|u|` of an eigenstate after one period of split-step.
fn split_step_eigenstate() -> Result<f64> {
    let omega = 290f64.sqrt();
    let period = 2.0 * PI / omega;
    let axis = Axis::centered(1.0 / 32.0, 256)?;
    let u0 = harmonic_eigenfunction(9, omega, 0.7, axis)?;
    let s = split_step_solve(&u0, &PotentialSpec::harmonic(290.0)?, 0.7, &[period], period / 1000.0)?;
    let last = s.last().expect("one snapshot");
    Ok(last.values().iter().zip(u0.values()).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max))
}

type CheckFn = Box<dyn Fn(&Ctx) -> Result<f64>>;

/// Runs every check; a check that errors counts as failed with an infinite measurement.
pub fn run(opts: &VerifyOptions) -> Vec<Check> {
    let ctx = Ctx {
        corrupt: opts.corrupt_fourier,
    };
    let checks: Vec<(&'static str, f64, CheckFn)> = vec![
        ("transform_vs_quadrature", 1e-8, Box::new(point_oracle)),
        ("marginals", 1e-8, Box::new(marginals)),
        ("single_factor_identities", 1e-7, Box::new(|_| identities())),
        ("spectrogram_nonnegative", 1e-6, Box::new(spectrogram_check)),
        ("truncated_generator", 1e-12, Box::new(|_| truncation())),
        ("rk4_harmonic_period", 1e-8, Box::new(|_| rk4_period())),
        ("particles_vs_pullback", 1e-4, Box::new(|_| particle_pullback())),
        ("kernel_reference", 1e-4, Box::new(kernel_reference)),
        ("deposited_mass", 1e-4, Box::new(|_| mass_conservation())),
        ("split_step_eigenstate", 1e-6, Box::new(|_| split_step_eigenstate())),
    ];
    checks
        .into_iter()
        .map(|(name, threshold, f)| {
            let start = Instant::now();
            let (measured, error) = match f(&ctx) {
                Ok(v) if v.is_finite() => (v, None),
                Ok(_) => (f64::INFINITY, Some("non-finite result".to_string())),
                Err(e) => (f64::INFINITY, Some(format!("{e:#}"))),
            };
            Check {
                name,
                measured,
                threshold,
                passed: measured < threshold,
                seconds: start.elapsed().as_secs_f64(),
                error,
            }
        })
        .collect()
}
