use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use smoothwig::liouville::{
    conservation_report, distorted_kernel_covariance, exact_flow, gaussian_convolve, hamilton_rhs,
    interpolate_to_grid, interpolate_to_grid_with, kernel_evolution_reference, lagrange_eval, propagate,
    propagate_with, relative_drift, rk4_integrate, seed_particles, seed_particles_with, seeded_field,
    semi_lagrangian_evolve, semi_lagrangian_with_flow, write_conservation_csv, FlowKind, FlowMap, MlsOptions,
    Reconstruction,
};
use smoothwig::phasespace::{
    smoothed_wigner, wigner, FieldKind, PhaseSpaceField, PhaseSpaceGrid, SmoothingParams,
};
use smoothwig::reference::{build_f_eps, gaussian_packet_exact, GaussianPacket, PotentialSpec};
use smoothwig::weyl::SchrodingerSymbol;
use smoothwig::{Axis, EpsilonParam, Error};

const OMEGA_SQ: f64 = 290.0;

fn harmonic() -> PotentialSpec {
    PotentialSpec::harmonic(OMEGA_SQ).unwrap()
}

fn uniform() -> PotentialSpec {
    PotentialSpec::uniform_field(2.0 * PI * 300.0).unwrap()
}

fn period() -> f64 {
    2.0 * PI / OMEGA_SQ.sqrt()
}

/// Normalized Gaussian bump `exp(-((x-x0)/a)^2/2 - ((k-k0)/b)^2/2)`.
fn bump(x0: f64, k0: f64, a: f64, b: f64) -> impl Fn(f64, f64) -> f64 + Copy {
    move |x, k| (-((x - x0) / a).powi(2) / 2.0 - ((k - k0) / b).powi(2) / 2.0).exp()
}

fn grid(xh: f64, kh: f64, n: usize) -> PhaseSpaceGrid {
    PhaseSpaceGrid::new(
        Axis::centered(2.0 * xh / n as f64, n).unwrap(),
        Axis::centered(2.0 * kh / n as f64, n).unwrap(),
    )
}

fn pullback(g: PhaseSpaceGrid, w0: impl Fn(f64, f64) -> f64, flow: &FlowMap) -> PhaseSpaceField {
    let back = flow.inverse();
    PhaseSpaceField::from_fn(g, FieldKind::Wigner, |x, k| {
        let (a, b) = back.apply(x, k);
        w0(a, b)
    })
}

fn norm_l1(a: &PhaseSpaceField, b: &PhaseSpaceField) -> f64 {
    a.rel_l1_distance(b).unwrap()
}

#[test]
fn characteristics_of_the_case_study_potentials() {
    assert_eq!(hamilton_rhs(&PotentialSpec::free(), 0.0, 1.0), (2.0 * PI, 0.0));
    for x in [-1.0, 0.0, 0.7] {
        let (_, kd) = hamilton_rhs(&uniform(), x, 0.3);
        assert!((kd + 300.0).abs() < 1e-12);
        let (_, kd) = hamilton_rhs(&harmonic(), x, 0.3);
        assert!((kd + 290.0 / (2.0 * PI) * x).abs() < 1e-12);
    }
}

#[test]
fn exact_flows() {
    for s in 0..=2 {
        assert_eq!(exact_flow(1.3, s, 0.0, 0.4, -0.2).unwrap(), (0.4, -0.2));
    }
    let (x, k) = exact_flow(0.0, 0, 0.7, 0.4, -0.2).unwrap();
    assert!((x - (0.4 - 2.0 * PI * 0.2 * 0.7)).abs() < 1e-15 && k == -0.2);
    for (x0, k0) in [(0.3, 0.0), (-0.1, 2.0), (1.0, -1.0)] {
        let (x, k) = exact_flow(145.0, 2, period(), x0, k0).unwrap();
        assert!((x - x0).abs() < 1e-12 && (k - k0).abs() < 1e-12);
    }
    assert!(matches!(exact_flow(1.0, 3, 0.1, 0.0, 0.0), Err(Error::Unsupported(_))));
    assert_eq!(FlowMap::for_potential(&harmonic(), 0.1).kind(), FlowKind::ExactS2);
    let quartic = PotentialSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    assert_eq!(FlowMap::for_potential(&quartic, 0.1).kind(), FlowKind::Numeric);
}

#[test]
fn rk4_propagation_against_exact_flows() {
    let g = grid(3.0, 3.0, 32);
    let w0 = PhaseSpaceField::from_fn(g, FieldKind::Wigner, bump(0.2, 0.1, 0.5, 0.5));
    let ens = seed_particles(&w0, 1e-3).unwrap();
    let check = |moved: &[(f64, f64)], a: f64, s: u32, t: f64, tol: f64| {
        for (&(x, k), &(x0, k0)) in moved.iter().zip(ens.positions()) {
            let (xe, ke) = exact_flow(a, s, t, x0, k0).unwrap();
            assert!((x - xe).abs() < tol && (k - ke).abs() < tol, "s = {s}");
        }
    };
    let free = propagate(&ens, &PotentialSpec::free(), 0.8, 0.01).unwrap();
    check(free.positions(), 0.0, 0, 0.8, 1e-10);
    let uni = propagate(&ens, &uniform(), 0.05, 0.001).unwrap();
    check(uni.positions(), 2.0 * PI * 300.0, 1, 0.05, 1e-10);
    let harm = propagate(&ens, &harmonic(), period(), period() / 1000.0).unwrap();
    check(harm.positions(), 145.0, 2, 0.0, 1e-8);
    assert_eq!(harm.densities(), ens.densities());
    assert!(propagate(&ens, &harmonic(), 1.0, 0.0).is_err());
}

#[test]
fn seeding_single_node_and_halo() {
    let g = grid(1.0, 1.0, 32);
    let mut v = ndarray::Array2::zeros((32, 32));
    v[[10, 20]] = 1.0;
    let w = PhaseSpaceField::new(g, v, FieldKind::Wigner).unwrap();
    assert_eq!(seed_particles_with(&w, 0.5, 0).unwrap().len(), 1);
    assert_eq!(seed_particles_with(&w, 0.5, 2).unwrap().len(), 25);
    assert_eq!(seed_particles(&w, 0.5).unwrap().len(), 49);
    let zero = PhaseSpaceField::zeros(g, FieldKind::Wigner);
    assert!(matches!(seed_particles(&zero, 1e-3), Err(Error::Degenerate(_))));
    assert!(seed_particles(&w, 0.0).is_err());
}

#[test]
fn seeding_gaussian_level_set_area() {
    let (a, b, tol) = (0.6, 0.4, 1e-6);
    let g = grid(5.0, 3.5, 256);
    let w = PhaseSpaceField::from_fn(g, FieldKind::Wigner, bump(0.0, 0.0, a, b));
    let ens = seed_particles_with(&w, tol, 0).unwrap();
    // ellipse u^2 + v^2 < 2 ln(1/tol) in scaled coordinates
    let r2 = 2.0 * (1.0 / tol).ln();
    let area = PI * a * b * r2;
    let (ra, rb) = (a * r2.sqrt(), b * r2.sqrt());
    let perimeter = PI * (3.0 * (ra + rb) - ((3.0 * ra + rb) * (ra + 3.0 * rb)).sqrt());
    let layer = perimeter * g.x_axis().step().max(g.k_axis().step());
    let counted = ens.len() as f64 * ens.cell_area();
    assert!((counted - area).abs() < layer, "{counted} vs {area} (layer {layer})");
}

#[test]
fn seeding_f_eps_transform_is_sparse() {
    let eps = 0.7;
    let axis = Axis::centered(1.0 / 64.0, 512).unwrap();
    let f = build_f_eps(eps, axis).unwrap();
    let g = PhaseSpaceGrid::aligned(&axis, -2.0, 2.0, 2, Axis::centered(70.0 / 256.0, 256).unwrap()).unwrap();
    let w = smoothed_wigner(&f, &SmoothingParams::new(0.5, 0.5, eps).unwrap(), &g).unwrap();
    let ens = seed_particles(&w, 1e-4).unwrap();
    let (nx, nk) = g.shape();
    let ratio = ens.len() as f64 / (nx * nk) as f64;
    println!("f_eps seeding keeps {:.1}% of the grid", 100.0 * ratio);
    assert!(ratio < 1.0);
}

#[test]
fn unpropagated_ensemble_round_trips() {
    let g = grid(4.0, 3.0, 96);
    let w0 = PhaseSpaceField::from_fn(g, FieldKind::Smoothed, bump(0.5, 0.3, 0.4, 0.3));
    let tol = 1e-8;
    let ens = seed_particles(&w0, tol).unwrap();
    let back = interpolate_to_grid(&ens, &g).unwrap();
    assert_eq!(back.kind(), FieldKind::Smoothed);
    let err = back.linf_distance(&w0).unwrap();
    assert!(err < tol * w0.max_abs(), "{err:e}");
    assert!(seeded_field(&ens).linf_distance(&w0).unwrap() < tol * w0.max_abs());
}

#[test]
fn interpolation_after_free_flow_and_harmonic_period() {
    let w0 = bump(0.5, 0.3, 0.4, 0.3);
    let g = grid(5.0, 2.0, 256);
    let init = PhaseSpaceField::from_fn(g, FieldKind::Wigner, w0);
    let ens = seed_particles(&init, 1e-10).unwrap();
    let flow = FlowMap::exact(0.0, 0, 0.5).unwrap();
    let moved = interpolate_to_grid(&propagate_with(&ens, &flow), &g).unwrap();
    let err = moved.linf_distance(&pullback(g, w0, &flow)).unwrap();
    assert!(err < 1e-4, "free: {err:e}");

    // harmonic rotation mixes x and k with ratio omega / (2 pi)
    let hg = grid(2.0, 2.0 * OMEGA_SQ.sqrt() / (2.0 * PI), 192);
    let w0 = bump(0.3, 0.5, 0.25, 0.6);
    let init = PhaseSpaceField::from_fn(hg, FieldKind::Wigner, w0);
    let ens = seed_particles(&init, 1e-10).unwrap();
    let round = propagate(&ens, &harmonic(), period(), period() / 1000.0).unwrap();
    let err = interpolate_to_grid(&round, &hg).unwrap().linf_distance(&init).unwrap();
    assert!(err < 1e-4, "harmonic: {err:e}");
    let quarter = FlowMap::exact(145.0, 2, period() / 4.0).unwrap();
    let err = interpolate_to_grid(&propagate_with(&ens, &quarter), &hg)
        .unwrap()
        .linf_distance(&pullback(hg, w0, &quarter))
        .unwrap();
    assert!(err < 1e-4, "quarter period: {err:e}");
}

#[test]
fn mls_reconstruction_is_available() {
    let w0 = bump(0.5, 0.3, 0.4, 0.3);
    let g = grid(5.0, 2.0, 128);
    let init = PhaseSpaceField::from_fn(g, FieldKind::Wigner, w0);
    let ens = seed_particles(&init, 1e-10).unwrap();
    let flow = FlowMap::exact(0.0, 0, 0.5).unwrap();
    let how = Reconstruction::Mls(MlsOptions {
        degree: 4,
        ..Default::default()
    });
    let w = interpolate_to_grid_with(&propagate_with(&ens, &flow), &g, &how).unwrap();
    assert!(w.linf_distance(&pullback(g, w0, &flow)).unwrap() < 1e-3);
    let bad = Reconstruction::Mls(MlsOptions {
        degree: 3,
        neighbors: Some(4),
        ..Default::default()
    });
    assert!(interpolate_to_grid_with(&ens, &g, &bad).is_err());
}

#[test]
fn semi_lagrangian_free_shear() {
    let w0 = bump(-0.5, 0.2, 0.5, 0.4);
    let g = grid(5.0, 2.0, 256);
    let init = PhaseSpaceField::from_fn(g, FieldKind::Wigner, w0);
    let t = 0.4;
    let sl = semi_lagrangian_evolve(&init, &PotentialSpec::free(), t, 0.01, &g).unwrap();
    let shear = PhaseSpaceField::from_fn(g, FieldKind::Wigner, |x, k| w0(x - 2.0 * PI * k * t, k));
    let err = sl.linf_distance(&shear).unwrap();
    assert!(err < 1e-6, "{err:e}");
    let same = semi_lagrangian_evolve(&init, &PotentialSpec::free(), 0.0, 0.01, &g).unwrap();
    assert!(same.linf_distance(&init).unwrap() < 1e-15);
    assert!(semi_lagrangian_evolve(&init, &PotentialSpec::free(), t, -1.0, &g).is_err());
}

#[test]
fn particle_and_semi_lagrangian_agree_on_case_study_potentials() {
    let cases = [
        (PotentialSpec::free(), grid(5.0, 2.0, 256), bump(0.0, 0.3, 0.4, 0.3), 0.5),
        (uniform(), grid(3.0, 16.0, 256), bump(0.3, 5.0, 0.3, 1.5), 0.03),
        (harmonic(), grid(2.0, 6.0, 256), bump(0.3, 0.5, 0.25, 0.6), 0.37 * period()),
    ];
    for (v, g, w0, t) in cases {
        let init = PhaseSpaceField::from_fn(g, FieldKind::Wigner, w0);
        let dt = (t / 200.0).min(0.01);
        let ens = seed_particles(&init, 1e-10).unwrap();
        let particle = interpolate_to_grid(&propagate(&ens, &v, t, dt).unwrap(), &g).unwrap();
        let sl = semi_lagrangian_evolve(&init, &v, t, dt, &g).unwrap();
        let exact = pullback(g, w0, &FlowMap::for_potential(&v, t));
        let d = [norm_l1(&particle, &sl), norm_l1(&particle, &exact), norm_l1(&sl, &exact)];
        assert!(d.iter().all(|&e| e < 1e-3), "{:?}: {d:?}", v.kind());
    }
}

fn moving_packet(eps: f64) -> GaussianPacket {
    GaussianPacket::new(
        Complex64::new(PI, 0.5 * PI),
        Complex64::new(0.0, -2.0 * PI * 0.4 / eps),
        Complex64::default(),
    )
    .unwrap()
}

#[test]
fn kernel_reference_at_time_zero_is_the_smoothed_transform() {
    let eps = 0.5;
    let axis = Axis::centered(1.0 / 32.0, 512).unwrap();
    let g = PhaseSpaceGrid::aligned(&axis, -4.0, 3.99, 2, Axis::centered(6.0 / 256.0, 256).unwrap()).unwrap();
    let params = SmoothingParams::new(0.5, 0.5, eps).unwrap();
    let u = gaussian_packet_exact(&moving_packet(eps), eps, 0.0, axis).unwrap();
    let w = wigner(&u, &u, EpsilonParam::new(eps).unwrap(), &g).unwrap();
    let r = kernel_evolution_reference(&w, &params, &FlowMap::exact(0.0, 0, 0.0).unwrap()).unwrap();
    let swt = smoothed_wigner(&u, &params, &g).unwrap();
    let err = r.linf_distance(&swt).unwrap() / swt.max_abs();
    assert!(err < 1e-6, "{err:e}");
    assert_eq!(r.kind(), FieldKind::Smoothed);
    let numeric = FlowMap::numeric(&PotentialSpec::free(), 0.1, 0.01).unwrap();
    assert!(matches!(
        kernel_evolution_reference(&w, &params, &numeric),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn transported_smoothed_transform_equals_kernel_reference() {
    let eps = 0.5;
    let axis = Axis::centered(1.0 / 32.0, 1024).unwrap();
    let g = PhaseSpaceGrid::aligned(&axis, -4.0, 3.99, 2, Axis::centered(6.0 / 256.0, 256).unwrap()).unwrap();
    let params = SmoothingParams::new(0.5, 0.5, eps).unwrap();
    let p = moving_packet(eps);
    let t = 0.3;
    let u0 = gaussian_packet_exact(&p, eps, 0.0, axis).unwrap();
    let ut = gaussian_packet_exact(&p, eps, t, axis).unwrap();
    let flow = FlowMap::exact(0.0, 0, t).unwrap();
    let ens = seed_particles(&smoothed_wigner(&u0, &params, &g).unwrap(), 1e-12).unwrap();
    let transported = interpolate_to_grid(&propagate_with(&ens, &flow), &g).unwrap();
    let wt = wigner(&ut, &ut, EpsilonParam::new(eps).unwrap(), &g).unwrap();
    let reference = kernel_evolution_reference(&wt, &params, &flow).unwrap();
    let err = transported.linf_distance(&reference).unwrap();
    assert!(err < 1e-5 * reference.max_abs(), "{err:e}");

    // the plain smoothed transform at time t is a different field
    let plain = smoothed_wigner(&ut, &params, &g).unwrap();
    assert!(plain.linf_distance(&reference).unwrap() > 1e3 * err);
}

#[test]
fn critical_kernel_spreads_more_under_the_flow() {
    let eps = 0.7;
    let flow = FlowMap::exact(0.0, 0, 2.0).unwrap();
    let sub = SmoothingParams::new(0.5, 0.5, eps).unwrap();
    let crit = SmoothingParams::critical(1.0, eps).unwrap();
    let c_sub = distorted_kernel_covariance(&sub, &flow).unwrap();
    let c_crit = distorted_kernel_covariance(&crit, &flow).unwrap();
    assert!(c_crit.determinant() > c_sub.determinant());
    assert!(c_crit[(0, 0)] > c_sub[(0, 0)]);
    // x-variance grows like (2 pi t)^2 vk
    let (vx, vk) = crit.kernel_variances();
    assert!((c_crit[(0, 0)] - vx - (4.0 * PI).powi(2) * vk).abs() < 1e-12);
    // linear flows preserve the kernel's area
    let (vx, vk) = sub.kernel_variances();
    assert!((c_sub.determinant() - vx * vk).abs() < 1e-14);
}

#[test]
fn gaussian_convolution_preserves_mass_and_adds_covariance() {
    let g = grid(4.0, 4.0, 128);
    let w = PhaseSpaceField::from_fn(g, FieldKind::Wigner, bump(0.2, -0.3, 0.3, 0.4));
    let cov = nalgebra::Matrix2::new(0.04, 0.01, 0.01, 0.09);
    let c = gaussian_convolve(&w, &cov);
    assert!((c.total() - w.total()).abs() < 1e-12 * w.total());
    let m = |f: &PhaseSpaceField, phi: &dyn Fn(f64, f64) -> f64| f.integrate(phi) / f.total();
    let vx = |f: &PhaseSpaceField| m(f, &|x, _| (x - 0.2).powi(2));
    let cxk = |f: &PhaseSpaceField| m(f, &|x, k| (x - 0.2) * (k + 0.3));
    assert!((vx(&c) - vx(&w) - 0.04).abs() < 1e-10);
    assert!((cxk(&c) - 0.01).abs() < 1e-10);
}

#[test]
fn conservation_along_transport() {
    // free: exact transport of a Gaussian
    let w0 = bump(0.0, 0.2, 0.4, 0.3);
    let g = grid(9.0, 3.0, 320);
    let init = PhaseSpaceField::from_fn(g, FieldKind::Wigner, w0);
    let ens = seed_particles(&init, 1e-12).unwrap();
    let fields: Vec<(f64, PhaseSpaceField)> = [0.0, 0.25, 0.5]
        .iter()
        .map(|&t| (t, pullback(g, w0, &FlowMap::exact(0.0, 0, t).unwrap())))
        .collect();
    let free_h = SchrodingerSymbol::new(PotentialSpec::free().poly()).unwrap().hamiltonian();
    let rows = conservation_report(fields.iter().map(|(t, w)| (*t, w)), &free_h);
    assert!(relative_drift(&rows).0 < 1e-8, "{rows:?}");

    // harmonic, one period, particle pipeline
    let hg = grid(2.0, 2.0 * OMEGA_SQ.sqrt() / (2.0 * PI), 192);
    let w0 = bump(0.3, 0.5, 0.25, 0.6);
    let init = PhaseSpaceField::from_fn(hg, FieldKind::Wigner, w0);
    let ens_h = seed_particles(&init, 1e-12).unwrap();
    let h = SchrodingerSymbol::new(harmonic().poly()).unwrap().hamiltonian();
    let snaps: Vec<(f64, PhaseSpaceField)> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&f| {
            let moved = propagate(&ens_h, &harmonic(), f * period(), period() / 1000.0).unwrap();
            (f * period(), interpolate_to_grid(&moved, &hg).unwrap())
        })
        .collect();
    let rows = conservation_report(snaps.iter().map(|(t, w)| (*t, w)), &h);
    let (mass, energy) = relative_drift(&rows);
    assert!(energy < 1e-4 && mass < 1e-4, "mass {mass:e}, energy {energy:e}");

    // uniform field
    let ug = grid(3.0, 16.0, 256);
    let w0 = bump(0.3, 5.0, 0.3, 1.5);
    let init = PhaseSpaceField::from_fn(ug, FieldKind::Wigner, w0);
    let ens_u = seed_particles(&init, 1e-12).unwrap();
    let snaps: Vec<(f64, PhaseSpaceField)> = [0.0, 0.01, 0.03]
        .iter()
        .map(|&t| {
            let moved = propagate(&ens_u, &uniform(), t, 1e-3).unwrap();
            (t, interpolate_to_grid(&moved, &ug).unwrap())
        })
        .collect();
    let uh = SchrodingerSymbol::new(uniform().poly()).unwrap().hamiltonian();
    let rows = conservation_report(snaps.iter().map(|(t, w)| (*t, w)), &uh);
    assert!(relative_drift(&rows).0 < 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conservation.csv");
    write_conservation_csv(&path, &rows).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("t,mass,energy"));
    assert_eq!(text.lines().count(), rows.len() + 1);
    let _ = ens;
}

#[test]
fn ensemble_csv_and_marginal_deposition() {
    let g = grid(3.0, 3.0, 64);
    let init = PhaseSpaceField::from_fn(g, FieldKind::Wigner, bump(0.0, 0.0, 0.5, 0.5));
    let ens = seed_particles(&init, 1e-10).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ens.csv");
    ens.write_csv(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), ens.len() + 1);
    let axis = Axis::centered(0.05, 160).unwrap();
    let m = ens.deposit_marginal_x(&axis);
    let mass: f64 = m.iter().sum::<f64>() * axis.step();
    assert!((mass - init.total()).abs() < 1e-12 * init.total());
}

/// Particle pipeline seeded on a coarse grid, compared with backward
/// characteristics through the same transform sampled four times finer.
fn coarse_particle_residual(f: &smoothwig::ComplexField1D, params: SmoothingParams) -> f64 {
    let axis = *f.axis();
    let coarse = PhaseSpaceGrid::aligned(&axis, -2.5, 2.5, 8, Axis::centered(70.0 / 128.0, 128).unwrap()).unwrap();
    let fine = PhaseSpaceGrid::aligned(&axis, -2.5, 2.5, 2, Axis::centered(70.0 / 512.0, 512).unwrap()).unwrap();
    let v = uniform();
    let t = 0.0123;
    let w0 = smoothed_wigner(f, &params, &coarse).unwrap();
    let ens = seed_particles(&w0, 1e-6).unwrap();
    let particle = interpolate_to_grid(&propagate(&ens, &v, t, 1e-3).unwrap(), &coarse).unwrap();
    let w0_fine = smoothed_wigner(f, &params, &fine).unwrap();
    let sl = semi_lagrangian_with_flow(&w0_fine, &FlowMap::for_potential(&v, t), &coarse).unwrap();
    norm_l1(&particle, &sl)
}

#[test]
fn raw_wigner_needs_more_particles_than_smoothed() {
    let eps = 0.7;
    let axis = Axis::centered(1.0 / 128.0, 1024).unwrap();
    let f = build_f_eps(eps, axis).unwrap();
    let raw = coarse_particle_residual(&f, SmoothingParams::unsmoothed(eps).unwrap());
    let smooth = coarse_particle_residual(&f, SmoothingParams::new(0.5, 0.5, eps).unwrap());
    println!("interpolation residual: raw {raw:e}, smoothed {smooth:e}");
    assert!(raw >= 10.0 * smooth);
}

proptest! {
    #[test]
    fn exact_flows_are_symplectic(a in -50.0..50.0f64, s in 0u32..3, t in -1.0..1.0f64) {
        let f = FlowMap::exact(a, s, t).unwrap();
        let (m, _) = f.affine().unwrap();
        prop_assert!((m.determinant() - 1.0).abs() < 1e-9 * m.norm().powi(2).max(1.0));
        let (x, k) = f.apply(0.3, -0.4);
        let (xb, kb) = f.inverse().apply(x, k);
        let scale = 1.0 + x.abs() + k.abs();
        prop_assert!((xb - 0.3).abs() < 1e-9 * scale && (kb + 0.4).abs() < 1e-9 * scale);
    }

    #[test]
    fn rk4_reverses(x in -1.0..1.0f64, k in -1.0..1.0f64, t in 0.0..0.5f64) {
        let v = PotentialSpec::polynomial(vec![0.0, 0.3, -1.0, 0.0, 0.5]).unwrap();
        let (x1, k1) = rk4_integrate(&v, x, k, t, 1e-3);
        let (x0, k0) = rk4_integrate(&v, x1, k1, -t, 1e-3);
        prop_assert!((x0 - x).abs() < 1e-8 && (k0 - k).abs() < 1e-8);
    }

    #[test]
    fn lagrange_reproduces_quintics(x in -1.5..1.5f64, k in -1.5..1.5f64) {
        let g = grid(2.0, 2.0, 32);
        let p = |x: f64, k: f64| 1.0 + x - 2.0 * k * k + x.powi(3) * k.powi(2) - 0.5 * k.powi(5);
        let w = PhaseSpaceField::from_fn(g, FieldKind::Wigner, p);
        let v = lagrange_eval(&w, x, k, 6);
        prop_assert!((v - p(x, k)).abs() < 1e-10);
    }
}
