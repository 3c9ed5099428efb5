//! Experiment configuration: a TOML document describing one run.
//!
//! ```toml
//! eps = 1.0
//! t_final = 1.0
//! dt = 0.01
//! output = "out/free"
//!
//! [potential]
//! kind = "free"
//! coefficients = []
//!
//! [smoothing]
//! sigma_x = 0.5
//! sigma_k = 0.5
//! spectrogram_sigma_x = 1.0
//!
//! [initial_condition]
//! kind = "gaussian_sum"
//!
//! [grid]
//! field_step = 0.0078125
//! field_points = 1024
//! x_range = [-4.0, 4.0]
//! k_range = [-22.0, 22.0]
//! resolution = 256
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use smoothwig::phasespace::{PhaseSpaceGrid, SmoothingParams};
use smoothwig::reference::{three_gaussians, GaussianPacket, PotentialSpec};
use smoothwig::Axis;

/// A config problem, tied to the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Smoothing {
    pub sigma_x: f64,
    pub sigma_k: f64,
    /// Window width of the spectrogram run; its `sigma_k` is `1 / sigma_x`.
    pub spectrogram_sigma_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `A(x) exp(2 pi i S(x) / eps)`.
    FEps {
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Sum of Gaussian packets `exp(-(K x^2 + Lambda x + M))`; the three
    /// default packets when `packets` is absent.
    GaussianSum {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        packets: Option<Vec<GaussianPacket>>,
    },
    /// `n`-th eigenstate of `V = omega^2 x^2 / 2`.
    Hermite {
        n: usize,
        omega: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Samples stored in a field file; its axis must match the field axis.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Sample spacing of the wavefunction.
    pub field_step: f64,
    /// Samples of the wavefunction, on an axis centred at zero.
    pub field_points: usize,
    pub x_range: [f64; 2],
    pub k_range: [f64; 2],
    /// Nodes per phase-space axis.
    pub resolution: usize,
    /// Nodes on the k axis when it needs more than `resolution`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_resolution: Option<usize>,
    /// Axis for marginal output; the field axis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub eps: f64,
    pub t_final: f64,
    /// Step of the split-step solver and of RK4 for non-monomial potentials.
    pub dt: f64,
    /// Relative threshold for seeding particles.
    #[serde(default = "default_seed_tolerance")]
    pub seed_tolerance: f64,
    /// Snapshot times; `0, t/8, t/4, t/2, t` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<f64>>,
    pub output: PathBuf,
    pub potential: PotentialSpec,
    pub smoothing: Smoothing,
    pub initial_condition: InitialCondition,
    pub grid: GridConfig,
}

fn default_seed_tolerance() -> f64 {
    1e-8
}

/// The three built-in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CaseStudy {
    Free,
    Harmonic,
    Uniform,
}

impl CaseStudy {
    pub fn name(self) -> &'static str {
        match self {
            CaseStudy::Free => "free",
            CaseStudy::Harmonic => "harmonic",
            CaseStudy::Uniform => "uniform",
        }
    }

    /// The potential the case fixes.
    pub fn potential(self) -> PotentialSpec {
        match self {
            CaseStudy::Free => PotentialSpec::free(),
            CaseStudy::Harmonic => PotentialSpec::harmonic(290.0).expect("positive"),
            CaseStudy::Uniform => PotentialSpec::uniform_field(2.0 * PI * 300.0).expect("nonzero"),
        }
    }
}

impl ExperimentConfig {
    /// Default setup of a case study.
    pub fn case_study(case: CaseStudy) -> Self {
        let out = PathBuf::from("out").join(case.name());
        match case {
            CaseStudy::Free => ExperimentConfig {
                eps: 1.0,
                t_final: 1.0,
                dt: 0.01,
                seed_tolerance: default_seed_tolerance(),
                snapshots: None,
                output: out,
                potential: case.potential(),
                smoothing: Smoothing {
                    sigma_x: 0.5,
                    sigma_k: 0.5,
                    spectrogram_sigma_x: 1.0,
                },
                initial_condition: InitialCondition::GaussianSum {
                    amplitude: 1.0,
                    packets: None,
                },
                grid: GridConfig {
                    field_step: 1.0 / 128.0,
                    field_points: 1024,
                    x_range: [-4.0, 4.0],
                    k_range: [-22.0, 22.0],
                    resolution: 256,
                    k_resolution: None,
                    output_step: Some(1.0 / 16.0),
                    output_range: Some([-80.0, 80.0]),
                },
            },
            CaseStudy::Harmonic => {
                let omega = 290f64.sqrt();
                ExperimentConfig {
                    eps: 0.7,
                    t_final: 2.0 * PI / omega,
                    dt: 2.0 * PI / omega / 1000.0,
                    seed_tolerance: default_seed_tolerance(),
                    snapshots: None,
                    output: out,
                    potential: case.potential(),
                    smoothing: Smoothing {
                        sigma_x: 0.3,
                        sigma_k: 0.8,
                        spectrogram_sigma_x: 1.0,
                    },
                    initial_condition: InitialCondition::Hermite {
                        n: 9,
                        omega,
                        amplitude: 1.0,
                    },
                    grid: GridConfig {
                        field_step: 1.0 / 128.0,
                        field_points: 1024,
                        x_range: [-2.0, 2.0],
                        k_range: [-6.0, 6.0],
                        resolution: 256,
                        k_resolution: None,
                        output_step: None,
                        output_range: None,
                    },
                }
            }
            CaseStudy::Uniform => ExperimentConfig {
                eps: 0.7,
                t_final: 0.04,
                dt: 1e-4,
                seed_tolerance: default_seed_tolerance(),
                snapshots: None,
                output: out,
                potential: case.potential(),
                smoothing: Smoothing {
                    sigma_x: 0.5,
                    sigma_k: 0.5,
                    spectrogram_sigma_x: 1.0,
                },
                initial_condition: InitialCondition::FEps { amplitude: 1.0 },
                grid: GridConfig {
                    field_step: 1.0 / 128.0,
                    field_points: 3072,
                    x_range: [-3.5, 3.5],
                    k_range: [-35.0, 35.0],
                    resolution: 256,
                    // the ridge of the smoothed transform is ~0.12 wide in k
                    k_resolution: Some(2048),
                    output_step: None,
                    output_range: None,
                },
            },
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let line = e.span().map(|s| {
                let before = &text[..s.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                format!("line {line}, column {col}: ")
            });
            bad("", format!("{}{}", line.unwrap_or_default(), msg.lines().last().unwrap_or(&msg)))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad("", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| ConfigError {
            message: format!("{}: {}", path.display(), e.message),
            ..e
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(bad(name, format!("must be positive, got {v}")))
            }
        };
        positive("eps", self.eps)?;
        positive("dt", self.dt)?;
        positive("seed_tolerance", self.seed_tolerance)?;
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(bad("t_final", format!("must be nonnegative, got {}", self.t_final)));
        }
        if let Some(s) = &self.snapshots {
            if s.is_empty() {
                return Err(bad("snapshots", "must not be empty"));
            }
            if s.iter().any(|t| !(*t >= 0.0 && *t <= self.t_final)) {
                return Err(bad("snapshots", "times must lie in [0, t_final]"));
            }
            if s.windows(2).any(|w| w[1] <= w[0]) {
                return Err(bad("snapshots", "times must be increasing"));
            }
        }
        let sm = &self.smoothing;
        for (name, v) in [("smoothing.sigma_x", sm.sigma_x), ("smoothing.sigma_k", sm.sigma_k)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(bad(name, format!("must be nonnegative, got {v}")));
            }
        }
        positive("smoothing.spectrogram_sigma_x", sm.spectrogram_sigma_x)?;
        match &self.initial_condition {
            InitialCondition::FEps { amplitude }
            | InitialCondition::GaussianSum { amplitude, .. }
            | InitialCondition::Hermite { amplitude, .. }
                if !amplitude.is_finite() =>
            {
                return Err(bad("initial_condition.amplitude", "must be finite"));
            }
            InitialCondition::Hermite { omega, .. } => positive("initial_condition.omega", *omega)?,
            InitialCondition::GaussianSum { packets: Some(p), .. } if p.is_empty() => {
                return Err(bad("initial_condition.packets", "must not be empty"));
            }
            _ => {}
        }
        let g = &self.grid;
        positive("grid.field_step", g.field_step)?;
        if g.field_points < 16 {
            return Err(bad("grid.field_points", format!("need at least 16, got {}", g.field_points)));
        }
        if g.resolution < 8 {
            return Err(bad("grid.resolution", format!("need at least 8, got {}", g.resolution)));
        }
        if let Some(n) = g.k_resolution.filter(|&n| n < 8) {
            return Err(bad("grid.k_resolution", format!("need at least 8, got {n}")));
        }
        for (name, r) in [("grid.x_range", g.x_range), ("grid.k_range", g.k_range)] {
            if !(r[0] < r[1]) || !r.iter().all(|v| v.is_finite()) {
                return Err(bad(name, format!("need lo < hi, got [{}, {}]", r[0], r[1])));
            }
        }
        let half = (g.field_points / 2) as f64 * g.field_step;
        if g.x_range[0] < -half || g.x_range[1] > half {
            return Err(bad("grid.x_range", format!("must lie inside the field axis [-{half}, {half})")));
        }
        if (g.x_range[1] - g.x_range[0]) / g.field_step < g.resolution as f64 - 1.0 {
            return Err(bad("grid.resolution", "more x nodes than field samples in x_range"));
        }
        match (g.output_step, g.output_range) {
            (None, None) => {}
            (Some(s), Some(r)) => {
                positive("grid.output_step", s)?;
                if !(r[0] < r[1]) {
                    return Err(bad("grid.output_range", format!("need lo < hi, got [{}, {}]", r[0], r[1])));
                }
            }
            _ => return Err(bad("grid.output_step", "output_step and output_range go together")),
        }
        Ok(())
    }

    pub fn smoothing_params(&self) -> smoothwig::Result<SmoothingParams> {
        SmoothingParams::new(self.smoothing.sigma_x, self.smoothing.sigma_k, self.eps)
    }

    pub fn spectrogram_params(&self) -> smoothwig::Result<SmoothingParams> {
        SmoothingParams::critical(self.smoothing.spectrogram_sigma_x, self.eps)
    }

    pub fn field_axis(&self) -> smoothwig::Result<Axis> {
        Axis::centered(self.grid.field_step, self.grid.field_points)
    }

    /// About `resolution` x nodes taken from the field axis inside `x_range`
    /// and `k_resolution` (default `resolution`) k nodes spanning `k_range`.
    pub fn phase_space_grid(&self) -> smoothwig::Result<PhaseSpaceGrid> {
        let g = &self.grid;
        let field = self.field_axis()?;
        let stride = (((g.x_range[1] - g.x_range[0]) / g.field_step) / g.resolution as f64).round().max(1.0) as usize;
        let k_axis = Axis::spanning(g.k_range[0], g.k_range[1], g.k_resolution.unwrap_or(g.resolution))?;
        PhaseSpaceGrid::aligned(&field, g.x_range[0], g.x_range[1], stride, k_axis)
    }

    /// Where marginals are compared.
    pub fn output_axis(&self) -> smoothwig::Result<Axis> {
        match (self.grid.output_step, self.grid.output_range) {
            (Some(s), Some(r)) => Axis::new(r[0], s, ((r[1] - r[0]) / s).round() as usize + 1),
            _ => self.field_axis(),
        }
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        match &self.snapshots {
            Some(s) => s.clone(),
            None if self.t_final == 0.0 => vec![0.0],
            None => {
                let t = self.t_final;
                vec![0.0, t / 8.0, t / 4.0, t / 2.0, t]
            }
        }
    }

    pub fn packets(&self) -> Vec<GaussianPacket> {
        match &self.initial_condition {
            InitialCondition::GaussianSum { packets: Some(p), .. } => p.clone(),
            _ => three_gaussians().to_vec(),
        }
    }
}
