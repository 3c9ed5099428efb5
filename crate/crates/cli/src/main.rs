use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use smoothwig_cli::config::{CaseStudy, ExperimentConfig};
use smoothwig_cli::verify::VerifyOptions;
use smoothwig_cli::{casestudy, evolve, transform, verify};

/// Smoothed Wigner transforms and their Liouville propagation.
#[derive(Parser)]
#[command(name = "smoothwig", version)]
struct Cli {
    /// Experiment config (TOML); the case defaults are used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Nodes per phase-space axis.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long, global = true)]
    sigma_x: Option<f64>,
    #[arg(long, global = true)]
    sigma_k: Option<f64>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wigner transform, SWT and spectrogram of the initial condition.
    Transform {
        /// Defaults to use without --config.
        #[arg(value_enum, default_value = "free")]
        case: CaseStudy,
    },
    /// Reference vs SWT-Liouville vs spectrogram-Liouville marginals.
    Casestudy {
        #[arg(value_enum)]
        case: CaseStudy,
    },
    /// Liouville evolution of the SWT, reconstructed on the phase-space grid.
    Evolve {
        #[arg(value_enum, default_value = "free")]
        case: CaseStudy,
    },
    /// Oracle and identity checks; exits nonzero if any fails.
    Verify {
        /// Write the check results as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_fourier: bool,
    },
}

impl Cli {
    fn config(&self, case: CaseStudy) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::case_study(case),
        };
        if let Some(o) = &self.out {
            cfg.output = o.clone();
        }
        if let Some(n) = self.resolution {
            cfg.grid.resolution = n;
        }
        if let Some(s) = self.sigma_x {
            cfg.smoothing.sigma_x = s;
        }
        if let Some(s) = self.sigma_k {
            cfg.smoothing.sigma_k = s;
        }
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let start = Instant::now();
    match &cli.command {
        Command::Transform { case } => {
            let cfg = cli.config(*case)?;
            let t = transform::compute(&cfg)?;
            transform::write(&cfg.output, &cfg, &t)?;
            eprintln!("wrote {} ({:.1} s)", cfg.output.display(), start.elapsed().as_secs_f64());
        }
        Command::Casestudy { case } => {
            let cfg = cli.config(*case)?;
            casestudy::check_case(*case, &cfg)?;
            let out = casestudy::run(case.name(), &cfg).with_context(|| format!("case study '{}'", case.name()))?;
            casestudy::write(&cfg.output, &cfg, &out)?;
            println!("{:>10} {:>12} {:>12} {:>12}", "t", "swt_error", "spec_error", "swt_mass");
            for r in &out.report.rows {
                println!("{:>10.5} {:>12.4e} {:>12.4e} {:>12.6e}", r.t, r.swt_error, r.spectrogram_error, r.swt_mass);
            }
            eprintln!("wrote {} ({:.1} s)", cfg.output.display(), start.elapsed().as_secs_f64());
        }
        Command::Evolve { case } => {
            let cfg = cli.config(*case)?;
            let ev = evolve::compute(&cfg)?;
            evolve::write(&cfg.output, &cfg, &ev)?;
            eprintln!("wrote {} ({:.1} s)", cfg.output.display(), start.elapsed().as_secs_f64());
        }
        Command::Verify { report, corrupt_fourier } => {
            let checks = verify::run(&VerifyOptions {
                corrupt_fourier: *corrupt_fourier,
            });
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed, {:.1} s", checks.len(), start.elapsed().as_secs_f64());
            if let Some(path) = report {
                smoothwig_cli::output::write_json(path, &checks)?;
            }
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
