//! Run configuration: a TOML key-value file, overridden by command-line flags,
//! over built-in defaults. Everything is validated before any output exists.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use elastica_core::dynamics::{direct_dt, step_count, StepOptions, DIRECT_STABILITY};
use elastica_core::output::Format;
use elastica_core::scenario::{Scenario, ScenarioSpec};
use serde::{Deserialize, Serialize};

pub const OUT_DIR_ENV: &str = "ELASTICA_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "elastica-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Hasimoto,
    Direct,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    Circle,
    Latitude,
    PerturbedPlanar,
    #[serde(rename = "perturbed-3d")]
    #[value(name = "perturbed-3d")]
    Perturbed3d,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// Keys accepted in the config file; each also exists as a flag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioName>,
    #[arg(long, value_enum)]
    pub solver: Option<Solver>,
    /// Grid size (power of two)
    #[arg(long = "N", alias = "n")]
    #[serde(rename = "N")]
    pub grid: Option<usize>,
    /// Hasimoto-path time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time
    #[arg(long = "T", alias = "t-final")]
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    /// Latitude polar angle
    #[arg(long)]
    pub psi: Option<f64>,
    /// Latitude angular velocity in psi
    #[arg(long)]
    pub rate: Option<f64>,
    /// Perturbation amplitude
    #[arg(long)]
    pub eps: Option<f64>,
    /// Perturbation mode
    #[arg(long)]
    pub mode: Option<usize>,
    /// Travelling speed of the perturbation
    #[arg(long)]
    pub speed: Option<f64>,
    /// Random-curve seed
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub symmetry: Option<usize>,
    #[arg(long)]
    pub decay: Option<f64>,
    /// Random curve confined to a plane
    #[arg(long)]
    pub planar: Option<bool>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Number of recorded samples after t = 0
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub picard_tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Direct-path time step (default: largest step <= 0.1/N² dividing the sample interval)
    #[arg(long)]
    pub direct_dt: Option<f64>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("malformed config {}: {e}", path.display()))
    }

    /// `self` with every unset key taken from `base`.
    pub fn over(self, base: Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: self.$f.or(base.$f)),* } };
        }
        pick!(
            scenario, solver, grid, dt, t_final, psi, rate, eps, mode, speed, seed, amplitude, symmetry, decay,
            planar, out, format, samples, picard_tol, max_iter, direct_dt
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    pub solver: Solver,
    pub grid: usize,
    pub t_final: f64,
    pub dt: f64,
    pub direct_dt: f64,
    /// Hasimoto steps between samples.
    pub sample_every: usize,
    /// Direct steps between samples (same sample times).
    pub direct_sample_every: usize,
    pub step: StepOptions,
    pub out: PathBuf,
    pub format: OutputFormat,
}

fn positive(name: &str, x: f64) -> Result<f64, String> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{name} must be positive and finite, got {x}"))
    }
}

fn default_out() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<Self, String> {
        let grid = s.grid.unwrap_or(64);
        let t_final = positive("T", s.t_final.unwrap_or(0.1))?;
        let dt = positive("dt", s.dt.unwrap_or(1e-3))?;
        let steps = step_count(t_final, dt).map_err(|e| e.to_string())?;
        let samples = s.samples.unwrap_or(20);
        if samples == 0 {
            return Err("samples must be positive".into());
        }
        let sample_every = (steps / samples).max(1);
        let interval = sample_every as f64 * dt;

        let scenario = match s.scenario.unwrap_or(ScenarioName::PerturbedPlanar) {
            ScenarioName::Circle => ScenarioSpec::Circle,
            ScenarioName::Latitude => ScenarioSpec::Latitude {
                psi: s.psi.unwrap_or(std::f64::consts::FRAC_PI_3),
                rate: s.rate.unwrap_or(0.0),
            },
            name @ (ScenarioName::PerturbedPlanar | ScenarioName::Perturbed3d) => ScenarioSpec::PerturbedCircle {
                eps: s.eps.unwrap_or(0.01),
                mode: s.mode.unwrap_or(3),
                planar: name == ScenarioName::PerturbedPlanar,
                speed: s.speed.unwrap_or(1.0),
            },
            ScenarioName::Random => ScenarioSpec::Random {
                seed: s.seed.unwrap_or(0),
                amplitude: s.amplitude.unwrap_or(0.2),
                modes: s.symmetry.unwrap_or(2),
                decay: s.decay.unwrap_or(1.0),
                planar: s.planar.unwrap_or(false),
            },
        };
        // builds (and discards) the initial data so that bad parameters fail here
        Scenario::build(scenario, grid).map_err(|e| e.to_string())?;

        let direct_dt = match s.direct_dt {
            Some(d) => {
                let d = positive("direct_dt", d)?;
                step_count(interval, d).map_err(|_| {
                    format!("direct_dt = {d} must divide the sample interval {interval}")
                })?;
                d
            }
            None => direct_dt(grid, interval),
        };
        let solver = s.solver.unwrap_or(Solver::Hasimoto);
        let limit = DIRECT_STABILITY / (grid * grid) as f64;
        if solver != Solver::Hasimoto && direct_dt > limit {
            return Err(format!("direct_dt = {direct_dt:e} exceeds the stability limit {limit:e}"));
        }
        let direct_sample_every = (interval / direct_dt).round() as usize;

        let step = StepOptions {
            picard_tol: positive("picard_tol", s.picard_tol.unwrap_or(StepOptions::default().picard_tol))?,
            max_iter: match s.max_iter.unwrap_or(StepOptions::default().max_iter) {
                0 => return Err("max_iter must be positive".into()),
                n => n,
            },
            ..StepOptions::default()
        };
        Ok(RunConfig {
            scenario,
            solver,
            grid,
            t_final,
            dt,
            direct_dt,
            sample_every,
            direct_sample_every,
            step,
            out: s.out.unwrap_or_else(default_out),
            format: s.format.unwrap_or(OutputFormat::Csv),
        })
    }
}
