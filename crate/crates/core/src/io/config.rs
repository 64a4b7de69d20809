//! TOML run/sweep configuration.
//!
//! ```toml
//! workers = 4
//!
//! [grid]
//! n = 32
//!
//! [ic]
//! kind = "taylor-green"   # abc: a, b, c | shear: modes | random-solenoidal: k0, seed
//!
//! [voigt]
//! alphas = [0.1, 0.05, 0.025]
//!
//! [time]
//! dt = 1e-3               # or: adaptive = true, cfl = 0.5, dt_max = 1e-2
//! t_final = 0.2
//! sample_stride = 10
//!
//! [run]
//! drift_abort_tol = 1e-6
//!
//! [fit]
//! beta_threshold = 0.1
//! slack = 0.1
//! r2_threshold = 0.98
//! time_grid_points = 11
//!
//! [output]
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::{SweepConfig, Thresholds};
use crate::integrate::{IntegratorConfig, StepControl, DEFAULT_DRIFT_ABORT_TOL};
use crate::io::ic::InitialConditionSpec;

pub const DEFAULT_TIME_GRID_POINTS: usize = 11;
pub const DEFAULT_K0: f64 = 2.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: RawGrid,
    ic: RawIc,
    #[serde(default)]
    voigt: RawVoigt,
    time: RawTime,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    fit: RawFit,
    #[serde(default)]
    output: RawOutput,
    workers: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIc {
    kind: String,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    modes: Option<usize>,
    k0: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVoigt {
    #[serde(default)]
    alphas: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    dt: Option<f64>,
    #[serde(default)]
    adaptive: bool,
    cfl: Option<f64>,
    dt_max: Option<f64>,
    t_final: f64,
    sample_stride: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    drift_abort_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFit {
    beta_threshold: Option<f64>,
    slack: Option<f64>,
    r2_threshold: Option<f64>,
    time_grid_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// A validated configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub n: usize,
    pub ic: InitialConditionSpec,
    pub alphas: Vec<f64>,
    pub integrator: IntegratorConfig,
    pub thresholds: Thresholds,
    pub time_grid_points: usize,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
}

fn ic_from_raw(raw: &RawIc) -> Result<InitialConditionSpec> {
    let allowed: &[&str] = match raw.kind.as_str() {
        "taylor-green" => &[],
        "abc" => &["a", "b", "c"],
        "shear" => &["modes"],
        "random-solenoidal" => &["k0", "seed"],
        other => {
            return Err(Error::Config(format!(
                "unknown ic.kind {other:?} (expected taylor-green, abc, shear or random-solenoidal)"
            )))
        }
    };
    let present = [
        ("a", raw.a.is_some()),
        ("b", raw.b.is_some()),
        ("c", raw.c.is_some()),
        ("modes", raw.modes.is_some()),
        ("k0", raw.k0.is_some()),
        ("seed", raw.seed.is_some()),
    ];
    for (key, set) in present {
        if set && !allowed.contains(&key) {
            return Err(Error::Config(format!(
                "ic.{key} does not apply to ic.kind = {:?}",
                raw.kind
            )));
        }
    }
    Ok(match raw.kind.as_str() {
        "taylor-green" => InitialConditionSpec::TaylorGreen,
        "abc" => InitialConditionSpec::Abc {
            a: raw.a.unwrap_or(1.0),
            b: raw.b.unwrap_or(1.0),
            c: raw.c.unwrap_or(1.0),
        },
        "shear" => InitialConditionSpec::Shear {
            modes: raw.modes.unwrap_or(1),
        },
        _ => InitialConditionSpec::RandomSolenoidal {
            k0: raw.k0.unwrap_or(DEFAULT_K0),
            seed: raw.seed.unwrap_or(0),
        },
    })
}

fn step_from_raw(t: &RawTime) -> Result<StepControl> {
    match (t.adaptive, t.dt) {
        (false, Some(dt)) => {
            if t.cfl.is_some() || t.dt_max.is_some() {
                return Err(Error::Config(
                    "time.cfl and time.dt_max require time.adaptive = true".into(),
                ));
            }
            Ok(StepControl::Fixed { dt })
        }
        (false, None) => Err(Error::Config(
            "time.dt is required unless time.adaptive = true".into(),
        )),
        (true, Some(_)) => Err(Error::Config(
            "time.dt conflicts with time.adaptive = true".into(),
        )),
        (true, None) => match (t.cfl, t.dt_max) {
            (Some(cfl), Some(dt_max)) => Ok(StepControl::Adaptive { cfl, dt_max }),
            _ => Err(Error::Config(
                "adaptive stepping needs both time.cfl and time.dt_max".into(),
            )),
        },
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let defaults = Thresholds::default();
        let cfg = Config {
            n: raw.grid.n,
            ic: ic_from_raw(&raw.ic)?,
            alphas: raw.voigt.alphas,
            integrator: IntegratorConfig {
                step: step_from_raw(&raw.time)?,
                t_final: raw.time.t_final,
                sample_stride: raw.time.sample_stride.unwrap_or(1),
                drift_abort_tol: raw.run.drift_abort_tol.unwrap_or(DEFAULT_DRIFT_ABORT_TOL),
            },
            thresholds: Thresholds {
                beta_threshold: raw.fit.beta_threshold.unwrap_or(defaults.beta_threshold),
                slack: raw.fit.slack.unwrap_or(defaults.slack),
                r2_threshold: raw.fit.r2_threshold.unwrap_or(defaults.r2_threshold),
            },
            time_grid_points: raw.fit.time_grid_points.unwrap_or(DEFAULT_TIME_GRID_POINTS),
            output_dir: raw.output.dir,
            workers: raw.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::from_toml_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 8 || !self.n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid.n must be even and at least 8, got {}",
                self.n
            )));
        }
        if self.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::Config("voigt.alphas must be finite and non-negative".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.integrator.sample_stride == 0 {
            return Err(Error::Config("time.sample_stride must be at least 1".into()));
        }
        self.integrator.validate()?;
        self.thresholds.validate()
    }

    /// Overrides the random seed; only meaningful for random initial data.
    pub fn with_seed(mut self, seed: u64) -> Result<Config> {
        match &mut self.ic {
            InitialConditionSpec::RandomSolenoidal { seed: s, .. } => {
                *s = seed;
                Ok(self)
            }
            other => Err(Error::Config(format!(
                "--seed only applies to random-solenoidal initial data, not {}",
                other.name()
            ))),
        }
    }

    pub fn sweep_config(&self, workers: usize) -> Result<SweepConfig> {
        let cfg = SweepConfig {
            n: self.n,
            ic: self.ic.clone(),
            alphas: self.alphas.clone(),
            integrator: self.integrator,
            thresholds: self.thresholds,
            time_grid_points: self.time_grid_points,
            workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
