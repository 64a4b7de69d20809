//! α-sweeps at a common final time from one shared initial condition.

use serde::{Deserialize, Serialize};

use crate::diagnostics::TimeSeriesRecord;
use crate::dynamics::VoigtParams;
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::Grid;
use crate::integrate::{integrate, IntegratorConfig, RunStatus, RunSummary};
use crate::io::ic::{generate_ic, InitialConditionSpec};
use crate::par;

use super::criteria::Thresholds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub ic: InitialConditionSpec,
    /// Strictly decreasing, positive.
    pub alphas: Vec<f64>,
    pub integrator: IntegratorConfig,
    pub thresholds: Thresholds,
    /// Number of uniformly spaced times in `[0, T]` for the old criterion.
    pub time_grid_points: usize,
    pub workers: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.len() < 3 {
            return Err(Error::Config(format!(
                "a sweep needs at least 3 alphas, got {}",
                self.alphas.len()
            )));
        }
        if self.alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::Config("sweep alphas must be positive and finite".into()));
        }
        if self.alphas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("sweep alphas must be strictly decreasing".into()));
        }
        if self.time_grid_points == 0 {
            return Err(Error::Config("fit.time_grid_points must be at least 1".into()));
        }
        self.integrator.validate()?;
        self.thresholds.validate()
    }

    /// `time_grid_points` uniform times from 0 to `T` (just `T` for one point).
    pub fn time_grid(&self) -> Vec<f64> {
        uniform_time_grid(self.integrator.t_final, self.time_grid_points)
    }
}

pub fn uniform_time_grid(t_final: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![t_final],
        k => (0..k)
            .map(|j| {
                if j + 1 == k {
                    t_final
                } else {
                    t_final * j as f64 / (k - 1) as f64
                }
            })
            .collect(),
    }
}

/// One run of a sweep with its sampled diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub summary: RunSummary,
    pub series: Vec<TimeSeriesRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub t_final: f64,
    /// α-descending.
    pub runs: Vec<RunRecord>,
}

impl SweepResult {
    pub fn valid_runs(&self) -> impl Iterator<Item = &RunRecord> {
        self.runs
            .iter()
            .filter(|r| r.summary.status == RunStatus::Valid)
    }
}

/// Runs every α from the same initial condition; runs execute concurrently
/// on `cfg.workers` threads.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = Grid::new(cfg.n)?;
    let u0 = generate_ic(&cfg.ic, &grid)?;
    run_sweep_from(&u0, &grid, &cfg.alphas, &cfg.integrator, cfg.workers)
}

/// Sweep from an explicit initial state.
pub fn run_sweep_from(
    u0: &SpectralVectorField,
    grid: &Grid,
    alphas: &[f64],
    integrator: &IntegratorConfig,
    workers: usize,
) -> Result<SweepResult> {
    let mut order: Vec<f64> = alphas.to_vec();
    order.sort_by(|a, b| b.total_cmp(a));
    let outcomes = par::with_workers(workers, || {
        par::map_slice(&order, |&alpha| -> Result<RunRecord> {
            let params = VoigtParams::new(alpha, grid)?;
            let mut series = Vec::new();
            let summary = integrate(u0.clone(), &params, grid, integrator, &mut series)?;
            log::info!(
                "alpha = {alpha}: M = {:.6e}, q(T) = {:.6e}, drift = {:.2e}, {}",
                summary.m,
                summary.q_final,
                summary.drift,
                summary.status
            );
            Ok(RunRecord { summary, series })
        })
    });
    let runs = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let result = SweepResult {
        t_final: integrator.t_final,
        runs,
    };
    if result.valid_runs().next().is_none() {
        return Err(Error::AllRunsInvalid);
    }
    Ok(result)
}
