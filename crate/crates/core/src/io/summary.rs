//! The sweep-level summary document and its reconstruction for `analyze`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::sweep::uniform_time_grid;
use crate::harness::{analyze_sweep, RunRecord, SweepAnalysis, SweepConfig, SweepResult, Thresholds};
use crate::integrate::{IntegratorConfig, RunSummary};
use crate::io::files::{read_json, read_series};
use crate::io::ic::InitialConditionSpec;

pub const SWEEP_SUMMARY: &str = "sweep_summary.json";
pub const ANALYSIS: &str = "analysis.json";
pub const SERIES: &str = "series.csv";
pub const RUN_SUMMARY: &str = "summary.json";

/// Everything that determines the sweep's numbers. The worker count is left
/// out: it cannot change any of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSetup {
    pub n: usize,
    pub ic: InitialConditionSpec,
    pub alphas: Vec<f64>,
    pub integrator: IntegratorConfig,
    pub thresholds: Thresholds,
    pub time_grid_points: usize,
}

impl From<&SweepConfig> for SweepSetup {
    fn from(c: &SweepConfig) -> Self {
        SweepSetup {
            n: c.n,
            ic: c.ic.clone(),
            alphas: c.alphas.clone(),
            integrator: c.integrator,
            thresholds: c.thresholds,
            time_grid_points: c.time_grid_points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub setup: SweepSetup,
    /// α-descending; `series` paths are relative to the sweep directory.
    pub runs: Vec<RunSummary>,
    pub analysis: SweepAnalysis,
}

/// Directory name of the `i`-th run (α-descending).
pub fn run_dir_name(i: usize) -> String {
    format!("run_{i:02}")
}

/// Reloads a sweep from its directory: summary plus every run's series.
pub fn load_sweep(dir: &Path) -> Result<(SweepSummary, SweepResult)> {
    let summary: SweepSummary = read_json(&dir.join(SWEEP_SUMMARY))?;
    let mut runs = Vec::with_capacity(summary.runs.len());
    for run in &summary.runs {
        let rel = run.series.as_deref().ok_or_else(|| Error::Artifact {
            path: dir.join(SWEEP_SUMMARY),
            reason: format!("run alpha = {} has no series path", run.alpha),
        })?;
        let series = read_series(&dir.join(rel))?;
        runs.push(RunRecord {
            summary: run.clone(),
            series,
        });
    }
    let result = SweepResult {
        t_final: summary.setup.integrator.t_final,
        runs,
    };
    Ok((summary, result))
}

/// Recomputes the analysis of a stored sweep from its artifacts alone.
pub fn reanalyze(dir: &Path) -> Result<SweepAnalysis> {
    let (summary, result) = load_sweep(dir)?;
    let grid = uniform_time_grid(summary.setup.integrator.t_final, summary.setup.time_grid_points);
    analyze_sweep(&result, &grid, &summary.setup.thresholds)
}
