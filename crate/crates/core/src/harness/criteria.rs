//! New (sup inside) and old (sup outside) criterion quantities, their α→0
//! fits, the evidence verdict, and the finite-α ordering check between them.

use serde::{Deserialize, Serialize};

use crate::diagnostics::TimeSeriesRecord;
use crate::error::{Error, Result};

use super::fit::{fit_power_law, FitResult};
use super::sweep::{RunRecord, SweepResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// PERSISTS needs `β ≤ beta_threshold`.
    pub beta_threshold: f64,
    /// VANISHES needs `β ≥ 1 − slack`.
    pub slack: f64,
    pub r2_threshold: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            beta_threshold: 0.1,
            slack: 0.1,
            r2_threshold: 0.98,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let ok = self.beta_threshold.is_finite()
            && self.slack.is_finite()
            && (0.0..=1.0).contains(&self.r2_threshold)
            && self.beta_threshold < 1.0 - self.slack;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "fit thresholds must satisfy beta_threshold < 1 - slack and r2_threshold in [0,1], got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Evidence {
    Vanishes,
    Persists,
    Inconclusive,
}

impl std::fmt::Display for Evidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Evidence::Vanishes => "VANISHES",
            Evidence::Persists => "PERSISTS",
            Evidence::Inconclusive => "INCONCLUSIVE",
        })
    }
}

pub fn evidence(fit: Option<&FitResult>, th: &Thresholds) -> Evidence {
    let Some(fit) = fit else {
        return Evidence::Inconclusive;
    };
    if fit.r2 < th.r2_threshold {
        Evidence::Inconclusive
    } else if fit.beta <= th.beta_threshold {
        Evidence::Persists
    } else if fit.beta >= 1.0 - th.slack {
        Evidence::Vanishes
    } else {
        Evidence::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub new_criterion_evidence: Evidence,
    pub old_criterion_evidence: Evidence,
    pub fit_new: Option<FitResult>,
    pub fit_old: Option<FitResult>,
    pub thresholds: Thresholds,
}

pub fn classify(
    fit_new: Option<&FitResult>,
    fit_old: Option<&FitResult>,
    th: &Thresholds,
) -> CriterionVerdict {
    CriterionVerdict {
        new_criterion_evidence: evidence(fit_new, th),
        old_criterion_evidence: evidence(fit_old, th),
        fit_new: fit_new.copied(),
        fit_old: fit_old.copied(),
        thresholds: *th,
    }
}

/// `(α, M(α,T))` over VALID runs, α-descending.
pub fn new_criterion_curve(s: &SweepResult) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = s.valid_runs().map(|r| (r.summary.alpha, r.summary.m)).collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSlice {
    pub t: f64,
    /// `(α, q(α, t))`, α-descending.
    pub points: Vec<(f64, f64)>,
    /// α of runs whose series does not reach `t`.
    pub excluded: Vec<f64>,
}

/// `q` at time `t` by linear interpolation between the bracketing samples,
/// or `None` when `t` lies outside the sampled interval.
pub fn interpolate_q(series: &[TimeSeriesRecord], t: f64) -> Option<f64> {
    let first = series.first()?;
    let last = series.last()?;
    let tol = 1e-12 * last.t.abs().max(1.0);
    if t < first.t - tol || t > last.t + tol {
        return None;
    }
    let hi = series.partition_point(|r| r.t < t);
    if hi == 0 {
        return Some(first.q);
    }
    if hi == series.len() {
        return Some(last.q);
    }
    let (a, b) = (&series[hi - 1], &series[hi]);
    if b.t == t {
        return Some(b.q);
    }
    let theta = (t - a.t) / (b.t - a.t);
    let v = a.q + (b.q - a.q) * theta;
    Some(v.clamp(a.q.min(b.q), a.q.max(b.q)))
}

/// Per-time curves of `q` over α from VALID runs.
pub fn old_criterion_curve(s: &SweepResult, time_grid: &[f64]) -> Vec<TimeSlice> {
    let valid: Vec<&RunRecord> = s.valid_runs().collect();
    time_grid
        .iter()
        .map(|&t| {
            let mut points = Vec::new();
            let mut excluded = Vec::new();
            for r in &valid {
                match interpolate_q(&r.series, t) {
                    Some(q) => points.push((r.summary.alpha, q)),
                    None => {
                        log::warn!(
                            "alpha = {}: series ends at t = {} and does not cover t = {t}; excluded",
                            r.summary.alpha,
                            r.series.last().map_or(0.0, |x| x.t)
                        );
                        excluded.push(r.summary.alpha);
                    }
                }
            }
            points.sort_by(|a, b| b.0.total_cmp(&a.0));
            TimeSlice { t, points, excluded }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceFit {
    pub t: f64,
    pub fit: Option<FitResult>,
}

fn try_fit(points: &[(f64, f64)]) -> Option<FitResult> {
    if points.len() < 3 {
        return None;
    }
    fit_power_law(points).ok()
}

/// Per-time fits plus the slice with the largest fitted limit (the sup over
/// time of the per-time limits).
pub fn old_criterion_fits(slices: &[TimeSlice]) -> (Vec<SliceFit>, Option<SliceFit>) {
    let fits: Vec<SliceFit> = slices
        .iter()
        .map(|s| SliceFit {
            t: s.t,
            fit: try_fit(&s.points),
        })
        .collect();
    let best = fits
        .iter()
        .filter(|f| f.fit.is_some())
        .max_by(|a, b| {
            let la = a.fit.as_ref().map_or(0.0, FitResult::limit_proxy);
            let lb = b.fit.as_ref().map_or(0.0, FitResult::limit_proxy);
            la.total_cmp(&lb)
        })
        .cloned();
    (fits, best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    /// Series samples checked against their run's running max.
    pub checked_samples: usize,
    /// `(run, t_j)` pairs checked on the shared time grid.
    pub checked_grid_points: usize,
    pub violations: usize,
    pub new_limit_proxy: Option<f64>,
    pub old_limit_proxy: Option<f64>,
    /// Whether every per-time fitted limit is at most the new-criterion one.
    pub fitted_ordering_holds: Option<bool>,
}

/// Checks `M(α,T) ≥ q(α,t)` for every run, every sample and every grid time.
pub fn compare_criteria(s: &SweepResult, time_grid: &[f64]) -> Result<OrderingReport> {
    let mut checked_samples = 0;
    let mut checked_grid_points = 0;
    let mut violations: Vec<(f64, f64, f64, f64)> = Vec::new();
    for r in &s.runs {
        let m = r.summary.m;
        for rec in &r.series {
            checked_samples += 1;
            if !(m >= rec.q) {
                violations.push((r.summary.alpha, rec.t, m, rec.q));
            }
        }
        for &t in time_grid {
            if let Some(q) = interpolate_q(&r.series, t) {
                checked_grid_points += 1;
                if !(m >= q) {
                    violations.push((r.summary.alpha, t, m, q));
                }
            }
        }
    }
    if let Some(&(alpha, t, m, q)) = violations.first() {
        return Err(Error::OrderingViolation {
            count: violations.len(),
            alpha,
            t,
            m,
            q,
        });
    }

    let fit_new = try_fit(&new_criterion_curve(s));
    let (slice_fits, _) = old_criterion_fits(&old_criterion_curve(s, time_grid));
    let new_limit = fit_new.as_ref().map(FitResult::limit_proxy);
    let old_limits: Vec<f64> = slice_fits
        .iter()
        .filter_map(|f| f.fit.as_ref().map(FitResult::limit_proxy))
        .collect();
    let old_limit = old_limits.iter().copied().reduce(f64::max);
    let fitted_ordering_holds = new_limit.map(|nl| old_limits.iter().all(|&ol| ol <= nl));
    Ok(OrderingReport {
        checked_samples,
        checked_grid_points,
        violations: 0,
        new_limit_proxy: new_limit,
        old_limit_proxy: old_limit,
        fitted_ordering_holds,
    })
}

/// Everything derived from a completed sweep's artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAnalysis {
    pub t_final: f64,
    pub time_grid: Vec<f64>,
    pub runs_total: usize,
    pub runs_valid: usize,
    pub new_curve: Vec<(f64, f64)>,
    pub old_slices: Vec<TimeSlice>,
    pub old_fits: Vec<SliceFit>,
    pub old_aggregate: Option<SliceFit>,
    pub verdict: CriterionVerdict,
    pub ordering: OrderingReport,
    /// Runs breaking `M(α,T)² ≤ E_α(0) + 1e−10`.
    pub ceiling_violations: Vec<f64>,
}

pub const CEILING_SLACK: f64 = 1e-10;

/// Pure function of the runs: curves, fits, verdict and consistency checks.
pub fn analyze_sweep(s: &SweepResult, time_grid: &[f64], th: &Thresholds) -> Result<SweepAnalysis> {
    let ordering = compare_criteria(s, time_grid)?;
    let new_curve = new_criterion_curve(s);
    let fit_new = try_fit(&new_curve);
    let old_slices = old_criterion_curve(s, time_grid);
    let (old_fits, old_aggregate) = old_criterion_fits(&old_slices);
    let verdict = classify(
        fit_new.as_ref(),
        old_aggregate.as_ref().and_then(|a| a.fit.as_ref()),
        th,
    );
    let ceiling_violations = s
        .valid_runs()
        .filter(|r| r.summary.m * r.summary.m > r.summary.alpha_energy0 + CEILING_SLACK)
        .map(|r| r.summary.alpha)
        .collect();
    Ok(SweepAnalysis {
        t_final: s.t_final,
        time_grid: time_grid.to_vec(),
        runs_total: s.runs.len(),
        runs_valid: s.valid_runs().count(),
        new_curve,
        old_slices,
        old_fits,
        old_aggregate,
        verdict,
        ordering,
        ceiling_violations,
    })
}
