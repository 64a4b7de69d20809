//! Time stepping: classical RK4 with fixed or CFL-limited steps, a running
//! maximum of `q = α‖∇u‖` over every accepted step, and an α-energy drift
//! gate that flags under-resolved runs.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, TimeSeriesRecord};
use crate::dynamics::{voigt_rhs, VoigtParams};
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::Grid;
use crate::spectral::{self, inverse_vector};

pub const DEFAULT_DRIFT_ABORT_TOL: f64 = 1e-6;

/// How the step size is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum StepControl {
    Fixed { dt: f64 },
    Adaptive { cfl: f64, dt_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub step: StepControl,
    pub t_final: f64,
    pub sample_stride: u64,
    pub drift_abort_tol: f64,
}

impl IntegratorConfig {
    pub fn fixed(dt: f64, t_final: f64) -> Self {
        IntegratorConfig {
            step: StepControl::Fixed { dt },
            t_final,
            sample_stride: 1,
            drift_abort_tol: DEFAULT_DRIFT_ABORT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        match self.step {
            StepControl::Fixed { dt } if !(dt > 0.0 && dt.is_finite()) => {
                return bad(format!("time.dt must be positive, got {dt}"))
            }
            StepControl::Adaptive { cfl, dt_max } => {
                if !(cfl > 0.0 && cfl <= 1.0) {
                    return bad(format!("time.cfl must lie in (0, 1], got {cfl}"));
                }
                if !(dt_max > 0.0 && dt_max.is_finite()) {
                    return bad(format!("time.dt_max must be positive, got {dt_max}"));
                }
            }
            _ => {}
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("time.t_final must be positive, got {}", self.t_final));
        }
        if self.sample_stride == 0 {
            return bad("time.sample_stride must be at least 1".into());
        }
        if !(self.drift_abort_tol > 0.0) {
            return bad(format!(
                "run.drift_abort_tol must be positive, got {}",
                self.drift_abort_tol
            ));
        }
        Ok(())
    }
}

/// Largest `q` seen so far and when.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningMax {
    pub q: f64,
    pub t: f64,
}

impl RunningMax {
    pub fn observe(&mut self, q: f64, t: f64) {
        if q > self.q {
            self.q = q;
            self.t = t;
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunState {
    pub u: SpectralVectorField,
    pub t: f64,
    pub step_count: u64,
    pub running_max: RunningMax,
    /// `E_α(0)`, the conserved α-energy of the initial state.
    pub alpha_energy0: f64,
}

impl RunState {
    pub fn new(u: SpectralVectorField, params: &VoigtParams, grid: &Grid) -> Self {
        let q0 = diagnostics::q_value(&u, params, grid);
        let alpha_energy0 = diagnostics::alpha_energy(&u, params);
        RunState {
            u,
            t: 0.0,
            step_count: 0,
            running_max: RunningMax { q: q0, t: 0.0 },
            alpha_energy0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RunStatus {
    Valid,
    Invalid,
    Diverged,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunStatus::Valid => "VALID",
            RunStatus::Invalid => "INVALID",
            RunStatus::Diverged => "DIVERGED",
        })
    }
}

/// Outcome of one `(α, T)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub alpha: f64,
    pub n: usize,
    pub t_final: f64,
    /// `M(α,T) = sup_t q(α,t)` over accepted steps.
    #[serde(rename = "M")]
    pub m: f64,
    pub t_argmax: f64,
    pub q_final: f64,
    /// `max_t |E_α(t) − E_α(0)| / E_α(0)`.
    pub drift: f64,
    pub alpha_energy0: f64,
    /// Time actually reached (`t_final` unless aborted).
    pub t_reached: f64,
    pub steps: u64,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
}

/// Receives sampled diagnostics synchronously from the integration loop.
pub trait DiagnosticsSink {
    fn record(&mut self, rec: &TimeSeriesRecord) -> Result<()>;
}

impl DiagnosticsSink for Vec<TimeSeriesRecord> {
    fn record(&mut self, rec: &TimeSeriesRecord) -> Result<()> {
        self.push(*rec);
        Ok(())
    }
}

/// Discards every record.
pub struct NullSink;

impl DiagnosticsSink for NullSink {
    fn record(&mut self, _: &TimeSeriesRecord) -> Result<()> {
        Ok(())
    }
}

impl<S: DiagnosticsSink + ?Sized> DiagnosticsSink for &mut S {
    fn record(&mut self, rec: &TimeSeriesRecord) -> Result<()> {
        (**self).record(rec)
    }
}

/// One classical RK4 step, followed by re-projection onto solenoidal,
/// mean-free fields.
pub fn rk4_step(state: &RunState, dt: f64, params: &VoigtParams, grid: &Grid) -> Result<RunState> {
    let wrap = |e: Error| Error::Diverged {
        step: state.step_count + 1,
        t: state.t,
        source: Box::new(e),
    };
    let u = &state.u;
    let k1 = voigt_rhs(u, params, grid).map_err(wrap)?;
    let k2 = voigt_rhs(&u.add_scaled(0.5 * dt, &k1), params, grid).map_err(wrap)?;
    let k3 = voigt_rhs(&u.add_scaled(0.5 * dt, &k2), params, grid).map_err(wrap)?;
    let k4 = voigt_rhs(&u.add_scaled(dt, &k3), params, grid).map_err(wrap)?;
    let next = u.mode_map(grid, |i, c| {
        let (a, b, cc, d) = (k1.at(i), k2.at(i), k3.at(i), k4.at(i));
        let mut out = c;
        for j in 0..3 {
            out[j] += (a[j] + (b[j] + cc[j]) * 2.0 + d[j]) * (dt / 6.0);
        }
        out
    });
    let next = spectral::leray_project(&next, grid);
    if !next.is_finite() {
        return Err(Error::Diverged {
            step: state.step_count + 1,
            t: state.t + dt,
            source: Box::new(Error::Config("non-finite state after RK4 update".into())),
        });
    }
    Ok(RunState {
        u: next,
        t: state.t + dt,
        step_count: state.step_count + 1,
        running_max: state.running_max,
        alpha_energy0: state.alpha_energy0,
    })
}

/// `cfl · Δx / max|u_i|`, capped at `dt_max`.
pub fn cfl_dt(u: &SpectralVectorField, grid: &Grid, cfl: f64, dt_max: f64) -> Result<f64> {
    let umax = inverse_vector(u, grid)?.max_abs();
    if umax == 0.0 {
        return Ok(dt_max);
    }
    Ok((cfl * grid.dx() / umax).min(dt_max))
}

/// Integrates to `t_final`, returning the summary.
pub fn integrate<S: DiagnosticsSink>(
    u0: SpectralVectorField,
    params: &VoigtParams,
    grid: &Grid,
    cfg: &IntegratorConfig,
    sink: S,
) -> Result<RunSummary> {
    integrate_with_state(u0, params, grid, cfg, sink).map(|(s, _)| s)
}

/// As [`integrate`], also handing back the final state.
pub fn integrate_with_state<S: DiagnosticsSink>(
    u0: SpectralVectorField,
    params: &VoigtParams,
    grid: &Grid,
    cfg: &IntegratorConfig,
    mut sink: S,
) -> Result<(RunSummary, RunState)> {
    cfg.validate()?;
    let mut state = RunState::new(u0, params, grid);
    let e0 = state.alpha_energy0;
    let rel_drift = |e: f64| {
        if e0 > 0.0 {
            (e - e0).abs() / e0
        } else {
            e.abs()
        }
    };
    let mut drift = 0.0f64;
    let mut q_last = state.running_max.q;
    let mut status = RunStatus::Valid;
    sink.record(&TimeSeriesRecord::measure(&state.u, params, grid, 0.0, 0.0))?;

    while state.t < cfg.t_final {
        let mut dt = match cfg.step {
            StepControl::Fixed { dt } => dt,
            StepControl::Adaptive { cfl, dt_max } => match cfl_dt(&state.u, grid, cfl, dt_max) {
                Ok(dt) => dt,
                Err(_) => {
                    status = RunStatus::Diverged;
                    break;
                }
            },
        };
        let remaining = cfg.t_final - state.t;
        let last = remaining <= dt * (1.0 + 1e-9);
        if last {
            dt = remaining;
        }
        let mut next = match rk4_step(&state, dt, params, grid) {
            Ok(s) => s,
            Err(Error::Diverged { step, t, source }) => {
                log::warn!("alpha = {}: diverged at step {step}, t = {t}: {source}", params.alpha());
                status = RunStatus::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        if last {
            next.t = cfg.t_final;
        }
        let rec = TimeSeriesRecord::measure(&next.u, params, grid, next.t, dt);
        next.running_max.observe(rec.q, next.t);
        q_last = rec.q;
        drift = drift.max(rel_drift(rec.alpha_energy));
        let breach = drift > cfg.drift_abort_tol;
        if last || breach || next.step_count % cfg.sample_stride == 0 {
            sink.record(&rec)?;
        }
        state = next;
        if breach {
            log::warn!(
                "alpha = {}: alpha-energy drift {drift:e} exceeds {:e} at t = {}",
                params.alpha(),
                cfg.drift_abort_tol,
                state.t
            );
            status = RunStatus::Invalid;
            break;
        }
    }

    let summary = RunSummary {
        alpha: params.alpha(),
        n: grid.n(),
        t_final: cfg.t_final,
        m: state.running_max.q,
        t_argmax: state.running_max.t,
        q_final: q_last,
        drift,
        alpha_energy0: e0,
        t_reached: state.t,
        steps: state.step_count,
        status,
        series: None,
    };
    Ok((summary, state))
}
