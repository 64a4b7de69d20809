//! Built-in property suites behind `euler-voigt verify`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagnostics::identity_residual;
use crate::dynamics::VoigtParams;
use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::Grid;
use crate::harness::convergence_study;
use crate::integrate::{integrate_with_state, IntegratorConfig, NullSink, RunStatus};
use crate::io::ic::{generate_ic, InitialConditionSpec};
use crate::spectral::{
    forward_transform, inverse_transform, l2_norm, l2_norm_sq, leray_project, max_divergence,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Spectral,
    Conservation,
    Shear,
    Convergence,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["spectral", "conservation", "shear", "convergence", "all"];

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Spectral, Suite::Conservation, Suite::Shear, Suite::Convergence],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "spectral" => Suite::Spectral,
            "conservation" => Suite::Conservation,
            "shear" => Suite::Shear,
            "convergence" => Suite::Convergence,
            "all" => Suite::All,
            other => {
                return Err(Error::Config(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

/// One measured quantity against its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(suite: Suite, name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check {
            suite: suite.to_string(),
            name: name.into(),
            value,
            bound,
            passed: value <= bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<13} {:<52} {:>11.3e} <= {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.value,
            self.bound
        )
    }
}

pub fn run_suite(suite: Suite, workers: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Spectral => spectral_suite(&mut out)?,
            Suite::Conservation => conservation_suite(&mut out)?,
            Suite::Shear => shear_suite(&mut out)?,
            Suite::Convergence => convergence_suite(&mut out, workers)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(out)
}

fn spectral_suite(out: &mut Vec<Check>) -> Result<()> {
    let s = Suite::Spectral;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in [8, 16, 32] {
        let g = Grid::new(n)?;
        let data: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = RealField::from_vec(&g, data)?;
        let fh = forward_transform(&f, &g)?;
        let back = inverse_transform(&fh, &g)?;
        let err = f
            .as_slice()
            .iter()
            .zip(back.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out.push(Check::at_most(s, format!("n={n} transform round trip, max error"), err, 1e-13));
        let mean_sq = f.as_slice().iter().map(|v| v * v).sum::<f64>() / g.len() as f64;
        let parseval = (l2_norm_sq(&fh) - mean_sq).abs() / mean_sq;
        out.push(Check::at_most(s, format!("n={n} Parseval, relative defect"), parseval, 1e-13));

        let mut worst_identity = 0.0f64;
        let mut worst_div = 0.0f64;
        let mut worst_idem = 0.0f64;
        for seed in 0..10u64 {
            let u = generate_ic(&InitialConditionSpec::RandomSolenoidal { k0: 2.0, seed }, &g)?;
            worst_identity = worst_identity.max(identity_residual(&u, &g));
            worst_div = worst_div.max(max_divergence(&u, &g));
            let twice = leray_project(&u, &g);
            worst_idem = worst_idem.max(twice.add_scaled(-1.0, &u).max_abs());
        }
        out.push(Check::at_most(s, format!("n={n} ‖∇u‖ = ‖ω‖ residual, 10 fields"), worst_identity, 1e-12));
        out.push(Check::at_most(s, format!("n={n} divergence of projected fields"), worst_div, 1e-12));
        out.push(Check::at_most(s, format!("n={n} projection idempotence"), worst_idem, 1e-14));
    }
    let g = Grid::new(16)?;
    let tg = generate_ic(&InitialConditionSpec::TaylorGreen, &g)?;
    out.push(Check::at_most(s, "Taylor-Green divergence", max_divergence(&tg, &g), 1e-13));
    Ok(())
}

fn conservation_suite(out: &mut Vec<Check>) -> Result<()> {
    let s = Suite::Conservation;
    let g = Grid::new(32)?;
    let u0 = generate_ic(&InitialConditionSpec::TaylorGreen, &g)?;
    let params = VoigtParams::new(0.1, &g)?;
    let mut cfg = IntegratorConfig::fixed(1e-3, 0.1);
    cfg.drift_abort_tol = 1e-6;
    let (summary, _) = integrate_with_state(u0, &params, &g, &cfg, NullSink)?;
    out.push(Check::at_most(
        s,
        "n=32 Taylor-Green α=0.1, T=0.1: α-energy drift",
        summary.drift,
        1e-8,
    ));
    out.push(Check::at_most(
        s,
        "  run status is VALID (0 = yes)",
        (summary.status != RunStatus::Valid) as u8 as f64,
        0.0,
    ));
    Ok(())
}

fn shear_suite(out: &mut Vec<Check>) -> Result<()> {
    let s = Suite::Shear;
    let g = Grid::new(16)?;
    let u0 = generate_ic(&InitialConditionSpec::Shear { modes: 1 }, &g)?;
    let grad0 = std::f64::consts::TAU / std::f64::consts::SQRT_2;
    for alpha in [0.0, 0.1] {
        let params = VoigtParams::new(alpha, &g)?;
        let cfg = IntegratorConfig::fixed(0.01, 1.0);
        let (summary, state) = integrate_with_state(u0.clone(), &params, &g, &cfg, NullSink)?;
        let change = l2_norm(&state.u.add_scaled(-1.0, &u0));
        out.push(Check::at_most(s, format!("α={alpha} ‖u(1) − u₀‖"), change, 1e-12));
        let expected = alpha * grad0;
        let m_err = if expected > 0.0 {
            (summary.m - expected).abs() / expected
        } else {
            summary.m
        };
        out.push(Check::at_most(s, format!("α={alpha} M(α,1) vs α·2π/√2, relative"), m_err, 1e-12));
    }
    Ok(())
}

fn convergence_suite(out: &mut Vec<Check>, workers: usize) -> Result<()> {
    let s = Suite::Convergence;
    let g = Grid::new(32)?;
    let u0 = generate_ic(&InitialConditionSpec::TaylorGreen, &g)?;
    let alphas = [0.1, 0.05, 0.025];
    let table = convergence_study(&u0, &g, 0.2, &alphas, 2e-3, workers)?;
    out.push(Check::at_most(s, "Euler reference α-energy drift", table.reference_drift, 1e-8));
    out.push(Check::at_most(
        s,
        "Euler reference spectrum tail fraction",
        table.reference_tail_fraction,
        1e-6,
    ));
    // the theory bounds e(α)/α but says nothing about how fast the
    // asymptotic regime is reached, so only monotone decay is gated here
    for w in table.rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        out.push(Check::at_most(
            s,
            format!("e({}) / e({})", b.alpha, a.alpha),
            b.error / a.error,
            1.0,
        ));
    }
    if let Some(last) = table.rows.last() {
        out.push(Check::at_most(
            s,
            format!("relative error at α = {}", last.alpha),
            last.relative_error,
            table.rows[0].relative_error,
        ));
    }
    for r in &table.rows {
        log::info!(
            "alpha = {}: error {:.4e}, error/alpha {:.4e}, ratio {}",
            r.alpha,
            r.error,
            r.error_over_alpha,
            r.ratio.map_or("-".to_string(), |x| format!("{x:.3}"))
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn spectral_and_shear_suites_pass() {
        let checks = run_suite(Suite::Spectral, 1).unwrap();
        let checks = checks.into_iter().chain(run_suite(Suite::Shear, 1).unwrap());
        for c in checks {
            assert!(c.passed, "{c}");
        }
    }
}
