//! Log-log least squares `M(α) ≈ c·α^β`, the finite-α stand-in for the
//! `limsup_{α→0⁺}` in both blow-up criteria.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub c: f64,
    /// Fitted exponent; `+∞` when some `M(α)` is exactly zero (stored as
    /// `null` on disk).
    #[serde(serialize_with = "ser_beta", deserialize_with = "de_beta")]
    pub beta: f64,
    pub r2: f64,
    /// `[α_min, α_max]` of the points used.
    pub alpha_range: [f64; 2],
    pub points: usize,
}

impl FitResult {
    /// Fitted curve evaluated at the smallest α used.
    pub fn limit_proxy(&self) -> f64 {
        if self.beta.is_infinite() {
            return 0.0;
        }
        self.c * self.alpha_range[0].powf(self.beta)
    }
}

fn ser_beta<S: Serializer>(beta: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if beta.is_finite() {
        s.serialize_f64(*beta)
    } else {
        s.serialize_none()
    }
}

fn de_beta<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// Ordinary least squares on `(ln α, ln M)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(&(a, m)) = points
        .iter()
        .find(|(a, m)| !(a.is_finite() && *a > 0.0 && m.is_finite() && *m >= 0.0))
    {
        return Err(Error::DegenerateFit(format!(
            "point (alpha = {a}, M = {m}) is outside alpha > 0, M >= 0"
        )));
    }
    let amin = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let amax = points.iter().map(|p| p.0).fold(0.0, f64::max);
    if amin == amax {
        return Err(Error::DegenerateFit("all alpha values are equal".into()));
    }
    if points.iter().any(|p| p.1 == 0.0) {
        return Ok(FitResult {
            c: 0.0,
            beta: f64::INFINITY,
            r2: 1.0,
            alpha_range: [amin, amax],
            points: points.len(),
        });
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / k;
    let ybar = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let beta = sxy / sxx;
    let intercept = ybar - beta * xbar;
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - beta * x).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        c: intercept.exp(),
        beta,
        r2,
        alpha_range: [amin, amax],
        points: points.len(),
    })
}
