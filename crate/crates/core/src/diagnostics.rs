//! Norm-based observables of a velocity state.

use serde::{Deserialize, Serialize};

use crate::dynamics::VoigtParams;
use crate::field::SpectralVectorField;
use crate::grid::Grid;
use crate::spectral::{self, L2Norm};

/// Guard used when normalizing by a vanishing gradient norm.
pub const RESIDUAL_EPS: f64 = 1e-300;
/// Tail-fraction level below which a state counts as resolved.
pub const TAIL_HEALTH: f64 = 1e-6;

/// One diagnostics sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    /// `‖u‖²`
    pub energy: f64,
    /// `‖ω‖² = ‖∇u‖²`
    pub enstrophy: f64,
    /// `‖u‖² + α²‖∇u‖²`
    pub alpha_energy: f64,
    /// `α‖∇u‖`
    pub q: f64,
    pub dt: f64,
}

impl TimeSeriesRecord {
    pub fn measure(u: &SpectralVectorField, params: &VoigtParams, grid: &Grid, t: f64, dt: f64) -> Self {
        let energy = energy(u);
        let enstrophy = enstrophy(u, grid);
        TimeSeriesRecord {
            t,
            energy,
            enstrophy,
            alpha_energy: alpha_energy(u, params),
            q: params.alpha() * enstrophy.sqrt(),
            dt,
        }
    }
}

pub fn energy(u: &SpectralVectorField) -> f64 {
    spectral::l2_norm_sq(u)
}

/// `‖∇u‖²`, equal to `‖ω‖²` for solenoidal mean-free fields.
pub fn enstrophy(u: &SpectralVectorField, grid: &Grid) -> f64 {
    spectral::grad_l2_norm_sq(u, grid)
}

/// `Σ_k (1 + α²|k|²) |û(k)|²`.
pub fn alpha_energy(u: &SpectralVectorField, params: &VoigtParams) -> f64 {
    u.weighted_sq_sum(|i| 1.0 / params.weight(i))
}

/// `q = α ‖∇u‖_{L²}`.
pub fn q_value(u: &SpectralVectorField, params: &VoigtParams, grid: &Grid) -> f64 {
    params.alpha() * spectral::grad_l2_norm(u, grid)
}

/// `|‖∇u‖ − ‖∇×u‖| / max(‖∇u‖, ε)`; zero for solenoidal mean-free fields.
pub fn identity_residual(u: &SpectralVectorField, grid: &Grid) -> f64 {
    let grad = spectral::grad_l2_norm(u, grid);
    let curl = spectral::l2_norm(&spectral::curl(u, grid));
    (grad - curl).abs() / grad.max(RESIDUAL_EPS)
}

/// Shell energies `E(κ) = Σ_{κ−½ < |m| ≤ κ+½} |û|²`.
///
/// The array runs to the largest shell occupied on the grid, the cube corner
/// `|m| = n√3/2`, so that the shells always partition the energy.
pub fn energy_spectrum(u: &SpectralVectorField, grid: &Grid) -> Vec<f64> {
    let max_shell = ((grid.n() as f64) * 3f64.sqrt() / 2.0).round() as usize + 1;
    let mut shells = vec![0.0; max_shell + 1];
    for i in 0..grid.len() {
        let v = u.at(i);
        let e = v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
        shells[shell_of(grid.mode_magnitude(i))] += e;
    }
    shells
}

/// Shell index of `|m|`: `κ` with `κ − ½ < |m| ≤ κ + ½`.
pub fn shell_of(magnitude: f64) -> usize {
    (magnitude - 0.5).ceil().max(0.0) as usize
}

/// Fraction of energy in shells above the dealiasing radius `n/3`.
pub fn tail_fraction(spectrum: &[f64], grid: &Grid) -> f64 {
    let total: f64 = spectrum.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let start = grid.n() / 3 + 1;
    let tail: f64 = spectrum.iter().skip(start).sum();
    tail / total
}
