//! Initial conditions on the unit torus (classical fields scaled by 2π).

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{RealVectorField, SpectralVectorField};
use crate::grid::Grid;
use crate::spectral::{self, Dealias};

const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialConditionSpec {
    TaylorGreen,
    Abc { a: f64, b: f64, c: f64 },
    /// `u = (φ(x₃), 0, 0)` with `φ(z) = Σ_{j=1..modes} sin(2πjz)/j²`.
    Shear { modes: usize },
    /// Gaussian modes with shell spectrum `∝ κ⁴ exp(−2κ²/k₀²)`, unit energy.
    RandomSolenoidal { k0: f64, seed: u64 },
}

impl InitialConditionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            InitialConditionSpec::TaylorGreen => "taylor-green",
            InitialConditionSpec::Abc { .. } => "abc",
            InitialConditionSpec::Shear { .. } => "shear",
            InitialConditionSpec::RandomSolenoidal { .. } => "random-solenoidal",
        }
    }
}

/// Builds the spectral initial velocity: mean-free, projected, dealiased.
pub fn generate_ic(spec: &InitialConditionSpec, grid: &Grid) -> Result<SpectralVectorField> {
    let cutoff = grid.dealias_cutoff();
    let raw = match *spec {
        InitialConditionSpec::TaylorGreen => physical(grid, |x, y, z| {
            [
                (TAU * x).sin() * (TAU * y).cos() * (TAU * z).cos(),
                -(TAU * x).cos() * (TAU * y).sin() * (TAU * z).cos(),
                0.0,
            ]
        })?,
        InitialConditionSpec::Abc { a, b, c } => {
            if ![a, b, c].iter().all(|v| v.is_finite()) {
                return Err(Error::InitialCondition("ABC amplitudes must be finite".into()));
            }
            physical(grid, move |x, y, z| {
                [
                    a * (TAU * z).sin() + c * (TAU * y).cos(),
                    b * (TAU * x).sin() + a * (TAU * z).cos(),
                    c * (TAU * y).sin() + b * (TAU * x).cos(),
                ]
            })?
        }
        InitialConditionSpec::Shear { modes } => {
            if modes == 0 || modes > cutoff {
                return Err(Error::InitialCondition(format!(
                    "shear mode count {modes} must lie in 1..={cutoff} (band limit n/3)"
                )));
            }
            physical(grid, move |_, _, z| {
                let phi = (1..=modes)
                    .map(|j| (TAU * j as f64 * z).sin() / (j * j) as f64)
                    .sum();
                [phi, 0.0, 0.0]
            })?
        }
        InitialConditionSpec::RandomSolenoidal { k0, seed } => {
            if !(k0 > 0.0 && k0 <= grid.n() as f64 / 3.0) {
                return Err(Error::InitialCondition(format!(
                    "peak wavenumber k0 = {k0} must lie in (0, n/3 = {:.3}]",
                    grid.n() as f64 / 3.0
                )));
            }
            random_solenoidal(grid, k0, seed)
        }
    };
    let mut u = spectral::leray_project(&raw, grid).dealias(grid);
    if let InitialConditionSpec::RandomSolenoidal { .. } = spec {
        let e = spectral::l2_norm_sq(&u);
        if e > 0.0 {
            u.scale(1.0 / e.sqrt());
        }
    }
    Ok(u)
}

fn physical<F>(grid: &Grid, f: F) -> Result<SpectralVectorField>
where
    F: Fn(f64, f64, f64) -> [f64; 3] + Sync + Send,
{
    spectral::forward_vector(&RealVectorField::from_fn(grid, f), grid)
}

fn random_solenoidal(grid: &Grid, k0: f64, seed: u64) -> SpectralVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SpectralVectorField::zeros(grid);
    // sequential draw in index order keeps the field a pure function of the seed
    for i in 0..grid.len() {
        let kappa = grid.mode_magnitude(i);
        let draws: [f64; 6] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        if kappa == 0.0 || !grid.is_retained(i) {
            continue;
        }
        // shell energy κ⁴e^{−2κ²/k₀²} spread over ~4πκ² modes
        let amp = (kappa * kappa * (-2.0 * kappa * kappa / (k0 * k0)).exp()).sqrt();
        for d in 0..3 {
            u.components[d].as_mut_slice()[i] =
                Complex64::new(draws[2 * d], draws[2 * d + 1]) * amp;
        }
    }
    u.symmetrize(grid);
    u
}
