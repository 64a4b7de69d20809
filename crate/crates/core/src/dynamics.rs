//! Euler-Voigt right-hand side in Fourier space.
//!
//! The momentum equation `−α²∂_t∇²u + ∂_t u + (u·∇)u + ∇p = 0` with
//! `∇·u = 0` becomes, per mode, `(1 + α²|k|²) ∂_t û = −P N̂` where `N̂` is the
//! dealiased transform of `(u·∇)u` and `P` the Leray projector. Setting
//! `α = 0` gives the incompressible Euler equations.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField, SpectralVectorField};
use crate::grid::Grid;
use crate::par;
use crate::spectral::{self, Dealias};

/// Regularization length and the per-mode Helmholtz weights `1/(1+α²|k|²)`.
#[derive(Debug, Clone)]
pub struct VoigtParams {
    alpha: f64,
    weights: Vec<f64>,
}

impl VoigtParams {
    pub fn new(alpha: f64, grid: &Grid) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Config(format!(
                "alpha must be finite and non-negative, got {alpha}"
            )));
        }
        let a2 = alpha * alpha;
        let weights = par::collect_indexed(grid.len(), |i| 1.0 / (1.0 + a2 * grid.k2(i)));
        Ok(VoigtParams { alpha, weights })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Recovered pressure `p̂`; defined up to a constant, so `p̂(0) = 0`.
#[derive(Debug, Clone)]
pub struct PressureDiagnostic {
    pub pressure: SpectralField,
}

/// Dealiased spectral `(u·∇)u`, evaluated pseudospectrally.
pub fn nonlinear_term(u: &SpectralVectorField, grid: &Grid) -> Result<SpectralVectorField> {
    // spectra in order: u_0, u_1, u_2, then ∂_j u_i at 3 + 3i + j
    let mut spectra: Vec<SpectralField> = u.components.to_vec();
    for i in 0..3 {
        for j in 0..3 {
            spectra.push(spectral::partial(&u.components[i], j, grid));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..6).map(|p| (2 * p, 2 * p + 1)).collect();
    let mut physical: Vec<RealField> = Vec::with_capacity(12);
    for r in par::map_slice(&pairs, |&(a, b)| spectral::inverse_pair(&spectra[a], &spectra[b], grid)) {
        let (fa, fb) = r?;
        physical.push(fa);
        physical.push(fb);
    }

    let products: Vec<RealField> = par::map_slice(&[0usize, 1, 2], |&i| {
        let vel = |j: usize| physical[j].as_slice();
        let der = |j: usize| physical[3 + 3 * i + j].as_slice();
        let data = (0..grid.len())
            .map(|p| vel(0)[p] * der(0)[p] + vel(1)[p] * der(1)[p] + vel(2)[p] * der(2)[p])
            .collect();
        RealField::from_vec(grid, data).expect("grid-sized product")
    });
    for (d, f) in products.iter().enumerate() {
        if let Some((idx, value)) = f.first_non_finite() {
            let (ix, iy, iz) = grid.coords(idx);
            return Err(Error::NonFinite {
                context: format!("nonlinear term component {d}"),
                ix,
                iy,
                iz,
                value,
            });
        }
    }
    let (n0, n1) = spectral::forward_pair(&products[0], &products[1], grid)?;
    let n2 = spectral::forward_transform(&products[2], grid)?;
    Ok(SpectralVectorField::new([n0, n1, n2]).dealias(grid))
}

/// `∂_t û = −w(k) · P N̂(k)`.
pub fn voigt_rhs(
    u: &SpectralVectorField,
    params: &VoigtParams,
    grid: &Grid,
) -> Result<SpectralVectorField> {
    let n = nonlinear_term(u, grid)?;
    Ok(n.mode_map(grid, |i, v| {
        let w = -params.weight(i);
        let p = spectral::project_mode(grid.wavevector(i), v);
        [p[0] * w, p[1] * w, p[2] * w]
    }))
}

/// `p̂(k) = i k·N̂(k) / |k|²`, from `−∇²p = ∇·((u·∇)u)`.
pub fn pressure_field(u: &SpectralVectorField, grid: &Grid) -> Result<PressureDiagnostic> {
    let n = nonlinear_term(u, grid)?;
    Ok(PressureDiagnostic {
        pressure: pressure_from_nonlinear(&n, grid),
    })
}

pub(crate) fn pressure_from_nonlinear(n: &SpectralVectorField, grid: &Grid) -> SpectralField {
    let coeffs = par::collect_indexed(grid.len(), |i| {
        let k = grid.wavevector(i);
        let k2 = grid.k2(i);
        if k2 == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let v = n.at(i);
        Complex64::new(0.0, 1.0) * (v[0] * k[0] + v[1] * k[1] + v[2] * k[2]) / k2
    });
    SpectralField::from_vec(grid, coeffs).expect("grid-sized pressure")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealVectorField;
    use crate::spectral::{forward_vector, l2_norm, leray_project, max_divergence};
    use std::f64::consts::PI;

    const TAU: f64 = 2.0 * PI;

    fn taylor_green(g: &Grid) -> SpectralVectorField {
        let u = RealVectorField::from_fn(g, |x, y, z| {
            [
                (TAU * x).sin() * (TAU * y).cos() * (TAU * z).cos(),
                -(TAU * x).cos() * (TAU * y).sin() * (TAU * z).cos(),
                0.0,
            ]
        });
        leray_project(&forward_vector(&u, g).unwrap(), g)
    }

    fn shear(g: &Grid) -> SpectralVectorField {
        let u = RealVectorField::from_fn(g, |_, _, z| [(TAU * z).sin(), 0.0, 0.0]);
        forward_vector(&u, g).unwrap()
    }

    /// Direct evaluation of `(u·∇)u` from the analytic Taylor-Green field.
    fn taylor_green_advection(x: f64, y: f64, z: f64) -> [f64; 3] {
        let (sx, cx) = (TAU * x).sin_cos();
        let (sy, cy) = (TAU * y).sin_cos();
        let (sz, cz) = (TAU * z).sin_cos();
        let u = [sx * cy * cz, -cx * sy * cz, 0.0];
        let du = [
            [TAU * cx * cy * cz, -TAU * sx * sy * cz, -TAU * sx * cy * sz],
            [TAU * sx * sy * cz, -TAU * cx * cy * cz, TAU * cx * sy * sz],
            [0.0, 0.0, 0.0],
        ];
        let mut out = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i] += u[j] * du[i][j];
            }
        }
        out
    }

    #[test]
    fn weights_are_bounded_and_unit_at_zero() {
        let g = Grid::new(8).unwrap();
        let p = VoigtParams::new(0.3, &g).unwrap();
        assert_eq!(p.weight(0), 1.0);
        assert!(p.weights().iter().all(|&w| w > 0.0 && w <= 1.0));
        let e = VoigtParams::new(0.0, &g).unwrap();
        assert!(e.weights().iter().all(|&w| w == 1.0));
        assert!(VoigtParams::new(-1.0, &g).is_err());
    }

    #[test]
    fn shear_flow_is_steady() {
        let g = Grid::new(16).unwrap();
        let u = shear(&g);
        assert!(nonlinear_term(&u, &g).unwrap().max_abs() < 1e-12);
        let p = VoigtParams::new(0.1, &g).unwrap();
        assert!(voigt_rhs(&u, &p, &g).unwrap().max_abs() < 1e-12);
        let pr = pressure_field(&u, &g).unwrap();
        assert!(pr.pressure.max_abs() < 1e-12);
    }

    #[test]
    fn zero_field_gives_zero() {
        let g = Grid::new(8).unwrap();
        let u = SpectralVectorField::zeros(&g);
        assert_eq!(nonlinear_term(&u, &g).unwrap().max_abs(), 0.0);
        assert_eq!(pressure_field(&u, &g).unwrap().pressure.max_abs(), 0.0);
    }

    /// Dense convolution `N̂_i(k) = Σ_{p+q=k} Σ_j û_j(p) i q_j û_i(q)` with no FFT.
    fn convolution_oracle(u: &SpectralVectorField, g: &Grid) -> SpectralVectorField {
        let mut out = SpectralVectorField::zeros(g);
        let ii = Complex64::new(0.0, 1.0);
        for pi in 0..g.len() {
            let up = u.at(pi);
            let mp = g.mode(pi);
            for qi in 0..g.len() {
                let uq = u.at(qi);
                let mq = g.mode(qi);
                let k = [mp[0] + mq[0], mp[1] + mq[1], mp[2] + mq[2]];
                if k.iter().any(|&c| 3 * c.unsigned_abs() >= g.n() as u64) {
                    continue;
                }
                let q = g.wavevector(qi);
                let adv = ii * (up[0] * q[0] + up[1] * q[1] + up[2] * q[2]);
                let idx = g.index_of_mode(k);
                for d in 0..3 {
                    out.components[d].as_mut_slice()[idx] += adv * uq[d];
                }
            }
        }
        out
    }

    #[test]
    fn taylor_green_matches_direct_convolution() {
        let g = Grid::new(8).unwrap();
        let u = taylor_green(&g);
        let got = nonlinear_term(&u, &g).unwrap();
        let expect = convolution_oracle(&u, &g);
        let diff = got.add_scaled(-1.0, &expect);
        assert!(diff.max_abs() < 1e-10, "{}", diff.max_abs());
    }

    #[test]
    fn taylor_green_matches_analytic_advection() {
        let g = Grid::new(8).unwrap();
        let got = nonlinear_term(&taylor_green(&g), &g).unwrap();
        let direct = RealVectorField::from_fn(&g, taylor_green_advection);
        let expect = forward_vector(&direct, &g).unwrap().dealias(&g);
        assert!(got.add_scaled(-1.0, &expect).max_abs() < 1e-10);
    }

    #[test]
    fn rhs_is_solenoidal_and_euler_limit_is_projected_term() {
        let g = Grid::new(16).unwrap();
        let u = taylor_green(&g);
        let p = VoigtParams::new(0.1, &g).unwrap();
        let rhs = voigt_rhs(&u, &p, &g).unwrap();
        assert!(max_divergence(&rhs, &g) < 1e-12 * l2_norm(&rhs).max(1.0));

        let euler = voigt_rhs(&u, &VoigtParams::new(0.0, &g).unwrap(), &g).unwrap();
        let mut projected = leray_project(&nonlinear_term(&u, &g).unwrap(), &g);
        projected.scale(-1.0);
        assert_eq!(euler, projected);
    }

    #[test]
    fn large_alpha_suppresses_rhs() {
        let g = Grid::new(8).unwrap();
        let u = taylor_green(&g);
        let base = l2_norm(&voigt_rhs(&u, &VoigtParams::new(0.0, &g).unwrap(), &g).unwrap());
        let big = l2_norm(&voigt_rhs(&u, &VoigtParams::new(100.0, &g).unwrap(), &g).unwrap());
        assert!(big < 1e-3 * base);
    }

    #[test]
    fn pressure_gradient_balances_gradient_part() {
        let g = Grid::new(16).unwrap();
        let u = taylor_green(&g);
        let n = nonlinear_term(&u, &g).unwrap();
        let p = pressure_from_nonlinear(&n, &g);
        assert_eq!(p.as_slice()[0], Complex64::new(0.0, 0.0));
        let complement = n.add_scaled(-1.0, &leray_project(&n, &g));
        let grad_p = spectral::gradient(&p, &g);
        let resid = complement.add_scaled(1.0, &grad_p);
        assert!(l2_norm(&resid) <= 1e-12 * l2_norm(&n));
    }
}
