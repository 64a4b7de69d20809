//! Transforms and spectral calculus on the unit torus.
//!
//! Forward coefficients are `F(m) = n⁻³ Σ_x f(x) e^{−ik·x}`, so with unit
//! volume Parseval reads `‖f‖²_{L²} = Σ_m |F(m)|²` exactly.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{RealField, RealVectorField, SpectralField, SpectralVectorField};
use crate::grid::Grid;
use crate::par;
use crate::sum::pairwise_sum_by;

/// Tolerance on `|c(m) − conj(c(−m))|` relative to the largest coefficient.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Tolerance on the discarded imaginary part relative to `Σ(|Re c| + |Im c|)`.
pub const IMAG_TOL: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn forward_transform(f: &RealField, grid: &Grid) -> Result<SpectralField> {
    check_size(grid, f.as_slice().len())?;
    if let Some((idx, value)) = f.first_non_finite() {
        let (ix, iy, iz) = grid.coords(idx);
        return Err(Error::NonFinite {
            context: "forward transform input".into(),
            ix,
            iy,
            iz,
            value,
        });
    }
    let mut work: Vec<Complex64> = f.as_slice().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.fft().forward(&mut work);
    let scale = 1.0 / grid.len() as f64;
    for c in &mut work {
        *c *= scale;
    }
    let mut out = SpectralField::from_raw(grid.n(), work);
    out.symmetrize(grid);
    Ok(out)
}

pub fn inverse_transform(f: &SpectralField, grid: &Grid) -> Result<RealField> {
    check_size(grid, f.as_slice().len())?;
    check_symmetry(f, grid)?;
    let mut work = f.as_slice().to_vec();
    grid.fft().inverse(&mut work);
    let l1: f64 = f.as_slice().iter().map(|c| c.re.abs() + c.im.abs()).sum();
    let residue = work.iter().fold(0.0, |a: f64, c| a.max(c.im.abs()));
    if residue > IMAG_TOL * l1.max(f64::MIN_POSITIVE) {
        return Err(Error::ImaginaryResidue(residue));
    }
    RealField::from_vec(grid, work.into_iter().map(|c| c.re).collect())
}

fn check_symmetry(f: &SpectralField, grid: &Grid) -> Result<()> {
    let (defect, at) = f.hermitian_defect(grid);
    if defect > SYMMETRY_TOL * f.max_abs().max(f64::MIN_POSITIVE) {
        let m = grid.mode(at);
        return Err(Error::SymmetryViolation(m[0], m[1], m[2], defect));
    }
    Ok(())
}

/// Inverts two Hermitian spectra with one complex FFT: the real part of the
/// transform of `A + iB` is `a`, the imaginary part is `b`.
pub(crate) fn inverse_pair(
    a: &SpectralField,
    b: &SpectralField,
    grid: &Grid,
) -> Result<(RealField, RealField)> {
    check_size(grid, a.as_slice().len())?;
    check_size(grid, b.as_slice().len())?;
    check_symmetry(a, grid)?;
    check_symmetry(b, grid)?;
    let mut work: Vec<Complex64> = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x + I * y)
        .collect();
    grid.fft().inverse(&mut work);
    let re = work.iter().map(|c| c.re).collect();
    let im = work.iter().map(|c| c.im).collect();
    Ok((RealField::from_vec(grid, re)?, RealField::from_vec(grid, im)?))
}

/// Forward transform of two real fields with one complex FFT.
pub(crate) fn forward_pair(
    f: &RealField,
    g: &RealField,
    grid: &Grid,
) -> Result<(SpectralField, SpectralField)> {
    for (field, name) in [(f, "first"), (g, "second")] {
        check_size(grid, field.as_slice().len())?;
        if let Some((idx, value)) = field.first_non_finite() {
            let (ix, iy, iz) = grid.coords(idx);
            return Err(Error::NonFinite {
                context: format!("forward transform input ({name} of pair)"),
                ix,
                iy,
                iz,
                value,
            });
        }
    }
    let mut work: Vec<Complex64> = f
        .as_slice()
        .iter()
        .zip(g.as_slice())
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    grid.fft().forward(&mut work);
    let scale = 0.5 / grid.len() as f64;
    let mut fa = vec![Complex64::new(0.0, 0.0); work.len()];
    let mut fb = fa.clone();
    for i in 0..work.len() {
        let z = work[i];
        let zm = work[grid.mirror(i)].conj();
        fa[i] = (z + zm) * scale;
        fb[i] = (z - zm) * (-I * scale);
    }
    Ok((
        SpectralField::from_raw(grid.n(), fa),
        SpectralField::from_raw(grid.n(), fb),
    ))
}

pub fn forward_vector(u: &RealVectorField, grid: &Grid) -> Result<SpectralVectorField> {
    let parts = par::map_slice(&u.components, |c| forward_transform(c, grid));
    let [a, b, c] = collect3(parts)?;
    Ok(SpectralVectorField::new([a, b, c]))
}

pub fn inverse_vector(u: &SpectralVectorField, grid: &Grid) -> Result<RealVectorField> {
    let parts = par::map_slice(&u.components, |c| inverse_transform(c, grid));
    let [a, b, c] = collect3(parts)?;
    Ok(RealVectorField {
        components: [a, b, c],
    })
}

pub(crate) fn collect3<T>(parts: Vec<Result<T>>) -> Result<[T; 3]> {
    let mut it = parts.into_iter();
    let a = it.next().expect("three components")?;
    let b = it.next().expect("three components")?;
    let c = it.next().expect("three components")?;
    Ok([a, b, c])
}

fn check_size(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::SizeMismatch {
            expected: grid.len(),
            found: len,
        });
    }
    Ok(())
}

/// 2/3-rule truncation: zeroes every mode with `3·max_i |m_i| ≥ n`.
pub trait Dealias: Sized {
    fn dealias(&self, grid: &Grid) -> Self;
}

impl Dealias for SpectralField {
    fn dealias(&self, grid: &Grid) -> Self {
        self.mode_map(grid, |i, c| {
            if grid.is_retained(i) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

impl Dealias for SpectralVectorField {
    fn dealias(&self, grid: &Grid) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        self.mode_map(grid, |i, v| if grid.is_retained(i) { v } else { [zero; 3] })
    }
}

pub fn dealias<F: Dealias>(f: &F, grid: &Grid) -> F {
    f.dealias(grid)
}

/// `∂_d f` as the mode-wise product `i k_d F`.
pub fn partial(f: &SpectralField, dir: usize, grid: &Grid) -> SpectralField {
    f.mode_map(grid, |i, c| I * grid.wavevector(i)[dir] * c)
}

pub fn gradient(f: &SpectralField, grid: &Grid) -> SpectralVectorField {
    SpectralVectorField::from_modes(grid, |i| {
        let k = grid.wavevector(i);
        let c = I * f.as_slice()[i];
        [c * k[0], c * k[1], c * k[2]]
    })
}

pub fn divergence(v: &SpectralVectorField, grid: &Grid) -> SpectralField {
    let coeffs = par::collect_indexed(grid.len(), |i| {
        let k = grid.wavevector(i);
        let u = v.at(i);
        I * (u[0] * k[0] + u[1] * k[1] + u[2] * k[2])
    });
    SpectralField::from_raw(grid.n(), coeffs)
}

pub fn curl(v: &SpectralVectorField, grid: &Grid) -> SpectralVectorField {
    v.mode_map(grid, |i, u| {
        let k = grid.wavevector(i);
        [
            I * (u[2] * k[1] - u[1] * k[2]),
            I * (u[0] * k[2] - u[2] * k[0]),
            I * (u[1] * k[0] - u[0] * k[1]),
        ]
    })
}

/// Leray projection `V̂ − k(k·V̂)/|k|²`; modes with `|k| = 0` are set to zero,
/// which also removes the spatial mean.
pub fn leray_project(v: &SpectralVectorField, grid: &Grid) -> SpectralVectorField {
    v.mode_map(grid, |i, u| project_mode(grid.wavevector(i), u))
}

#[inline]
pub(crate) fn project_mode(k: [f64; 3], u: [Complex64; 3]) -> [Complex64; 3] {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return [Complex64::new(0.0, 0.0); 3];
    }
    let kdotu = (u[0] * k[0] + u[1] * k[1] + u[2] * k[2]) / k2;
    [
        u[0] - kdotu * k[0],
        u[1] - kdotu * k[1],
        u[2] - kdotu * k[2],
    ]
}

/// Largest `|k·û(k)|` over all modes.
pub fn max_divergence(v: &SpectralVectorField, grid: &Grid) -> f64 {
    (0..grid.len())
        .map(|i| {
            let k = grid.wavevector(i);
            let u = v.at(i);
            (u[0] * k[0] + u[1] * k[1] + u[2] * k[2]).norm()
        })
        .fold(0.0, f64::max)
}

/// Parseval norms over scalar or vector coefficient sets.
pub trait L2Norm {
    /// `Σ_m w(m) Σ_components |c|²` in fixed tree order.
    fn weighted_sq_sum<W: Fn(usize) -> f64 + Sync + Send>(&self, weight: W) -> f64;
}

impl L2Norm for SpectralField {
    fn weighted_sq_sum<W: Fn(usize) -> f64 + Sync + Send>(&self, weight: W) -> f64 {
        let c = self.as_slice();
        pairwise_sum_by(c.len(), |i| weight(i) * c[i].norm_sqr())
    }
}

impl L2Norm for SpectralVectorField {
    fn weighted_sq_sum<W: Fn(usize) -> f64 + Sync + Send>(&self, weight: W) -> f64 {
        let [a, b, c] = &self.components;
        let (a, b, c) = (a.as_slice(), b.as_slice(), c.as_slice());
        pairwise_sum_by(a.len(), |i| {
            weight(i) * (a[i].norm_sqr() + b[i].norm_sqr() + c[i].norm_sqr())
        })
    }
}

pub fn l2_norm_sq<F: L2Norm>(f: &F) -> f64 {
    f.weighted_sq_sum(|_| 1.0)
}

pub fn l2_norm<F: L2Norm>(f: &F) -> f64 {
    l2_norm_sq(f).sqrt()
}

/// `‖∇f‖²_{L²} = Σ_m |k|² |c|²`.
pub fn grad_l2_norm_sq<F: L2Norm>(f: &F, grid: &Grid) -> f64 {
    f.weighted_sq_sum(|i| grid.k2(i))
}

pub fn grad_l2_norm<F: L2Norm>(f: &F, grid: &Grid) -> f64 {
    grad_l2_norm_sq(f, grid).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    fn scalar_sample(g: &Grid) -> SpectralField {
        let f = RealField::from_fn(g, |x, y, z| {
            (2.0 * PI * x).sin() * (4.0 * PI * y).cos() + 0.3 * (2.0 * PI * (x + 2.0 * z)).cos() + 0.1
        });
        forward_transform(&f, g).unwrap()
    }

    #[test]
    fn constant_field_has_only_dc() {
        let g = grid(8);
        let f = RealField::from_fn(&g, |_, _, _| 2.5);
        let s = forward_transform(&f, &g).unwrap();
        for (i, c) in s.as_slice().iter().enumerate() {
            if i == 0 {
                assert!((c - Complex64::new(2.5, 0.0)).norm() < 1e-15);
            } else {
                assert!(c.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_sine_mode_coefficients() {
        let g = grid(16);
        let f = RealField::from_fn(&g, |x, _, _| (2.0 * PI * x).sin());
        let s = forward_transform(&f, &g).unwrap();
        let plus = s.coeff(&g, [1, 0, 0]);
        let minus = s.coeff(&g, [-1, 0, 0]);
        assert!((plus - Complex64::new(0.0, -0.5)).norm() < 1e-13);
        assert!((minus - Complex64::new(0.0, 0.5)).norm() < 1e-13);
        let others = s
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(i, _)| ![g.index_of_mode([1, 0, 0]), g.index_of_mode([-1, 0, 0])].contains(i))
            .fold(0.0, |a: f64, (_, c)| a.max(c.norm()));
        assert!(others < 1e-13);
    }

    #[test]
    fn inverse_of_single_mode_pair_is_sine_in_y() {
        let g = grid(16);
        let mut s = SpectralField::zeros(&g);
        s.set_coeff(&g, [0, 1, 0], Complex64::new(0.0, -0.5));
        s.set_coeff(&g, [0, -1, 0], Complex64::new(0.0, 0.5));
        let f = inverse_transform(&s, &g).unwrap();
        for (idx, v) in f.as_slice().iter().enumerate() {
            let (_, iy, _) = g.coords(idx);
            assert!((v - (2.0 * PI * g.coordinate(iy)).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_coefficients_invert_to_zero() {
        let g = grid(8);
        let f = inverse_transform(&SpectralField::zeros(&g), &g).unwrap();
        assert!(f.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn non_finite_input_is_located() {
        let g = grid(8);
        let mut f = RealField::zeros(&g);
        f.as_mut_slice()[g.index(1, 2, 3)] = f64::NAN;
        match forward_transform(&f, &g) {
            Err(Error::NonFinite { ix, iy, iz, .. }) => assert_eq!((ix, iy, iz), (1, 2, 3)),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_input_names_the_mode() {
        let g = grid(8);
        let mut s = SpectralField::zeros(&g);
        s.set_coeff(&g, [1, 2, 0], Complex64::new(1.0, 0.0));
        match inverse_transform(&s, &g) {
            Err(Error::SymmetryViolation(a, b, c, _)) => {
                assert!([a, b, c] == [1, 2, 0] || [a, b, c] == [-1, -2, 0]);
            }
            other => panic!("expected SymmetryViolation, got {other:?}"),
        }
    }

    #[test]
    fn paired_transforms_match_single() {
        let g = grid(8);
        let a = RealField::from_fn(&g, |x, y, z| (2.0 * PI * (x + y)).sin() + z);
        let b = RealField::from_fn(&g, |x, y, z| (4.0 * PI * z).cos() * x - y);
        let (fa, fb) = forward_pair(&a, &b, &g).unwrap();
        let sa = forward_transform(&a, &g).unwrap();
        let sb = forward_transform(&b, &g).unwrap();
        for i in 0..g.len() {
            assert!((fa.as_slice()[i] - sa.as_slice()[i]).norm() < 1e-14);
            assert!((fb.as_slice()[i] - sb.as_slice()[i]).norm() < 1e-14);
        }
        let (ra, rb) = inverse_pair(&sa, &sb, &g).unwrap();
        for i in 0..g.len() {
            assert!((ra.as_slice()[i] - a.as_slice()[i]).abs() < 1e-13);
            assert!((rb.as_slice()[i] - b.as_slice()[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn dealias_examples() {
        let g = grid(16);
        let mut s = SpectralField::zeros(&g);
        s.set_coeff(&g, [6, 0, 0], Complex64::new(1.0, 0.0));
        s.set_coeff(&g, [-6, 0, 0], Complex64::new(1.0, 0.0));
        s.set_coeff(&g, [5, 0, 0], Complex64::new(2.0, 0.0));
        s.set_coeff(&g, [-5, 0, 0], Complex64::new(2.0, 0.0));
        let d = dealias(&s, &g);
        assert_eq!(d.coeff(&g, [6, 0, 0]), Complex64::new(0.0, 0.0));
        assert_eq!(d.coeff(&g, [5, 0, 0]), Complex64::new(2.0, 0.0));
        assert_eq!(dealias(&d, &g), d);
    }

    #[test]
    fn laplacian_and_curl_of_gradient() {
        let g = grid(16);
        let f = scalar_sample(&g);
        let lap = divergence(&gradient(&f, &g), &g);
        for i in 0..g.len() {
            let expect = -g.k2(i) * f.as_slice()[i];
            assert!((lap.as_slice()[i] - expect).norm() <= 1e-13 * (1.0 + expect.norm()));
        }
        let c = curl(&gradient(&f, &g), &g);
        assert!(c.max_abs() < 1e-13);
    }

    #[test]
    fn projection_annihilates_gradient() {
        let g = grid(16);
        let f = scalar_sample(&g);
        let p = leray_project(&gradient(&f, &g), &g);
        assert!(p.max_abs() < 1e-13);
    }

    #[test]
    fn sine_l2_norm() {
        let g = grid(16);
        let f = RealField::from_fn(&g, |x, _, _| (2.0 * PI * x).sin());
        let s = forward_transform(&f, &g).unwrap();
        assert!((l2_norm(&s) - 0.5f64.sqrt()).abs() < 1e-14);
        // quadrature oracle: mean of f² over the grid
        let quad: f64 = f.as_slice().iter().map(|v| v * v).sum::<f64>() / g.len() as f64;
        assert!((quad.sqrt() - l2_norm(&s)).abs() < 1e-14);
        assert_eq!(l2_norm(&SpectralField::zeros(&g)), 0.0);
    }
}
