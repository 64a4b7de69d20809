//! Real-space samples and Fourier coefficients of periodic fields.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::par;

/// Real samples at the `n³` collocation points, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    n: usize,
    data: Vec<f64>,
}

impl RealField {
    pub fn zeros(grid: &Grid) -> Self {
        RealField {
            n: grid.n(),
            data: vec![0.0; grid.len()],
        }
    }

    pub fn from_vec(grid: &Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: data.len(),
            });
        }
        Ok(RealField { n: grid.n(), data })
    }

    /// Samples `f(x, y, z)` at every grid point.
    pub fn from_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Sync + Send,
    {
        let data = par::collect_indexed(grid.len(), |idx| {
            let (ix, iy, iz) = grid.coords(idx);
            f(grid.coordinate(ix), grid.coordinate(iy), grid.coordinate(iz))
        });
        RealField { n: grid.n(), data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// First non-finite sample as `(index, value)`.
    pub fn first_non_finite(&self) -> Option<(usize, f64)> {
        self.data
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite())
            .map(|(i, &v)| (i, v))
    }
}

/// Three real components.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVectorField {
    pub components: [RealField; 3],
}

impl RealVectorField {
    pub fn zeros(grid: &Grid) -> Self {
        RealVectorField {
            components: [
                RealField::zeros(grid),
                RealField::zeros(grid),
                RealField::zeros(grid),
            ],
        }
    }

    pub fn from_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> [f64; 3] + Sync + Send,
    {
        let c = |d: usize| RealField::from_fn(grid, |x, y, z| f(x, y, z)[d]);
        RealVectorField {
            components: [c(0), c(1), c(2)],
        }
    }

    pub fn n(&self) -> usize {
        self.components[0].n()
    }

    /// Largest `|u_i(x)|` over all points and components.
    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .fold(0.0, |a, c| a.max(c.max_abs()))
    }
}

/// Fourier coefficients indexed like the grid (mode triples in `[−n/2, n/2)`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            n: grid.n(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_vec(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(SpectralField {
            n: grid.n(),
            coeffs,
        })
    }

    pub(crate) fn from_raw(n: usize, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), n * n * n);
        SpectralField { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, grid: &Grid, m: [i64; 3]) -> Complex64 {
        self.coeffs[grid.index_of_mode(m)]
    }

    pub fn set_coeff(&mut self, grid: &Grid, m: [i64; 3], value: Complex64) {
        self.coeffs[grid.index_of_mode(m)] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a: f64, c| a.max(c.norm_sqr())).sqrt()
    }

    /// Largest `|c(m) − conj(c(−m))|` and the index where it occurs.
    pub fn hermitian_defect(&self, grid: &Grid) -> (f64, usize) {
        let mut worst = (0.0, 0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let d = (c - self.coeffs[grid.mirror(i)].conj()).norm_sqr();
            if d > worst.0 {
                worst = (d, i);
            }
        }
        (worst.0.sqrt(), worst.1)
    }

    /// Replaces each coefficient by `(c(m) + conj(c(−m)))/2`.
    pub fn symmetrize(&mut self, grid: &Grid) {
        let src = self.coeffs.clone();
        par::for_each_chunk_mut(&mut self.coeffs, grid.n(), |line, out| {
            let base = line * grid.n();
            for (j, c) in out.iter_mut().enumerate() {
                let i = base + j;
                *c = (src[i] + src[grid.mirror(i)].conj()) * 0.5;
            }
        });
    }

    pub fn mode_map<F>(&self, grid: &Grid, f: F) -> SpectralField
    where
        F: Fn(usize, Complex64) -> Complex64 + Sync + Send,
    {
        let coeffs = par::collect_indexed(grid.len(), |i| f(i, self.coeffs[i]));
        SpectralField { n: self.n, coeffs }
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }
}

/// Three spectral components; the solver state `û`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    pub components: [SpectralField; 3],
}

impl SpectralVectorField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralVectorField {
            components: [
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
            ],
        }
    }

    pub fn new(components: [SpectralField; 3]) -> Self {
        SpectralVectorField { components }
    }

    pub fn n(&self) -> usize {
        self.components[0].n()
    }

    /// Coefficient vector `û(k)` at a linear index.
    #[inline]
    pub fn at(&self, idx: usize) -> [Complex64; 3] {
        [
            self.components[0].coeffs[idx],
            self.components[1].coeffs[idx],
            self.components[2].coeffs[idx],
        ]
    }

    /// Builds a field from a per-mode vector map.
    pub fn from_modes<F>(grid: &Grid, f: F) -> SpectralVectorField
    where
        F: Fn(usize) -> [Complex64; 3] + Sync + Send,
    {
        let zero = Complex64::new(0.0, 0.0);
        let (mut a, mut b, mut c) = (
            vec![zero; grid.len()],
            vec![zero; grid.len()],
            vec![zero; grid.len()],
        );
        par::for_each_chunk3_mut(&mut a, &mut b, &mut c, grid.n() * grid.n(), |off, x, y, z| {
            for j in 0..x.len() {
                let v = f(off + j);
                x[j] = v[0];
                y[j] = v[1];
                z[j] = v[2];
            }
        });
        let n = grid.n();
        SpectralVectorField {
            components: [
                SpectralField::from_raw(n, a),
                SpectralField::from_raw(n, b),
                SpectralField::from_raw(n, c),
            ],
        }
    }

    pub fn mode_map<F>(&self, grid: &Grid, f: F) -> SpectralVectorField
    where
        F: Fn(usize, [Complex64; 3]) -> [Complex64; 3] + Sync + Send,
    {
        Self::from_modes(grid, |i| f(i, self.at(i)))
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &SpectralVectorField) -> SpectralVectorField {
        let comp = |d: usize| {
            let a = &self.components[d].coeffs;
            let b = &other.components[d].coeffs;
            SpectralField::from_raw(
                self.n(),
                a.iter().zip(b).map(|(x, y)| x + y * s).collect(),
            )
        };
        SpectralVectorField {
            components: [comp(0), comp(1), comp(2)],
        }
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.components {
            c.scale(s);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .fold(0.0, |a, c| a.max(c.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.coeffs.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn hermitian_defect(&self, grid: &Grid) -> f64 {
        self.components
            .iter()
            .map(|c| c.hermitian_defect(grid).0)
            .fold(0.0, f64::max)
    }

    pub fn symmetrize(&mut self, grid: &Grid) {
        for c in &mut self.components {
            c.symmetrize(grid);
        }
    }
}
