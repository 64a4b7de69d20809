//! Collocation grid on the unit torus `[0,1)³` and its wavevector tables.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::Fft3;

/// `n³` uniform grid on the periodic unit cube.
///
/// Linear index `ix + n·(iy + n·iz)`, x fastest. Mode index `i` maps to the
/// signed integer `m = i` for `i < n/2` and `m = i − n` otherwise, so
/// `m ∈ [−n/2, n/2)` and wavevectors are `k = 2π·m`.
///
/// Derivatives use the wavenumber table with the Nyquist entry (`m = −n/2`)
/// set to zero, the usual choice that keeps spectral derivatives of real
/// fields real. Every norm and weight uses that same table.
#[derive(Debug, Clone)]
pub struct Grid {
    n: usize,
    modes: Vec<i64>,
    wavenumbers: Vec<f64>,
    retained: Vec<bool>,
    // per linear index
    kvec: Vec<[f64; 3]>,
    k2: Vec<f64>,
    mirror: Vec<u32>,
    keep: Vec<bool>,
    fft: Fft3,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(n));
        }
        let half = (n / 2) as i64;
        let modes: Vec<i64> = (0..n as i64)
            .map(|i| if i < half { i } else { i - n as i64 })
            .collect();
        let wavenumbers: Vec<f64> = modes
            .iter()
            .map(|&m| if m == -half { 0.0 } else { 2.0 * PI * m as f64 })
            .collect();
        // 2/3 rule: keep 3|m| < n, which leaves quadratic products alias-free
        let retained: Vec<bool> = modes
            .iter()
            .map(|&m| 3 * m.unsigned_abs() < n as u64)
            .collect();
        let len = n * n * n;
        let mut kvec = Vec::with_capacity(len);
        let mut mirror = Vec::with_capacity(len);
        let mut keep = Vec::with_capacity(len);
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    kvec.push([wavenumbers[ix], wavenumbers[iy], wavenumbers[iz]]);
                    let (mx, my, mz) = ((n - ix) % n, (n - iy) % n, (n - iz) % n);
                    mirror.push((mx + n * (my + n * mz)) as u32);
                    keep.push(retained[ix] && retained[iy] && retained[iz]);
                }
            }
        }
        let k2 = kvec.iter().map(|k: &[f64; 3]| k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).collect();
        Ok(Grid {
            n,
            modes,
            wavenumbers,
            retained,
            kvec,
            k2,
            mirror,
            keep,
            fft: Fft3::new(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of collocation points, `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Derivative wavenumber per 1D index (Nyquist entry zeroed).
    pub fn wavenumbers_1d(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Whether each 1D index survives dealiasing.
    pub fn retained_1d(&self) -> &[bool] {
        &self.retained
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.n * (iy + self.n * iz)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx % n, (idx / n) % n, idx / (n * n))
    }

    /// Signed integer mode triple of a linear index.
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let (ix, iy, iz) = self.coords(idx);
        [self.modes[ix], self.modes[iy], self.modes[iz]]
    }

    /// Linear index of the mode triple `m` (components taken modulo `n`).
    pub fn index_of_mode(&self, m: [i64; 3]) -> usize {
        let n = self.n as i64;
        let w = |v: i64| v.rem_euclid(n) as usize;
        self.index(w(m[0]), w(m[1]), w(m[2]))
    }

    /// Linear index of `−m`.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        self.mirror[idx] as usize
    }

    /// Derivative wavevector of a linear index.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        self.kvec[idx]
    }

    #[inline]
    pub fn k2(&self, idx: usize) -> f64 {
        self.k2[idx]
    }

    /// `|m|` as a real number (true mode magnitude, Nyquist included).
    #[inline]
    pub fn mode_magnitude(&self, idx: usize) -> f64 {
        let m = self.mode(idx);
        ((m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64).sqrt()
    }

    /// True when the mode survives 2/3-rule dealiasing.
    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        self.keep[idx]
    }

    /// Largest `|m_i|` kept by dealiasing.
    pub fn dealias_cutoff(&self) -> usize {
        (self.n - 1) / 3
    }

    /// Physical coordinate of a grid point along one axis.
    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub(crate) fn fft(&self) -> &Fft3 {
        &self.fft
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_match_coordinates() {
        let g = Grid::new(8).unwrap();
        for idx in 0..g.len() {
            let (ix, iy, iz) = g.coords(idx);
            assert_eq!(g.wavevector(idx), [g.wavenumbers[ix], g.wavenumbers[iy], g.wavenumbers[iz]]);
            assert_eq!(g.is_retained(idx), g.retained[ix] && g.retained[iy] && g.retained[iz]);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(6).is_err());
        assert!(Grid::new(9).is_err());
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn mode_range_and_single_zero_mode() {
        let g = Grid::new(8).unwrap();
        let zeros = (0..g.len()).filter(|&i| g.mode(i) == [0, 0, 0]).count();
        assert_eq!(zeros, 1);
        for i in 0..g.len() {
            for c in g.mode(i) {
                assert!((-4..4).contains(&c));
            }
        }
    }

    #[test]
    fn k2_matches_mode_magnitude_away_from_nyquist() {
        let g = Grid::new(16).unwrap();
        for i in 0..g.len() {
            let m = g.mode(i);
            if m.contains(&-8) {
                continue;
            }
            let expect = (2.0 * PI).powi(2) * ((m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64);
            assert!((g.k2(i) - expect).abs() <= 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn mirror_is_involution() {
        let g = Grid::new(8).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.mirror(g.mirror(i)), i);
            let (m, mm) = (g.mode(i), g.mode(g.mirror(i)));
            for d in 0..3 {
                assert_eq!((m[d] + mm[d]).rem_euclid(8), 0);
            }
        }
    }

    #[test]
    fn dealias_threshold() {
        let g = Grid::new(16).unwrap();
        assert_eq!(g.dealias_cutoff(), 5);
        assert!(g.is_retained(g.index_of_mode([5, 0, 0])));
        assert!(!g.is_retained(g.index_of_mode([6, 0, 0])));
        assert!(!g.is_retained(g.index_of_mode([0, -6, 0])));
    }
}
