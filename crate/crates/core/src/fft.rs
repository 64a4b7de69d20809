//! Unnormalized 3D complex FFT on an `n³` cube stored x-fastest.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::par;

#[derive(Clone)]
pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fft3").field("n", &self.n).finish()
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// `X(m) = Σ_x f(x) e^{-2πi m·x/n}` (no scaling).
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, Direction::Forward);
    }

    /// `f(x) = Σ_m X(m) e^{+2πi m·x/n}` (no scaling).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, Direction::Inverse);
    }

    fn plan(&self, dir: Direction) -> &Arc<dyn Fft<f64>> {
        match dir {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        }
    }

    fn run(&self, data: &mut [Complex64], dir: Direction) {
        let n = self.n;
        let plane = n * n;
        assert_eq!(data.len(), plane * n);
        let fft = self.plan(dir);

        // x: contiguous lines, one z-plane per task
        par::for_each_chunk_mut(data, plane, |_, p| fft.process(p));

        // y: transpose each z-plane so y becomes contiguous
        par::for_each_chunk_mut(data, plane, |_, p| {
            let mut t = vec![Complex64::new(0.0, 0.0); plane];
            for iy in 0..n {
                for ix in 0..n {
                    t[ix * n + iy] = p[ix + n * iy];
                }
            }
            fft.process(&mut t);
            for iy in 0..n {
                for ix in 0..n {
                    p[ix + n * iy] = t[ix * n + iy];
                }
            }
        });

        // z: gather z-lines into a scratch cube indexed (x + n·y)·n + z
        let src: &[Complex64] = data;
        let mut t = vec![Complex64::new(0.0, 0.0); plane * n];
        par::for_each_chunk_mut(&mut t, plane, |iy, block| {
            for ix in 0..n {
                let line = &mut block[ix * n..(ix + 1) * n];
                for (iz, v) in line.iter_mut().enumerate() {
                    *v = src[ix + n * iy + plane * iz];
                }
            }
            fft.process(block);
        });
        par::for_each_chunk_mut(data, plane, |iz, p| {
            for iy in 0..n {
                for ix in 0..n {
                    p[ix + n * iy] = t[(ix + n * iy) * n + iz];
                }
            }
        });
    }
}
