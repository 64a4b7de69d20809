//! Pseudospectral solver for the 3D Euler-Voigt equations on the periodic
//! unit torus, and a sweep harness that tracks `q(α,t) = α‖∇u^α(t)‖` as the
//! regularization length `α` shrinks.
//!
//! Layout:
//! - [`grid`], [`field`], [`spectral`]: transforms, spectral calculus, norms
//! - [`dynamics`]: Euler-Voigt right-hand side and pressure recovery
//! - [`integrate`]: RK4 stepping, running max of `q`, α-energy drift gate
//! - [`diagnostics`]: energy, enstrophy, α-energy, `q`, spectra
//! - [`harness`]: α-sweeps, power-law fits, criterion verdicts, convergence study
//! - [`io`]: initial conditions, checkpoints, series/summary files, config
//! - [`cli`]: the command-line front end

pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
mod fft;
pub mod field;
pub mod grid;
pub mod harness;
pub mod integrate;
pub mod io;
pub mod par;
pub mod spectral;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use field::{RealField, RealVectorField, SpectralField, SpectralVectorField};
pub use grid::Grid;
