use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, the sweep harness and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is invalid: n must be even and at least 8")]
    InvalidGrid(usize),

    #[error("field has {found} samples, expected {expected} for the grid")]
    SizeMismatch { expected: usize, found: usize },

    #[error("non-finite sample {value} at grid point ({ix}, {iy}, {iz}) in {context}")]
    NonFinite {
        context: String,
        ix: usize,
        iy: usize,
        iz: usize,
        value: f64,
    },

    #[error("hermitian symmetry violated at mode ({0}, {1}, {2}): defect {3:e}")]
    SymmetryViolation(i64, i64, i64, f64),

    #[error("imaginary residue {0:e} after inverse transform exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("numerical divergence at step {step} (t = {t}): {source}")]
    Diverged {
        step: u64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("initial condition rejected: {0}")]
    InitialCondition(String),

    #[error("power-law fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("power-law fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("every run in the sweep was INVALID or DIVERGED; resolution is insufficient")]
    AllRunsInvalid,

    #[error("criterion ordering violated {count} time(s); first at alpha = {alpha}, t = {t}: M = {m} < q = {q}")]
    OrderingViolation {
        count: usize,
        alpha: f64,
        t: f64,
        m: f64,
        q: f64,
    },

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error("artifact {path}: {reason}")]
    Artifact { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
