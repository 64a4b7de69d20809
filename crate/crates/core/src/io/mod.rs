//! Initial conditions, on-disk formats and configuration.

pub mod checkpoint;
pub mod config;
pub mod files;
pub mod ic;
pub mod summary;

pub use ic::{generate_ic, InitialConditionSpec};
