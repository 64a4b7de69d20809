//! α-sweeps and the blow-up criterion evaluation built on them.

pub mod convergence;
pub mod criteria;
pub mod fit;
pub mod sweep;

pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use criteria::{
    analyze_sweep, classify, compare_criteria, new_criterion_curve, old_criterion_curve,
    CriterionVerdict, Evidence, OrderingReport, SweepAnalysis, Thresholds,
};
pub use fit::{fit_power_law, FitResult};
pub use sweep::{run_sweep, run_sweep_from, RunRecord, SweepConfig, SweepResult};
