//! Initial data, the existence-window sweep and convergence studies.

pub mod convergence;
pub mod initial_data;
pub mod profiles;
pub mod sweep;

pub use convergence::{convergence_study, ConvergenceConfig, ConvergenceMode, ConvergenceRow, ConvergenceTable};
pub use initial_data::{grid_for, make_initial_data, KappaReport, PerturbationSpec};
pub use profiles::Profile;
pub use sweep::{existence_window, huygens_leak, run_spec, SweepConfig, SweepResult, SweepRow, WindowConfig};
