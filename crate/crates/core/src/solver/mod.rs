//! Time evolution: the radial perturbation equation, the axially symmetric
//! neck equation, the Picard iteration and exact reference solutions.

pub mod checkpoint;
pub mod cylindrical;
pub mod dalembert;
mod grid;
pub mod picard;
pub mod radial;
mod state;
mod trajectory;

pub use grid::RadialGrid;
pub use radial::{
    assemble_rhs, assemble_rhs_with_margin, eps_tt_field, eps_tt_point, evolve, integrate, max_char_speed,
    min_slack, monitor_energy, slack_field, step, step_with, EvolveConfig, StepOptions,
};
pub use state::{CylState, RadialState, ZGrid};
pub use trajectory::{Termination, TerminationReason, Trajectory};
