//! Axially symmetric perturbations of the neck `r = cosh z`: the static
//! profile stays put and the symbol is positive definite along it; an
//! inward kick ends when the surface stops being timelike or pinches.

use std::sync::Arc;

use catenoid_flow::solver::cylindrical::{evolve_cylindrical, CylConfig};
use catenoid_flow::solver::{CylState, ZGrid};
use catenoid_flow::symbol::cylindrical_symbol;

fn main() -> catenoid_flow::Result<()> {
    let grid = Arc::new(ZGrid::new(5.0, 501)?);
    let all_positive = grid
        .points()
        .iter()
        .all(|z| cylindrical_symbol(0.0, z.sinh(), 0.0).is_positive_definite());
    println!("symbol positive along the static profile: {all_positive}");

    let cfg = CylConfig::default();
    let stat = evolve_cylindrical(&CylState::zeros(grid.clone()), &cfg);
    let drift = stat.records.iter().map(|r| r.max_abs_w).fold(0.0, f64::max);
    println!("static neck: {} at t = {}, max |w| = {drift:e}", stat.termination.reason, stat.termination.t);

    for (amp, vel) in [(0.05, 0.0), (-0.6, -0.3), (-0.9, -0.5)] {
        let init = CylState::from_fn(grid.clone(), |z| amp * (-(z / 0.8).powi(2)).exp(), |z| vel * (-(z / 0.8).powi(2)).exp())?;
        let traj = evolve_cylindrical(&init, &cfg);
        let last = traj.records.last().copied().unwrap_or_default();
        println!(
            "w0 = {amp:>5}, w1 = {vel:>5}: {} at t = {:.4}, min psi = {:.4}, min slack = {:.4}",
            traj.termination.reason, traj.termination.t, last.min_psi, last.min_slack
        );
    }
    Ok(())
}
