//! The catenoid profile, the static residual of the background and the
//! assembled right-hand side for zero perturbation.

use std::sync::Arc;

use catenoid_flow::geometry::{background_coeffs, catenoid_profile};
use catenoid_flow::solver::{assemble_rhs, RadialGrid, RadialState};

fn main() -> catenoid_flow::Result<()> {
    for r in [1.0, 1.25, 2.0, 10.0, 100.0] {
        let p = catenoid_profile(r)?;
        println!("r = {r:>6}: Q = {:.6}, Q_r = {:.6e}, Q_rr = {:.6e}", p.q, p.q_r, p.q_rr);
    }

    let grid = Arc::new(RadialGrid::new(1.25, 200.0, 8000)?);
    let bg = background_coeffs(grid.clone())?;
    let static_res = bg.static_residual().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let (c3, c4) = bg.envelope_constants();
    println!("max static residual of Q on [1.25, 200]: {static_res:.3e}");
    println!("envelope constants: max r^3 |c3| = {c3:.4}, max r^4 |c4| = {c4:.4}");

    let rhs = assemble_rhs(&RadialState::zeros(grid), &bg)?;
    let worst = rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    println!("max |rhs| for eps = 0: {worst:e}");
    Ok(())
}
