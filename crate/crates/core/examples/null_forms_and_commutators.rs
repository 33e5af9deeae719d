//! The null-form factorizations on an evolved snapshot and the commutators
//! of the boost and scaling fields with the radial wave operator.

use std::sync::Arc;

use catenoid_flow::diagnostics::{commutator_residual, nullform_residual, CommutatorGrid, Gamma};
use catenoid_flow::geometry::background_coeffs;
use catenoid_flow::solver::{integrate, EvolveConfig, RadialGrid, RadialState};

fn main() -> catenoid_flow::Result<()> {
    let grid = Arc::new(RadialGrid::with_spacing(1.25, 40.0, 0.05)?);
    let bg = background_coeffs(grid.clone())?;
    let init = RadialState::from_fn(grid, 0.0, |r| 1e-2 * (-(r - 20.0).powi(2) / 4.0).exp(), |_| 0.0)?;
    let (snaps, _, _) = integrate(
        &init,
        &bg,
        &EvolveConfig {
            t_end: 8.0,
            record_every: 40,
            ..EvolveConfig::default()
        },
    );
    for s in &snaps {
        let n = nullform_residual(s, &bg, 0.25);
        println!(
            "t = {:>5.2}: sum-factor {:.2e}, quotient {:.2e}, bilinear {:.2e}",
            s.t, n.sum_factor, n.quotient, n.bilinear
        );
    }

    let f = |t: f64, r: f64| (0.3 * t + 0.5 * r).sin() * (-0.01 * r * r).exp() + 0.1 * t * t * r;
    for which in [Gamma::Scaling, Gamma::Boost] {
        print!("[{which:?}, box] residual:");
        for k in 0..4 {
            let h = 0.1 / 2f64.powi(k);
            let g = CommutatorGrid {
                t0: 2.0,
                r_min: 3.0,
                r_max: 6.0,
                dr: h,
                dt: h,
            };
            print!(" {:.3e}", commutator_residual(&f, which, &g));
        }
        println!();
    }
    Ok(())
}
