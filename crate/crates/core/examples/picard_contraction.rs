//! Picard iterates for small data on the flat background, their
//! contraction ratios and the distance of the limit to the nonlinear solver.

use std::sync::Arc;

use catenoid_flow::geometry::BackgroundCoeffs;
use catenoid_flow::solver::picard::{energy_difference, picard_iterate, PicardConfig};
use catenoid_flow::solver::{integrate, EvolveConfig, RadialGrid, RadialState};

fn main() -> catenoid_flow::Result<()> {
    let grid = Arc::new(RadialGrid::with_spacing(1.0, 11.0, 0.02)?);
    let bg = BackgroundCoeffs::flat(grid.clone());
    let bump = |s: f64| if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 };

    for amp in [1e-3, 1e-1, 0.5] {
        let init = RadialState::from_fn(grid.clone(), 0.0, |r| amp * bump((r - 5.0) / 2.0), |_| 0.0)?;
        let cfg = PicardConfig::default();
        let res = picard_iterate(&init, &bg, &cfg)?;
        println!("amplitude {amp:e}:");
        for (k, d) in res.deltas.iter().enumerate() {
            println!("  k = {}: ||phi^k - phi^(k-1)|| = {d:.3e}", k + 1);
        }
        for (k, q) in res.ratios(1e-13) {
            println!("  ratio at k = {k}: {q:.3e}");
        }
        let (snaps, term, _) = integrate(
            &init,
            &bg,
            &EvolveConfig {
                t_end: cfg.t_end,
                record_every: usize::MAX,
                ..EvolveConfig::default()
            },
        );
        if let (true, Some(a), Some(b)) = (term.is_completed(), snaps.last(), res.iterates.last()) {
            println!("  distance to the nonlinear solver: {:.3e}", energy_difference(a, b));
        }
    }
    Ok(())
}
