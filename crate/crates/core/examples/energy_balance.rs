//! Energy bookkeeping in a shrinking cone: the energy lost from the cone is
//! the flux through its boundary plus the remainder and forcing integrals.

use std::sync::Arc;

use catenoid_flow::diagnostics::{energy_audit, ConeRegion, EnergyMode};
use catenoid_flow::geometry::{background_coeffs, BackgroundCoeffs};
use catenoid_flow::solver::{integrate, EvolveConfig, RadialGrid, RadialState};

fn main() -> catenoid_flow::Result<()> {
    let bump = |s: f64| if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 };
    for dr in [0.05, 0.025, 0.0125] {
        let g = Arc::new(RadialGrid::with_spacing(1.25, 41.0, dr)?);
        for (name, bg) in [("flat", BackgroundCoeffs::flat(g.clone())), ("catenoid", background_coeffs(g.clone())?)] {
            let init = RadialState::from_fn(g.clone(), 0.0, |r| 1e-2 * bump((r - 15.0) / 4.0), |_| 0.0)?;
            let cfg = EvolveConfig {
                t_end: 8.0,
                record_every: 1,
                ..EvolveConfig::default()
            };
            let (snaps, term, _) = integrate(&init, &bg, &cfg);
            let a = energy_audit(&snaps, &bg, ConeRegion::new(15.0, 9.0), EnergyMode::FullGradient);
            let k = a.t.len() - 1;
            println!(
                "dr = {dr:<7} {name:<9} {}: E0 = {:.4e}, E = {:.4e}, H = {:.4e}, R = {:.3e}, G = {:.3e}, max residual/E0 = {:.3e}",
                term.reason,
                a.energy[0],
                a.energy[k],
                a.flux[k],
                a.remainder[k],
                a.forcing[k],
                a.max_relative_residual()
            );
        }
    }
    Ok(())
}
