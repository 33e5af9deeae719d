use std::sync::Arc;

use catenoid_flow::solver::cylindrical::{cyl_rhs, evolve_cylindrical, CylConfig};
use catenoid_flow::solver::{CylState, TerminationReason, ZGrid};
use catenoid_flow::symbol::cylindrical_symbol;

/// `psi_tt` from the axially symmetric equation written for `psi` itself.
fn direct(psi: f64, pz: f64, pzz: f64, pt: f64, ptz: f64) -> f64 {
    ((1.0 - pt * pt) * pzz + 2.0 * pt * pz * ptz - (1.0 + pz * pz - pt * pt) / psi) / (1.0 + pz * pz)
}

#[test]
fn static_neck_does_not_move() {
    let g = Arc::new(ZGrid::new(5.0, 1001).unwrap());
    let traj = evolve_cylindrical(&CylState::zeros(g.clone()), &CylConfig::default());
    assert!(traj.termination.is_completed());
    assert_eq!(traj.termination.t, 10.0);
    assert!(traj.records.iter().all(|r| r.max_abs_w < 1e-10 && r.positive));
    assert!(g.points().iter().all(|z| cylindrical_symbol(0.0, z.sinh(), 0.0).is_positive_definite()));
}

#[test]
fn rhs_matches_the_direct_form() {
    let g = Arc::new(ZGrid::new(3.0, 601).unwrap());
    let s = CylState::from_fn(g.clone(), |z| 0.2 * (-z * z).exp() * (2.0 * z).cos(), |z| 0.3 * (-(z - 0.5).powi(2)).exp()).unwrap();
    let got = cyl_rhs(&s, 0.05).unwrap();
    let (z, dz) = (g.points(), g.dz());
    let psi = s.psi();
    for i in 1..z.len() - 1 {
        let pz = (psi[i + 1] - psi[i - 1]) / (2.0 * dz);
        let pzz = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (dz * dz);
        let ptz = (s.w_t[i + 1] - s.w_t[i - 1]) / (2.0 * dz);
        let want = direct(psi[i], pz, pzz, s.w_t[i], ptz);
        // the direct form carries the finite-difference error of cosh z itself
        let cosh_err = dz * dz / 12.0 * z[i].cosh();
        assert!((got[i] - want).abs() < 2.0 * cosh_err + 1e-10, "z = {}", z[i]);
    }
}

#[test]
fn strong_inward_kick_ends_the_run() {
    let g = Arc::new(ZGrid::new(5.0, 501).unwrap());
    let s = CylState::from_fn(g, |z| -0.6 * (-(z / 0.8).powi(2)).exp(), |z| -0.3 * (-(z / 0.8).powi(2)).exp()).unwrap();
    let traj = evolve_cylindrical(&s, &CylConfig::default());
    assert!(matches!(
        traj.termination.reason,
        TerminationReason::HyperbolicityLost | TerminationReason::SupportHitCollar
    ));
    assert!(traj.termination.t < 10.0);
}
