use std::sync::Arc;

use catenoid_flow::geometry::BackgroundCoeffs;
use catenoid_flow::solver::picard::{energy_difference, picard_iterate, PicardConfig};
use catenoid_flow::solver::{integrate, EvolveConfig, RadialGrid, RadialState};

fn setup(amplitude: f64, dr: f64) -> (BackgroundCoeffs, RadialState) {
    let g = Arc::new(RadialGrid::with_spacing(1.0, 11.0, dr).unwrap());
    let bump = |s: f64| if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 };
    let init = RadialState::from_fn(g.clone(), 0.0, |r| amplitude * bump((r - 5.0) / 2.0), |_| 0.0).unwrap();
    (BackgroundCoeffs::flat(g), init)
}

#[test]
fn small_data_iterates_contract() {
    for amp in [1e-3, 1e-4] {
        let (bg, init) = setup(amp, 0.02);
        let res = picard_iterate(&init, &bg, &PicardConfig::default()).unwrap();
        let ratios = res.ratios(1e-13);
        assert!(!ratios.is_empty());
        assert!(ratios.iter().all(|&(k, q)| k >= 2 && q <= 0.5), "{ratios:?}");
    }
}

#[test]
fn limit_matches_the_nonlinear_solver() {
    let amp = 1e-3;
    let (bg, init) = setup(amp, 0.02);
    let cfg = PicardConfig::default();
    let res = picard_iterate(&init, &bg, &cfg).unwrap();
    let (snaps, term, _) = integrate(
        &init,
        &bg,
        &EvolveConfig {
            t_end: cfg.t_end,
            record_every: usize::MAX,
            ..EvolveConfig::default()
        },
    );
    assert!(term.is_completed());
    let dist = energy_difference(snaps.last().unwrap(), res.iterates.last().unwrap());
    let size = energy_difference(&init, &RadialState::zeros(init.grid.clone()));
    assert!(dist <= 0.02 * 0.02 * size, "{dist} vs {size}");
}

#[test]
fn first_iterate_is_the_linear_wave_on_the_frozen_background() {
    // amplitude enters the first iterate linearly
    let (bg, a) = setup(1e-3, 0.05);
    let (_, b) = setup(2e-3, 0.05);
    let cfg = PicardConfig {
        k_max: 1,
        ..PicardConfig::default()
    };
    let ra = picard_iterate(&a, &bg, &cfg).unwrap();
    let rb = picard_iterate(&b, &bg, &cfg).unwrap();
    for (x, y) in ra.iterates[0].eps.iter().zip(&rb.iterates[0].eps) {
        assert!((2.0 * x - y).abs() <= 1e-15);
    }
}
