//! Grid-refinement studies: the line solver against the exact solution and
//! the radial solver against itself.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::initial_data::{grid_for, make_initial_data, PerturbationSpec};
use crate::geometry::{Background, BackgroundCoeffs};
use crate::solver::dalembert::{dalembert_reference, LineWave};
use crate::solver::{integrate, EvolveConfig, TerminationReason};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceMode {
    /// `u_tt = u_xx` on a half line against the d'Alembert formula.
    #[default]
    Line,
    /// Self-comparison of the radial solver on three nested grids.
    Radial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergenceConfig {
    pub mode: ConvergenceMode,
    /// Coarsest spacing.
    pub dr: f64,
    pub levels: usize,
    pub t_end: f64,
    pub amplitude: f64,
    pub cfl: f64,
    /// Radial mode only.
    pub lambda: f64,
    pub background: Background,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            mode: ConvergenceMode::Line,
            dr: 0.1,
            levels: 4,
            t_end: 5.0,
            amplitude: 1.0,
            cfl: 0.4,
            lambda: 10.0,
            background: Background::Catenoid,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub dr: f64,
    /// Line mode: max error against the exact solution. Radial mode: max
    /// difference to the next finer level on the coarse points.
    pub error: f64,
    /// `log2(error / next error)`, absent on the last row or when errors vanish.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub mode: ConvergenceMode,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }
}

fn with_orders(drs: &[f64], errors: &[f64]) -> Vec<ConvergenceRow> {
    (0..errors.len())
        .map(|k| ConvergenceRow {
            dr: drs[k],
            error: errors[k],
            order: (k + 1 < errors.len() && errors[k] > 0.0 && errors[k + 1] > 0.0)
                .then(|| (errors[k] / errors[k + 1]).log2()),
        })
        .collect()
}

fn bump(c: f64, w: f64) -> impl Fn(f64) -> f64 + Sync {
    move |x: f64| {
        let s = (x - c) / w;
        if s.abs() < 1.0 {
            (-1.0 / (1.0 - s * s)).exp()
        } else {
            0.0
        }
    }
}

fn line_study(c: &ConvergenceConfig) -> Result<ConvergenceTable> {
    let x_max = 30.0;
    let a = c.amplitude;
    let f = bump(10.0, 3.0);
    let g = bump(6.0, 2.0);
    let u0 = |x: f64| a * f(x);
    let u1 = |x: f64| 0.5 * a * g(x);
    let drs: Vec<f64> = (0..c.levels).map(|k| c.dr / (1 << k) as f64).collect();
    let errors = drs
        .par_iter()
        .map(|&dx| {
            let n = (x_max / dx).round() as usize + 1;
            let mut w = LineWave::new(x_max, n, u0, u1)?;
            w.run_to(c.t_end, c.cfl);
            let exact = dalembert_reference(u0, u1, c.t_end, &w.x, 1e-3);
            Ok(w.u.iter().zip(&exact).fold(0.0_f64, |m, (u, e)| m.max((u - e).abs())))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConvergenceTable {
        mode: ConvergenceMode::Line,
        rows: with_orders(&drs, &errors),
    })
}

fn radial_study(c: &ConvergenceConfig) -> Result<ConvergenceTable> {
    let spec = PerturbationSpec {
        lambda: c.lambda,
        amplitude: c.amplitude,
        ..PerturbationSpec::default()
    };
    let drs: Vec<f64> = (0..c.levels).map(|k| c.dr / (1 << k) as f64).collect();
    let finals = drs
        .par_iter()
        .map(|&dr| {
            let grid = grid_for(spec.lambda, c.t_end, 0.25, dr)?;
            let bg = BackgroundCoeffs::new(c.background, grid.clone())?;
            let (init, _) = make_initial_data(&spec, grid)?;
            let cfg = EvolveConfig {
                t_end: c.t_end,
                cfl: c.cfl,
                record_every: usize::MAX,
                collar_guard: false,
                ..EvolveConfig::default()
            };
            let (snaps, term, _) = integrate(&init, &bg, &cfg);
            if term.reason != TerminationReason::Completed {
                return Err(Error::Config(format!("refinement run ended with {}", term.reason)));
            }
            Ok(snaps.last().cloned().expect("final state"))
        })
        .collect::<Result<Vec<_>>>()?;
    // compare on the coarse points, level k uses stride 2^k
    let n0 = finals[0].eps.len();
    let errors: Vec<f64> = (0..finals.len().saturating_sub(1))
        .map(|k| {
            let (a, b) = (&finals[k], &finals[k + 1]);
            let (sa, sb) = (1 << k, 1 << (k + 1));
            (0..n0)
                .filter(|i| i * sb < b.eps.len() && i * sa < a.eps.len())
                .fold(0.0_f64, |m, i| m.max((a.eps[i * sa] - b.eps[i * sb]).abs()))
        })
        .collect();
    Ok(ConvergenceTable {
        mode: ConvergenceMode::Radial,
        rows: with_orders(&drs, &errors),
    })
}

pub fn convergence_study(config: &ConvergenceConfig) -> Result<ConvergenceTable> {
    if config.levels < 2 || !(config.dr > 0.0) {
        return Err(Error::Config("a convergence study needs at least two levels and dr > 0".into()));
    }
    match config.mode {
        ConvergenceMode::Line => line_study(config),
        ConvergenceMode::Radial => radial_study(config),
    }
}
