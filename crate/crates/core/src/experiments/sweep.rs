//! Existence-window sweep: evolve scaled data to `t = lambda - C1` and
//! record how each run ends.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{BootstrapNorms, DiagnosticsConfig, DiagnosticsRecord};
use crate::error::Result;
use crate::experiments::initial_data::{grid_for, make_initial_data, PerturbationSpec};
use crate::experiments::profiles::Profile;
use crate::geometry::{Background, BackgroundCoeffs};
use crate::solver::{evolve, EvolveConfig, RadialState, TerminationReason, Trajectory};
use crate::symbol::DEFAULT_MARGIN;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowConfig {
    /// Target time is `lambda - c1`.
    pub c1: f64,
    pub dr: f64,
    /// Inner radius is `1 + eta`.
    pub eta: f64,
    pub cfl: f64,
    pub margin: f64,
    pub record_every: usize,
    pub background: Background,
    pub diagnostics: DiagnosticsConfig,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            c1: 5.0,
            dr: 0.05,
            eta: 0.25,
            cfl: 0.4,
            margin: DEFAULT_MARGIN,
            record_every: 20,
            background: Background::Catenoid,
            diagnostics: DiagnosticsConfig::default(),
        }
    }
}

impl WindowConfig {
    pub fn evolve_config(&self, t_end: f64) -> EvolveConfig {
        EvolveConfig {
            t_end,
            cfl: self.cfl,
            margin: self.margin,
            record_every: self.record_every,
            diagnostics: self.diagnostics.clone(),
            ..EvolveConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub amplitude: f64,
    pub kappa0: f64,
    pub kappa_physical: f64,
    pub t_target: f64,
    pub t_final: f64,
    pub termination: TerminationReason,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub min_slack: f64,
    /// `max |eps| / max |eps(0)|` over `r < lambda - t - 2 dr`, all recorded times.
    pub huygens_leak: f64,
    pub nullform_max: f64,
    pub steps: usize,
}

impl SweepRow {
    pub const HEADER: [&'static str; 14] = [
        "lambda",
        "amplitude",
        "kappa0",
        "kappa_physical",
        "t_target",
        "t_final",
        "termination",
        "b1",
        "b2",
        "b3",
        "min_slack",
        "huygens_leak",
        "nullform_max",
        "steps",
    ];
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn all_completed(&self) -> bool {
        self.rows.iter().all(|r| r.termination == TerminationReason::Completed)
    }
}

/// `max |eps| / max |eps(0)|` over `r < lambda - t - 2 dr`.
pub fn huygens_leak(snapshots: &[RadialState], lambda: f64) -> f64 {
    let Some(first) = snapshots.first() else {
        return 0.0;
    };
    let peak = first.eps.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let dr = first.dr();
    snapshots
        .iter()
        .map(|s| {
            let edge = lambda - s.t - 2.0 * dr;
            s.r()
                .iter()
                .zip(&s.eps)
                .take_while(|(r, _)| **r < edge)
                .fold(0.0_f64, |m, (_, v)| m.max(v.abs()))
        })
        .fold(0.0, f64::max)
        / peak
}

/// Evolves one spec to `lambda - c1`.
pub fn run_spec(
    spec: &PerturbationSpec,
    config: &WindowConfig,
) -> Result<(SweepRow, Trajectory<RadialState, DiagnosticsRecord>)> {
    let t_target = (spec.lambda - config.c1).max(0.0);
    let grid = grid_for(spec.lambda, t_target, config.eta, config.dr)?;
    let bg = BackgroundCoeffs::new(config.background, grid.clone())?;
    let (init, kappa) = make_initial_data(spec, grid)?;
    let traj = evolve(&init, &bg, &config.evolve_config(t_target));
    let norms = BootstrapNorms::from_records(&traj.records, config.diagnostics.delta);
    let row = SweepRow {
        lambda: spec.lambda,
        amplitude: spec.amplitude,
        kappa0: kappa.kappa0,
        kappa_physical: kappa.physical,
        t_target,
        t_final: traj.termination.t,
        termination: traj.termination.reason,
        b1: norms.b1,
        b2: norms.b2,
        b3: norms.b3,
        min_slack: traj.records.iter().map(|r| r.hyperbolicity_slack).fold(f64::INFINITY, f64::min),
        huygens_leak: huygens_leak(&traj.snapshots, spec.lambda),
        nullform_max: traj.records.iter().map(|r| r.nullform_residual).fold(0.0, f64::max),
        steps: traj.steps,
    };
    Ok((row, traj))
}

/// Runs every spec independently; rows keep the order of `specs`.
pub fn existence_window(specs: &[PerturbationSpec], config: &WindowConfig) -> Result<SweepResult> {
    let rows = specs
        .par_iter()
        .map(|s| run_spec(s, config).map(|(row, _)| row))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Sweep file schema: every `lambda` is paired with every target `kappa0`
/// and every raw `amplitude`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub lambdas: Vec<f64>,
    pub kappas: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub profile_f: Profile,
    pub profile_g: Profile,
    pub norm_order: usize,
    pub window: WindowConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lambdas: vec![20.0, 40.0, 80.0],
            kappas: vec![1e-3],
            amplitudes: Vec::new(),
            profile_f: Profile::Bump,
            profile_g: Profile::Zero,
            norm_order: 10,
            window: WindowConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn specs(&self) -> Vec<PerturbationSpec> {
        let mut out = Vec::new();
        for &lambda in &self.lambdas {
            let base = PerturbationSpec {
                lambda,
                amplitude: 0.0,
                profile_f: self.profile_f,
                profile_g: self.profile_g,
                norm_order: self.norm_order,
            };
            out.extend(self.kappas.iter().map(|&k| base.with_kappa(k)));
            out.extend(self.amplitudes.iter().map(|&a| PerturbationSpec {
                amplitude: a,
                ..base.clone()
            }));
        }
        out
    }
}
