//! Axially symmetric surfaces `r = psi(t, z)` around the static neck
//! `psi = cosh z`:
//!
//! ```text
//! (1 + psi_z^2) psi_tt = (1 - psi_t^2) psi_zz + 2 psi_t psi_z psi_tz - (1 + psi_z^2 - psi_t^2) / psi
//! ```
//!
//! Written for `w = psi - cosh z`, every term vanishes exactly where `w`
//! vanishes locally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{CylState, Termination, TerminationReason, Trajectory};
use crate::symbol::{cylindrical_symbol, DEFAULT_MARGIN};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CylConfig {
    pub t_end: f64,
    pub cfl: f64,
    pub margin: f64,
    pub record_every: usize,
    /// Stop with `norm_blowup` when `max |w|` exceeds this bound.
    pub blowup: f64,
}

impl Default for CylConfig {
    fn default() -> Self {
        Self {
            t_end: 10.0,
            cfl: 0.4,
            margin: DEFAULT_MARGIN,
            record_every: 10,
            blowup: 1e6,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CylRecord {
    pub t: f64,
    pub max_abs_w: f64,
    pub min_psi: f64,
    /// Smallest `(1 + psi_z^2 - psi_t^2) / (1 + psi_z^2)`.
    pub min_slack: f64,
    /// Whether the spatial form of the symbol is positive definite everywhere.
    pub positive: bool,
}

enum Stop {
    Pinch(f64),
    Hyperbolicity(usize, f64),
}

/// `w_tt` on the grid, or the reason it cannot be formed.
fn accel(w: &[f64], w_t: &[f64], z: &[f64], dz: f64, margin: f64) -> std::result::Result<Vec<f64>, Stop> {
    let n = w.len();
    let (i1, i2) = (1.0 / (2.0 * dz), 1.0 / (dz * dz));
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let (c, s) = (z[i].cosh(), z[i].sinh());
        let psi = c + w[i];
        if !(psi > 0.0) {
            return Err(Stop::Pinch(z[i]));
        }
        let w_z = (w[i + 1] - w[i - 1]) * i1;
        let w_zz = (w[i + 1] - 2.0 * w[i] + w[i - 1]) * i2;
        let w_tz = (w_t[i + 1] - w_t[i - 1]) * i1;
        let (pt, pz, pzz) = (w_t[i], s + w_z, c + w_zz);
        let m = 1.0 + pz * pz;
        if (m - pt * pt) / m < margin {
            return Err(Stop::Hyperbolicity(i, (m - pt * pt) / m));
        }
        let x = 2.0 * s * w_z + w_z * w_z - pt * pt;
        let num = w_zz - pt * pt * pzz + 2.0 * pt * pz * w_tz + (c * w[i] - x) / psi;
        out[i] = num / m;
    }
    Ok(out)
}

fn max_speed(state: &CylState) -> f64 {
    let z = state.grid.points();
    let dz = state.grid.dz();
    let n = z.len();
    let mut m = 0.0_f64;
    for i in 1..n - 1 {
        let pz = z[i].sinh() + (state.w[i + 1] - state.w[i - 1]) / (2.0 * dz);
        let sym = cylindrical_symbol(state.w_t[i], pz, 0.0);
        if let Ok((lo, hi)) = sym.characteristic_speeds([1.0, 0.0]) {
            m = m.max(lo.abs()).max(hi.abs());
        }
    }
    m
}

pub fn record(state: &CylState) -> CylRecord {
    let z = state.grid.points();
    let dz = state.grid.dz();
    let n = z.len();
    let psi = state.psi();
    let mut rec = CylRecord {
        t: state.t,
        max_abs_w: state.max_abs_w(),
        min_psi: psi.iter().copied().fold(f64::INFINITY, f64::min),
        min_slack: f64::INFINITY,
        positive: true,
    };
    for i in 0..n {
        let w_z = if i == 0 || i + 1 == n {
            0.0
        } else {
            (state.w[i + 1] - state.w[i - 1]) / (2.0 * dz)
        };
        let sym = cylindrical_symbol(state.w_t[i], z[i].sinh() + w_z, 0.0);
        rec.min_slack = rec.min_slack.min(sym.slack());
        rec.positive &= sym.is_positive_definite();
    }
    rec
}

fn rk4(state: &CylState, dt: f64, margin: f64) -> std::result::Result<CylState, Stop> {
    let z = state.grid.points();
    let dz = state.grid.dz();
    let n = z.len();
    let axpy = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(x, y)| x + a * y).collect() };
    let (u, v) = (&state.w, &state.w_t);
    let a1 = accel(u, v, z, dz, margin)?;
    let (u2, v2) = (axpy(u, 0.5 * dt, v), axpy(v, 0.5 * dt, &a1));
    let a2 = accel(&u2, &v2, z, dz, margin)?;
    let (u3, v3) = (axpy(u, 0.5 * dt, &v2), axpy(v, 0.5 * dt, &a2));
    let a3 = accel(&u3, &v3, z, dz, margin)?;
    let (u4, v4) = (axpy(u, dt, &v3), axpy(v, dt, &a3));
    let a4 = accel(&u4, &v4, z, dz, margin)?;
    let k = dt / 6.0;
    let mut w: Vec<f64> = (0..n).map(|i| u[i] + k * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i])).collect();
    let mut w_t: Vec<f64> = (0..n).map(|i| v[i] + k * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i])).collect();
    for f in [&mut w, &mut w_t] {
        f[0] = 0.0;
        f[n - 1] = 0.0;
    }
    Ok(CylState {
        t: state.t + dt,
        w,
        w_t,
        grid: state.grid.clone(),
    })
}

/// `w_tt` for a cylindrical state; errors when `psi <= 0` or hyperbolicity
/// is lost.
pub fn cyl_rhs(state: &CylState, margin: f64) -> Result<Vec<f64>> {
    accel(&state.w, &state.w_t, state.grid.points(), state.grid.dz(), margin).map_err(|s| match s {
        Stop::Pinch(z) => Error::Domain { r: z },
        Stop::Hyperbolicity(i, slack) => Error::NonHyperbolic {
            index: i,
            position: state.grid.points()[i],
            slack,
            margin,
        },
    })
}

pub fn evolve_cylindrical(init: &CylState, config: &CylConfig) -> Trajectory<CylState, CylRecord> {
    let mut snaps = vec![init.clone()];
    let done = |snaps: Vec<CylState>, term: Termination, steps: usize| {
        let records = snaps.iter().map(record).collect();
        Trajectory {
            snapshots: snaps,
            records,
            termination: term,
            steps,
        }
    };
    let stop_tag = |s: Stop, t: f64| match s {
        Stop::Pinch(z) => Termination::with(TerminationReason::SupportHitCollar, t, format!("psi <= 0 at z = {z}")),
        Stop::Hyperbolicity(_, slack) => {
            Termination::with(TerminationReason::HyperbolicityLost, t, format!("slack {slack}"))
        }
    };
    if let Err(s) = accel(&init.w, &init.w_t, init.grid.points(), init.grid.dz(), config.margin) {
        return done(snaps, stop_tag(s, init.t), 0);
    }
    let every = config.record_every.max(1);
    let mut state = init.clone();
    let mut steps = 0;
    let term = loop {
        let remaining = config.t_end - state.t;
        if remaining <= 1e-12 * config.t_end.abs().max(1.0) {
            break Termination::completed(state.t);
        }
        let speed = max_speed(&state).max(1e-3);
        let mut dt = config.cfl * state.grid.dz() / speed;
        if dt >= remaining {
            dt = remaining;
        } else if remaining - dt < 0.25 * dt {
            dt = 0.5 * remaining;
        }
        match rk4(&state, dt, config.margin) {
            Ok(next) => state = next,
            Err(s) => break stop_tag(s, state.t),
        }
        steps += 1;
        let mut stop = None;
        if state.w.iter().chain(&state.w_t).any(|v| !v.is_finite()) {
            stop = Some(Termination::with(TerminationReason::Nan, state.t, "non-finite value"));
        } else if state.max_abs_w() > config.blowup {
            stop = Some(Termination::with(TerminationReason::NormBlowup, state.t, "amplitude exceeded bound"));
        } else if let Some(i) = state.psi().iter().position(|&p| p <= 0.0) {
            stop = Some(Termination::with(
                TerminationReason::SupportHitCollar,
                state.t,
                format!("psi <= 0 at z = {}", state.grid.points()[i]),
            ));
        }
        if stop.is_some() || steps % every == 0 {
            snaps.push(state.clone());
        }
        if let Some(t) = stop {
            break t;
        }
    };
    if snaps.last().map(|s| s.t) != Some(state.t) {
        snaps.push(state);
    }
    done(snaps, term, steps)
}
