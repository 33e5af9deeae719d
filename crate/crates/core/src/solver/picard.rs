//! Picard iteration: each iterate solves the linear wave equation whose
//! coefficients are frozen from the previous iterate,
//!
//! ```text
//! (1 + p^2) phi_tt - 2 q p phi_tr - (1 - q^2) phi_rr - (1 + p^2 - q^2) phi_r / r = 0,
//! ```
//!
//! with `p = Q_r + eps_r`, `q = eps_t` of the previous iterate and the
//! first iterate frozen at the background (`eps = 0`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BackgroundCoeffs;
use crate::solver::{max_char_speed, RadialState};
use crate::stencil::{d1, trapezoid};
use crate::symbol::{radial_slack, DEFAULT_MARGIN};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PicardConfig {
    pub t_end: f64,
    pub cfl: f64,
    pub margin: f64,
    pub k_max: usize,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            t_end: 0.5,
            cfl: 0.4,
            margin: DEFAULT_MARGIN,
            k_max: 8,
        }
    }
}

/// Space-time history of one iterate on the fixed time levels.
#[derive(Clone, Debug)]
struct History {
    eps: Vec<Vec<f64>>,
    eps_t: Vec<Vec<f64>>,
    eps_tt: Vec<Vec<f64>>,
}

impl History {
    fn zero(levels: usize, n: usize) -> Self {
        let z = vec![vec![0.0; n]; levels];
        Self {
            eps: z.clone(),
            eps_t: z.clone(),
            eps_tt: z,
        }
    }

    /// `(eps, eps_t)` at level `j` plus `theta * dt`, `theta` in {0, 1/2, 1},
    /// by cubic Hermite interpolation.
    fn at(&self, j: usize, half: bool, dt: f64) -> (Vec<f64>, Vec<f64>) {
        if !half {
            return (self.eps[j].clone(), self.eps_t[j].clone());
        }
        let k = dt / 8.0;
        let n = self.eps[j].len();
        let e = (0..n)
            .map(|i| 0.5 * (self.eps[j][i] + self.eps[j + 1][i]) + k * (self.eps_t[j][i] - self.eps_t[j + 1][i]))
            .collect();
        let et = (0..n)
            .map(|i| {
                0.5 * (self.eps_t[j][i] + self.eps_t[j + 1][i]) + k * (self.eps_tt[j][i] - self.eps_tt[j + 1][i])
            })
            .collect();
        (e, et)
    }
}

#[derive(Clone, Debug)]
pub struct PicardResult {
    /// State of each iterate `k = 1..=k_max` at the final time.
    pub iterates: Vec<RadialState>,
    /// `deltas[k-1] = ||d(phi^k - phi^{k-1})||_{L^2(r dr)}` at the final time.
    pub deltas: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
}

impl PicardResult {
    /// `deltas[k] / deltas[k-1]`, skipping pairs whose denominator is below
    /// `floor` (where only roundoff remains).
    pub fn ratios(&self, floor: f64) -> Vec<(usize, f64)> {
        (1..self.deltas.len())
            .filter(|&k| self.deltas[k - 1] > floor)
            .map(|k| (k + 1, self.deltas[k] / self.deltas[k - 1]))
            .collect()
    }
}

/// `v_tt` of the linear equation with frozen `(eps_r, eps_t)` from `frozen`.
fn linear_accel(
    v: &[f64],
    v_t: &[f64],
    frozen: &(Vec<f64>, Vec<f64>),
    bg: &BackgroundCoeffs,
    margin: f64,
) -> Result<Vec<f64>> {
    let n = v.len();
    let h = bg.grid().dr();
    let r = bg.grid().points();
    let fr = d1(&frozen.0, h);
    let (i1, i2) = (1.0 / (2.0 * h), 1.0 / (h * h));
    let mut out = vec![0.0; n];
    for i in 0..n {
        let (qr, er, q) = (bg.qr[i], fr[i], frozen.1[i]);
        let p = qr + er;
        let slack = radial_slack(q, p);
        if !(slack >= margin) {
            return Err(Error::NonHyperbolic {
                index: i,
                position: r[i],
                slack,
                margin,
            });
        }
        if i == 0 || i + 1 == n {
            continue;
        }
        let v_r = (v[i + 1] - v[i - 1]) * i1;
        let v_rr = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * i2;
        let v_tr = (v_t[i + 1] - v_t[i - 1]) * i1;
        let l = 1.0 + p * p - q * q;
        // L - L0 without cancellation
        let dl = 2.0 * qr * er + er * er - q * q;
        let num = -q * q * bg.qrr[i] + (1.0 - q * q) * v_rr + (dl * qr + l * v_r) / r[i] + 2.0 * q * p * v_tr;
        out[i] = num / (1.0 + p * p);
    }
    Ok(out)
}

fn solve_linear(
    init: &RadialState,
    prev: &History,
    bg: &BackgroundCoeffs,
    dt: f64,
    steps: usize,
    margin: f64,
) -> Result<History> {
    let n = init.eps.len();
    let mut hist = History::zero(steps + 1, n);
    let (mut u, mut v) = (init.eps.clone(), init.eps_t.clone());
    let axpy = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(x, y)| x + a * y).collect() };
    for j in 0..=steps {
        let here = prev.at(j, false, dt);
        let a1 = linear_accel(&u, &v, &here, bg, margin)?;
        hist.eps[j] = u.clone();
        hist.eps_t[j] = v.clone();
        hist.eps_tt[j] = a1.clone();
        if j == steps {
            break;
        }
        let mid = prev.at(j, true, dt);
        let end = prev.at(j + 1, false, dt);
        let (u2, v2) = (axpy(&u, 0.5 * dt, &v), axpy(&v, 0.5 * dt, &a1));
        let a2 = linear_accel(&u2, &v2, &mid, bg, margin)?;
        let (u3, v3) = (axpy(&u, 0.5 * dt, &v2), axpy(&v, 0.5 * dt, &a2));
        let a3 = linear_accel(&u3, &v3, &mid, bg, margin)?;
        let (u4, v4) = (axpy(&u, dt, &v3), axpy(&v, dt, &a3));
        let a4 = linear_accel(&u4, &v4, &end, bg, margin)?;
        let w = dt / 6.0;
        for i in 0..n {
            u[i] += w * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += w * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        for f in [&mut u, &mut v] {
            f[0] = 0.0;
            f[n - 1] = 0.0;
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t: (j + 1) as f64 * dt });
        }
    }
    Ok(hist)
}

/// `||(d_t f, d_r f)||_{L^2(r dr)}` of the difference of two states.
pub fn energy_difference(a: &RadialState, b: &RadialState) -> f64 {
    let h = a.dr();
    let de: Vec<f64> = a.eps.iter().zip(&b.eps).map(|(x, y)| x - y).collect();
    let dr = d1(&de, h);
    let dens: Vec<f64> = (0..de.len())
        .map(|i| {
            let dt = a.eps_t[i] - b.eps_t[i];
            (dt * dt + dr[i] * dr[i]) * a.r()[i]
        })
        .collect();
    trapezoid(&dens, h).sqrt()
}

/// Runs `k_max` iterates with a fixed time step from the CFL bound of the
/// data.
pub fn picard_iterate(init: &RadialState, bg: &BackgroundCoeffs, config: &PicardConfig) -> Result<PicardResult> {
    let n = init.eps.len();
    let speed = max_char_speed(init, bg)?.max(1.0);
    let steps = ((config.t_end / (config.cfl * init.dr() / speed)).ceil() as usize).max(1);
    let dt = config.t_end / steps as f64;

    let mut prev = History::zero(steps + 1, n);
    let mut prev_state = RadialState {
        t: config.t_end,
        eps: vec![0.0; n],
        eps_t: vec![0.0; n],
        grid: init.grid.clone(),
    };
    let mut iterates = Vec::with_capacity(config.k_max);
    let mut deltas = Vec::with_capacity(config.k_max);
    for _ in 0..config.k_max {
        let hist = solve_linear(init, &prev, bg, dt, steps, config.margin)?;
        let state = RadialState {
            t: config.t_end,
            eps: hist.eps[steps].clone(),
            eps_t: hist.eps_t[steps].clone(),
            grid: init.grid.clone(),
        };
        deltas.push(energy_difference(&state, &prev_state));
        iterates.push(state.clone());
        prev = hist;
        prev_state = state;
    }
    Ok(PicardResult {
        iterates,
        deltas,
        dt,
        steps,
    })
}
