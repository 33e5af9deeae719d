//! Method-of-lines evolution of the radial perturbation `eps` of the
//! catenoid, `phi = Q + eps`.
//!
//! With `p = Q_r + eps_r`, `q = eps_t`, `L = 1 + p^2 - q^2` and
//! `L0 = 1 + Q_r^2`, the equation reads
//!
//! ```text
//! box eps = sqrt(L) * (null_time + null_space + second_order + lower_order) + background
//! ```
//!
//! where `box = d_t^2 - d_r^2 - (1/r) d_r`. `null_time` contains `eps_tt`
//! linearly; the kernel moves it to the left and divides by `(1 + p^2) / L`.
//! Every group is written so that it is exactly zero in floating point
//! wherever `eps` vanishes locally.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, DiagnosticsConfig, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::geometry::{BackgroundCoeffs, PointCoeffs};
use crate::jet::Scalar;
use crate::solver::state::RadialState;
use crate::solver::trajectory::{Termination, TerminationReason, Trajectory};
use crate::symbol::{graph_radial_speeds, radial_slack, DEFAULT_MARGIN};

const PAR_MIN_LEN: usize = 1024;

/// `eps_tt` at one interior point from the local derivatives.
#[inline]
pub fn eps_tt_point<S: Scalar>(c: &PointCoeffs, e_r: S, e_rr: S, e_t: S, e_tr: S) -> S {
    let p = e_r + c.qr;
    let l = p * p + 1.0 - e_t * e_t;
    let s = l.sqrt();
    let inv_ls = S::cst(1.0) / (l * s);
    let inv_l0s0 = 1.0 / (c.l0 * c.s0);

    // d_t of the root, eps_tt part moved to the left
    let null_time = e_t * p * e_tr * inv_ls;
    let l_r = p * (e_rr + c.qrr) * 2.0 - e_t * e_tr * 2.0;
    let null_space = e_r * (l_r * inv_ls - S::cst(2.0 * c.qr * c.qrr * inv_l0s0)) * -0.5;
    let second_order =
        (e_rr * c.c2 + e_r * c.c21 + (e_r * e_rr - e_t * e_tr) * c.c1) * inv_ls;
    let lower_order = e_r * c.c3 + (inv_ls + -inv_l0s0) * c.c4;
    let background = (s + -c.s0) * (c.qr * c.c3);

    let rhs = e_rr + e_r * (1.0 / c.r) + s * (null_time + null_space + second_order + lower_order)
        + background;
    rhs * l / (p * p + 1.0)
}

/// `eps_tt` on the whole grid from generic samples. The two end values are 0.
pub fn eps_tt_field<S>(eps: &[S], eps_t: &[S], bg: &BackgroundCoeffs) -> Vec<S>
where
    S: Scalar + Send + Sync,
{
    let n = eps.len();
    let h = bg.grid().dr();
    let (i1, i2) = (1.0 / (2.0 * h), 1.0 / (h * h));
    (0..n)
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .map(|i| {
            if i == 0 || i + 1 == n {
                return S::cst(0.0);
            }
            let e_r = (eps[i + 1] - eps[i - 1]) * i1;
            let e_rr = (eps[i + 1] - eps[i] * 2.0 + eps[i - 1]) * i2;
            let e_tr = (eps_t[i + 1] - eps_t[i - 1]) * i1;
            eps_tt_point(&bg.point(i), e_r, e_rr, eps_t[i], e_tr)
        })
        .collect()
}

fn check_shape(state: &RadialState, bg: &BackgroundCoeffs) -> Result<()> {
    if state.eps.len() != bg.len() || state.grid.dr() != bg.grid().dr() {
        return Err(Error::Shape(format!(
            "state on {} points, background on {}",
            state.eps.len(),
            bg.len()
        )));
    }
    Ok(())
}

/// Slack `(1 + phi_r^2 - phi_t^2) / (1 + phi_r^2)` at every grid point, with
/// `phi = Q + eps`.
pub fn slack_field(eps: &[f64], eps_t: &[f64], bg: &BackgroundCoeffs) -> Vec<f64> {
    let e_r = crate::stencil::d1(eps, bg.grid().dr());
    (0..eps.len())
        .map(|i| radial_slack(eps_t[i], bg.qr[i] + e_r[i]))
        .collect()
}

/// Smallest slack and the index where it occurs.
pub fn min_slack(state: &RadialState, bg: &BackgroundCoeffs) -> (f64, usize) {
    slack_field(&state.eps, &state.eps_t, bg)
        .into_iter()
        .enumerate()
        .fold((f64::INFINITY, 0), |(m, j), (i, s)| if s < m || s.is_nan() { (s, i) } else { (m, j) })
}

fn hyperbolicity(eps: &[f64], eps_t: &[f64], bg: &BackgroundCoeffs, t: f64, margin: f64) -> Result<()> {
    let slack = slack_field(eps, eps_t, bg);
    let (index, worst) = slack
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |(j, m), (i, s)| if s < m || s.is_nan() { (i, s) } else { (j, m) });
    if worst.is_nan() {
        return Err(Error::NonFinite { t });
    }
    if worst < margin {
        return Err(Error::NonHyperbolic {
            index,
            position: bg.grid().points()[index],
            slack: worst,
            margin,
        });
    }
    Ok(())
}

/// `eps_tt` for the current state, after checking hyperbolicity with the
/// default margin.
pub fn assemble_rhs(state: &RadialState, bg: &BackgroundCoeffs) -> Result<Vec<f64>> {
    assemble_rhs_with_margin(state, bg, DEFAULT_MARGIN)
}

pub fn assemble_rhs_with_margin(
    state: &RadialState,
    bg: &BackgroundCoeffs,
    margin: f64,
) -> Result<Vec<f64>> {
    check_shape(state, bg)?;
    hyperbolicity(&state.eps, &state.eps_t, bg, state.t, margin)?;
    Ok(eps_tt_field(&state.eps, &state.eps_t, bg))
}

/// Largest `|c|` over the grid of the two radial characteristic speeds.
pub fn max_char_speed(state: &RadialState, bg: &BackgroundCoeffs) -> Result<f64> {
    let e_r = crate::stencil::d1(&state.eps, bg.grid().dr());
    let mut m = 0.0_f64;
    for i in 0..state.eps.len() {
        let (lo, hi) = graph_radial_speeds(state.eps_t[i], bg.qr[i] + e_r[i])?;
        m = m.max(lo.abs()).max(hi.abs());
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepOptions {
    pub cfl: f64,
    pub margin: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            margin: DEFAULT_MARGIN,
        }
    }
}

pub fn step(state: &RadialState, bg: &BackgroundCoeffs, dt: f64) -> Result<RadialState> {
    step_with(state, bg, dt, &StepOptions::default())
}

/// One classical Runge-Kutta step of `(eps, eps_t)` with the ends held at 0.
pub fn step_with(
    state: &RadialState,
    bg: &BackgroundCoeffs,
    dt: f64,
    opts: &StepOptions,
) -> Result<RadialState> {
    check_shape(state, bg)?;
    let speed = max_char_speed(state, bg)?;
    let limit = opts.cfl * state.dr() / speed.max(f64::MIN_POSITIVE);
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit });
    }
    let t = state.t;
    let (u, v) = (&state.eps, &state.eps_t);
    let n = u.len();
    let axpy = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> {
        x.iter().zip(y).map(|(x, y)| x + a * y).collect()
    };
    let rhs = |e: &[f64], et: &[f64], tt: f64| -> Result<Vec<f64>> {
        hyperbolicity(e, et, bg, tt, opts.margin)?;
        Ok(eps_tt_field(e, et, bg))
    };

    let a1 = rhs(u, v, t)?;
    let (u2, v2) = (axpy(u, 0.5 * dt, v), axpy(v, 0.5 * dt, &a1));
    let a2 = rhs(&u2, &v2, t + 0.5 * dt)?;
    let (u3, v3) = (axpy(u, 0.5 * dt, &v2), axpy(v, 0.5 * dt, &a2));
    let a3 = rhs(&u3, &v3, t + 0.5 * dt)?;
    let (u4, v4) = (axpy(u, dt, &v3), axpy(v, dt, &a3));
    let a4 = rhs(&u4, &v4, t + dt)?;

    let w = dt / 6.0;
    let mut eps: Vec<f64> = (0..n)
        .map(|i| u[i] + w * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]))
        .collect();
    let mut eps_t: Vec<f64> = (0..n)
        .map(|i| v[i] + w * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]))
        .collect();
    for f in [&mut eps, &mut eps_t] {
        f[0] = 0.0;
        f[n - 1] = 0.0;
    }
    let next = RadialState {
        t: t + dt,
        eps,
        eps_t,
        grid: state.grid.clone(),
    };
    if !next.is_finite() {
        return Err(Error::NonFinite { t: next.t });
    }
    Ok(next)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub cfl: f64,
    pub margin: f64,
    /// Record a snapshot every this many steps (the final state is always kept).
    pub record_every: usize,
    /// Stop with `norm_blowup` once the energy exceeds this multiple of its initial value.
    pub blowup_factor: f64,
    /// Stop with `support_hit_collar` when the solution reaches the innermost points.
    pub collar_guard: bool,
    pub collar_points: usize,
    /// Support threshold relative to the initial maximum amplitude.
    pub support_threshold_rel: f64,
    pub diagnostics: DiagnosticsConfig,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            cfl: 0.4,
            margin: DEFAULT_MARGIN,
            record_every: 10,
            blowup_factor: 1e6,
            collar_guard: true,
            collar_points: 3,
            support_threshold_rel: 1e-9,
            diagnostics: DiagnosticsConfig::default(),
        }
    }
}

impl EvolveConfig {
    pub fn step_options(&self) -> StepOptions {
        StepOptions {
            cfl: self.cfl,
            margin: self.margin,
        }
    }
}

/// Plain `int (eps_t^2 + eps_r^2) r dr`, used as the blow-up monitor.
pub fn monitor_energy(state: &RadialState) -> f64 {
    let r = state.r();
    let e_r = crate::stencil::d1(&state.eps, state.dr());
    let dens: Vec<f64> = (0..r.len())
        .map(|i| (state.eps_t[i] * state.eps_t[i] + e_r[i] * e_r[i]) * r[i])
        .collect();
    crate::stencil::trapezoid(&dens, state.dr())
}

/// Snapshots and termination, without diagnostics.
pub fn integrate(
    init: &RadialState,
    bg: &BackgroundCoeffs,
    config: &EvolveConfig,
) -> (Vec<RadialState>, Termination, usize) {
    let mut snaps = vec![init.clone()];
    if let Err(e) = check_shape(init, bg) {
        return (snaps, Termination::with(TerminationReason::Nan, init.t, e.to_string()), 0);
    }
    if !init.is_finite() {
        return (snaps, Termination::with(TerminationReason::Nan, init.t, "initial data not finite"), 0);
    }
    if let Err(e) = hyperbolicity(&init.eps, &init.eps_t, bg, init.t, config.margin) {
        return (
            snaps,
            Termination::with(TerminationReason::HyperbolicityLost, init.t, e.to_string()),
            0,
        );
    }

    let opts = config.step_options();
    let e0 = monitor_energy(init);
    let threshold = config.support_threshold_rel * init.max_amplitude();
    let guard = config.collar_guard && threshold > 0.0;
    let every = config.record_every.max(1);
    let dr = init.dr();

    let mut state = init.clone();
    let mut steps = 0;
    let termination = loop {
        let remaining = config.t_end - state.t;
        if remaining <= 1e-12 * config.t_end.abs().max(1.0) {
            break Termination::completed(state.t);
        }
        let speed = match max_char_speed(&state, bg) {
            Ok(s) => s,
            Err(e) => break Termination::with(TerminationReason::HyperbolicityLost, state.t, e.to_string()),
        };
        let mut dt = opts.cfl * dr / speed.max(f64::MIN_POSITIVE);
        if dt >= remaining {
            dt = remaining;
        } else if remaining - dt < 0.25 * dt {
            // split the tail so the last step is not tiny
            dt = 0.5 * remaining;
        }
        match step_with(&state, bg, dt, &opts) {
            Ok(next) => state = next,
            Err(Error::NonFinite { .. }) => {
                break Termination::with(TerminationReason::Nan, state.t, "non-finite value")
            }
            Err(e) => break Termination::with(TerminationReason::HyperbolicityLost, state.t, e.to_string()),
        }
        steps += 1;

        let mut stop = None;
        if e0 > 0.0 && monitor_energy(&state) > config.blowup_factor * e0 {
            stop = Some(Termination::with(TerminationReason::NormBlowup, state.t, "energy exceeded bound"));
        } else if guard {
            let k = config.collar_points.min(state.eps.len() - 2);
            let hit = (1..=k).any(|i| state.eps[i].abs().max(state.eps_t[i].abs()) > threshold);
            if hit {
                stop = Some(Termination::with(
                    TerminationReason::SupportHitCollar,
                    state.t,
                    format!("support reached r = {}", state.r()[k]),
                ));
            }
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
    (snaps, termination, steps)
}

/// Runs to `t_end` or the first termination condition; diagnostics are
/// computed for every recorded snapshot.
pub fn evolve(
    init: &RadialState,
    bg: &BackgroundCoeffs,
    config: &EvolveConfig,
) -> Trajectory<RadialState, DiagnosticsRecord> {
    let (snapshots, termination, steps) = integrate(init, bg, config);
    let threshold = config.support_threshold_rel * init.max_amplitude();
    let records = diagnostics::records_for(&snapshots, bg, &config.diagnostics, threshold);
    Trajectory {
        snapshots,
        records,
        termination,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::RadialGrid;
    use std::sync::Arc;

    fn catenoid(r0: f64, r1: f64, n: usize) -> BackgroundCoeffs {
        crate::geometry::background_coeffs(Arc::new(RadialGrid::new(r0, r1, n).unwrap())).unwrap()
    }

    #[test]
    fn zero_state_is_exactly_static() {
        let bg = catenoid(1.25, 200.0, 4000);
        let s = RadialState::zeros(bg.grid().clone());
        let rhs = assemble_rhs(&s, &bg).unwrap();
        assert!(rhs.iter().all(|&v| v == 0.0));
        let mut cur = s;
        for _ in 0..5 {
            cur = step(&cur, &bg, 0.01).unwrap();
        }
        assert!(cur.eps.iter().chain(&cur.eps_t).all(|&v| v == 0.0));
    }

    #[test]
    fn large_step_violates_cfl() {
        let g = Arc::new(RadialGrid::new(1.0, 11.0, 101).unwrap());
        let bg = BackgroundCoeffs::flat(g.clone());
        let s = RadialState::zeros(g);
        assert!(matches!(step(&s, &bg, 1.0), Err(Error::Cfl { .. })));
    }

    #[test]
    fn non_hyperbolic_data_reports_the_worst_point() {
        let g = Arc::new(RadialGrid::new(1.0, 11.0, 101).unwrap());
        let bg = BackgroundCoeffs::flat(g.clone());
        let s = RadialState::from_fn(g, 0.0, |_| 0.0, |r| if (r - 5.0).abs() < 0.05 { 2.0 } else { 0.0 })
            .unwrap();
        match assemble_rhs(&s, &bg) {
            Err(Error::NonHyperbolic { position, slack, .. }) => {
                assert!((position - 5.0).abs() < 0.2);
                assert!(slack < 0.0);
            }
            other => panic!("{other:?}"),
        }
        let cfg = EvolveConfig::default();
        let (snaps, term, _) = integrate(&s, &bg, &cfg);
        assert_eq!(snaps.len(), 1);
        assert_eq!(term.reason, TerminationReason::HyperbolicityLost);
    }
}
