//! Energy, flux and remainder of the radial energy identity on backward
//! cones.
//!
//! With `m = 1 + p^2`, `tau = -q p / m`, `c = 1 - q^2 / m`, `beta = p^2 / m`,
//! `g = c (1 - beta)` and `D eps = eps_t + tau eps_r`, the density
//! `e = (D eps)^2 + g eps_r^2` satisfies
//!
//! ```text
//! d_t e + (1/r) d_r (r (tau e - 2 g eps_r D eps)) = R - 2 D eps * P eps
//! ```
//!
//! where `P eps = -eps_tt - 2 tau eps_tr + (c - beta) eps_rr + c eps_r / r`.

use serde::{Deserialize, Serialize};

use crate::geometry::BackgroundCoeffs;
use crate::solver::{eps_tt_field, RadialState};
use crate::stencil::{d1, d2};

/// Backward cone `{ |r - x0| < R - t }` in the radial variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRegion {
    pub x0: f64,
    #[serde(rename = "R")]
    pub radius: f64,
}

impl ConeRegion {
    pub fn new(x0: f64, radius: f64) -> Self {
        Self { x0, radius }
    }

    /// `(x0 - R + t, x0 + R - t)`, or `None` once the cone has closed.
    pub fn interval(&self, t: f64) -> Option<(f64, f64)> {
        let h = self.radius - t;
        (h > 0.0).then_some((self.x0 - h, self.x0 + h))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMode {
    /// `T = 0`, `gamma = id`.
    Minkowski,
    /// `T` and `gamma` from the full gradient of `Q + eps`.
    #[default]
    FullGradient,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Full,
    Cone(ConeRegion),
}

/// Pointwise densities of the identity.
#[derive(Clone, Copy, Debug, Default)]
struct Densities {
    e: f64,
    /// radial current `tau e - 2 g eps_r D eps`
    j: f64,
    remainder: f64,
    forcing: f64,
}

fn densities(state: &RadialState, bg: &BackgroundCoeffs, mode: EnergyMode) -> Vec<Densities> {
    let h = state.dr();
    let r = state.r();
    let e_r = d1(&state.eps, h);
    let e_rr = d2(&state.eps, h);
    let e_tr = d1(&state.eps_t, h);
    let e_tt = eps_tt_field(&state.eps, &state.eps_t, bg);
    (0..r.len())
        .map(|i| {
            let (er, et, ri) = (e_r[i], state.eps_t[i], r[i]);
            let (tau, c, beta, g, tau_t, tau_r, g_t, g_r) = match mode {
                EnergyMode::Minkowski => (0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0),
                EnergyMode::FullGradient => {
                    let p = bg.qr[i] + er;
                    let q = et;
                    let m = 1.0 + p * p;
                    let tau = -q * p / m;
                    let c = 1.0 - q * q / m;
                    let beta = p * p / m;
                    let g = c * (1.0 - beta);
                    let tau_p = -q * (1.0 - p * p) / (m * m);
                    let tau_q = -p / m;
                    let g_p = -2.0 * p / (m * m) + 4.0 * p * q * q / (m * m * m);
                    let g_q = -2.0 * q / (m * m);
                    let (p_t, q_t) = (e_tr[i], e_tt[i]);
                    let (p_r, q_r) = (bg.qrr[i] + e_rr[i], e_tr[i]);
                    (
                        tau,
                        c,
                        beta,
                        g,
                        tau_p * p_t + tau_q * q_t,
                        tau_p * p_r + tau_q * q_r,
                        g_p * p_t + g_q * q_t,
                        g_p * p_r + g_q * q_r,
                    )
                }
            };
            let d = et + tau * er;
            let e = d * d + g * er * er;
            let remainder = (tau_r + tau / ri) * e
                + 2.0 * d * ((tau_t + tau * tau_r) - (g_r - c * beta / ri)) * er
                + (g_t + tau * g_r) * er * er
                - 2.0 * g * tau_r * er * er;
            let p_eps = -e_tt[i] - 2.0 * tau * e_tr[i] + (c - beta) * e_rr[i] + c * er / ri;
            Densities {
                e,
                j: tau * e - 2.0 * g * er * d,
                remainder,
                forcing: -2.0 * d * p_eps,
            }
        })
        .collect()
}

/// Linear interpolation of `f` at `x` inside the grid.
fn interp(r: &[f64], h: f64, f: impl Fn(usize) -> f64, x: f64) -> f64 {
    let s = ((x - r[0]) / h).clamp(0.0, (r.len() - 1) as f64);
    let i = (s.floor() as usize).min(r.len() - 2);
    let w = s - i as f64;
    (1.0 - w) * f(i) + w * f(i + 1)
}

/// `int_a^b f r dr` for grid samples `f`, with the two partial cells
/// integrated from interpolated end values.
fn integrate_rdr(r: &[f64], h: f64, f: impl Fn(usize) -> f64, a: f64, b: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let g = |i: usize| f(i) * r[i];
    let fa = interp(r, h, g, a);
    let fb = interp(r, h, g, b);
    let lo = ((a - r[0]) / h).ceil().max(0.0) as usize;
    let hi = (((b - r[0]) / h).floor() as usize).min(r.len() - 1);
    if lo > hi {
        return 0.5 * (fa + fb) * (b - a);
    }
    let mut sum = 0.5 * (fa + g(lo)) * (r[lo] - a) + 0.5 * (g(hi) + fb) * (b - r[hi]);
    for k in lo..hi {
        sum += 0.5 * (g(k) + g(k + 1)) * h;
    }
    sum
}

/// Instantaneous terms of the identity on one snapshot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConeTerms {
    pub energy: f64,
    /// Integrand of the flux through the mantle.
    pub flux_rate: f64,
    pub remainder_rate: f64,
    pub forcing_rate: f64,
}

pub fn cone_terms(
    state: &RadialState,
    bg: &BackgroundCoeffs,
    region: Region,
    mode: EnergyMode,
) -> ConeTerms {
    let r = state.r();
    let h = state.dr();
    let (r0, r1) = (r[0], r[r.len() - 1]);
    let (a, a_dot, b, b_dot) = match region {
        Region::Full => (r0, 0.0, r1, 0.0),
        Region::Cone(c) => match c.interval(state.t) {
            None => return ConeTerms::default(),
            Some((a, b)) => {
                let (a, a_dot) = if a <= r0 { (r0, 0.0) } else { (a, 1.0) };
                let (b, b_dot) = if b >= r1 { (r1, 0.0) } else { (b, -1.0) };
                if a >= b {
                    return ConeTerms::default();
                }
                (a, a_dot, b, b_dot)
            }
        },
    };
    let dens = densities(state, bg, mode);
    let at = |x: f64, f: fn(&Densities) -> f64| interp(r, h, |i| f(&dens[i]), x);
    let (e_a, e_b) = (at(a, |d| d.e), at(b, |d| d.e));
    let (j_a, j_b) = (at(a, |d| d.j), at(b, |d| d.j));
    ConeTerms {
        energy: integrate_rdr(r, h, |i| dens[i].e, a, b),
        flux_rate: -b_dot * b * e_b + a_dot * a * e_a + b * j_b - a * j_a,
        remainder_rate: integrate_rdr(r, h, |i| dens[i].remainder, a, b),
        forcing_rate: integrate_rdr(r, h, |i| dens[i].forcing, a, b),
    }
}

/// `E(t)` over the region with the trapezoid rule in `r dr`.
pub fn energy(state: &RadialState, bg: &BackgroundCoeffs, region: Region, mode: EnergyMode) -> f64 {
    cone_terms(state, bg, region, mode).energy
}

/// Time series of the balance `E(t) - E(0) + H(t) = R(t) + G(t)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyAudit {
    pub t: Vec<f64>,
    pub energy: Vec<f64>,
    pub flux: Vec<f64>,
    pub remainder: Vec<f64>,
    pub forcing: Vec<f64>,
    pub balance_residual: Vec<f64>,
}

impl EnergyAudit {
    pub fn from_terms(t: &[f64], terms: &[ConeTerms]) -> Self {
        let n = t.len();
        let mut out = Self {
            t: t.to_vec(),
            energy: terms.iter().map(|c| c.energy).collect(),
            flux: vec![0.0; n],
            remainder: vec![0.0; n],
            forcing: vec![0.0; n],
            balance_residual: vec![0.0; n],
        };
        for k in 1..n {
            let w = 0.5 * (t[k] - t[k - 1]);
            out.flux[k] = out.flux[k - 1] + w * (terms[k].flux_rate + terms[k - 1].flux_rate);
            out.remainder[k] =
                out.remainder[k - 1] + w * (terms[k].remainder_rate + terms[k - 1].remainder_rate);
            out.forcing[k] = out.forcing[k - 1] + w * (terms[k].forcing_rate + terms[k - 1].forcing_rate);
        }
        if n > 0 {
            let e0 = out.energy[0];
            for k in 0..n {
                out.balance_residual[k] =
                    (out.energy[k] - e0 + out.flux[k] - out.remainder[k] - out.forcing[k]).abs();
            }
        }
        out
    }

    pub fn max_relative_residual(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        let m = self.balance_residual.iter().fold(0.0_f64, |m, v| m.max(*v));
        if e0 > 0.0 {
            m / e0
        } else {
            m
        }
    }

    pub fn min_flux(&self) -> f64 {
        self.flux.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Runs the cone audit over time-ordered snapshots.
pub fn energy_audit(
    snapshots: &[RadialState],
    bg: &BackgroundCoeffs,
    cone: ConeRegion,
    mode: EnergyMode,
) -> EnergyAudit {
    use rayon::prelude::*;
    let terms: Vec<ConeTerms> = snapshots
        .par_iter()
        .map(|s| cone_terms(s, bg, Region::Cone(cone), mode))
        .collect();
    let t: Vec<f64> = snapshots.iter().map(|s| s.t).collect();
    EnergyAudit::from_terms(&t, &terms)
}
