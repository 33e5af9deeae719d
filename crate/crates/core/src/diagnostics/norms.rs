//! Bootstrap norms, support monitor and discrete Sobolev norms.
//!
//! Mixed derivatives `d_t^a d_r^b eps` come from the Taylor coefficients in
//! time of the semi-discrete flow, obtained by evaluating the right-hand side
//! on truncated power series; the remaining `d_r^b` are repeated centered
//! stencils.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::diagnostics::vector_fields::Gamma;
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::geometry::BackgroundCoeffs;
use crate::jet::Jet;
use crate::solver::{eps_tt_field, RadialState};
use crate::stencil::{derivative, l2_rdr, linf, MAX_ORDER};

const JET: usize = MAX_ORDER + 1;

/// `<t> = sqrt(1 + t^2)`
#[inline]
pub fn japanese(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// `d_t^a d_r^b eps` for `a + b <= order`.
#[derive(Clone, Debug)]
pub struct DerivativeTable {
    order: usize,
    d: Vec<Vec<Vec<f64>>>,
}

impl DerivativeTable {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `d_t^a d_r^b eps` on the grid.
    pub fn get(&self, a: usize, b: usize) -> &[f64] {
        &self.d[a][b]
    }
}

/// Time Taylor coefficients `e_k`, `k = 0..=order`, of the semi-discrete
/// solution through `state`.
pub fn time_coefficients(state: &RadialState, bg: &BackgroundCoeffs, order: usize) -> Result<Vec<Vec<f64>>> {
    if order > MAX_ORDER {
        return Err(Error::StencilOrder {
            requested: order,
            max: MAX_ORDER,
        });
    }
    let n = state.eps.len();
    let mut e = vec![state.eps.clone(), state.eps_t.clone()];
    for k in 0..order.saturating_sub(1) {
        let u: Vec<Jet<JET>> = (0..n)
            .map(|i| {
                let mut c = [0.0; JET];
                for (j, ej) in e.iter().enumerate() {
                    c[j] = ej[i];
                }
                Jet(c)
            })
            .collect();
        let v: Vec<Jet<JET>> = (0..n)
            .map(|i| {
                let mut c = [0.0; JET];
                for j in 0..e.len() - 1 {
                    c[j] = (j + 1) as f64 * e[j + 1][i];
                }
                Jet(c)
            })
            .collect();
        let f = eps_tt_field(&u, &v, bg);
        let w = 1.0 / ((k + 1) * (k + 2)) as f64;
        e.push(f.iter().map(|j| j.0[k] * w).collect());
    }
    e.truncate(order + 1);
    Ok(e)
}

pub fn derivative_table(state: &RadialState, bg: &BackgroundCoeffs, order: usize) -> Result<DerivativeTable> {
    let e = time_coefficients(state, bg, order)?;
    let h = state.dr();
    let mut d = Vec::with_capacity(order + 1);
    let mut fact = 1.0;
    for (a, ea) in e.iter().enumerate() {
        if a > 0 {
            fact *= a as f64;
        }
        let scaled: Vec<f64> = ea.iter().map(|v| v * fact).collect();
        d.push(
            (0..=order - a)
                .map(|b| derivative(&scaled, h, b))
                .collect::<Vec<_>>(),
        );
    }
    Ok(DerivativeTable { order, d })
}

/// `d_t^a d_r^b (Gamma eps)` by the Leibniz rule.
pub fn boosted_derivative(table: &DerivativeTable, t: f64, r: &[f64], which: Gamma, a: usize, b: usize) -> Vec<f64> {
    let (af, bf) = (a as f64, b as f64);
    let z = vec![0.0; r.len()];
    let get = |x: Option<usize>, y: Option<usize>| match (x, y) {
        (Some(x), Some(y)) => table.get(x, y),
        _ => &z[..],
    };
    let (am, bm) = (a.checked_sub(1), b.checked_sub(1));
    (0..r.len())
        .map(|i| match which {
            // t D(a,b+1) + a D(a-1,b+1) + r D(a+1,b) + b D(a+1,b-1)
            Gamma::Boost => {
                t * table.get(a, b + 1)[i]
                    + af * get(am, Some(b + 1))[i]
                    + r[i] * table.get(a + 1, b)[i]
                    + bf * get(Some(a + 1), bm)[i]
            }
            // t D(a+1,b) + a D(a,b) + r D(a,b+1) + b D(a,b)
            Gamma::Scaling => {
                t * table.get(a + 1, b)[i] + (af + bf) * table.get(a, b)[i] + r[i] * table.get(a, b + 1)[i]
            }
        })
        .collect()
}

/// Unweighted norm sums on one snapshot.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SnapshotNorms {
    /// `sum_{a+b=k} ||d_t^a d_r^b eps||_{L^2(r dr)}`, `k = 1..=N`
    pub plain: Vec<f64>,
    /// `sum_Gamma sum_{a+b=k} ||d_t^a d_r^b Gamma eps||`, `k = 1..=N-1`
    pub boosted: Vec<f64>,
    /// `sum_{1 <= a+b <= min(N/2+2, N)} ||d_t^a d_r^b eps||_inf`
    pub linf: f64,
}

pub fn snapshot_norms(state: &RadialState, bg: &BackgroundCoeffs, order: usize) -> Result<SnapshotNorms> {
    let table = derivative_table(state, bg, order)?;
    let (r, h, t) = (state.r(), state.dr(), state.t);
    let mut out = SnapshotNorms::default();
    for k in 1..=order {
        out.plain.push((0..=k).map(|a| l2_rdr(table.get(a, k - a), r, h)).sum());
    }
    for k in 1..order {
        let mut s = 0.0;
        for a in 0..=k {
            for w in [Gamma::Boost, Gamma::Scaling] {
                s += l2_rdr(&boosted_derivative(&table, t, r, w, a, k - a), r, h);
            }
        }
        out.boosted.push(s);
    }
    let top = (order / 2 + 2).min(order);
    for k in 1..=top {
        out.linf += (0..=k).map(|a| linf(table.get(a, k - a))).sum::<f64>();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BootstrapNorms {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl BootstrapNorms {
    pub fn max(&self) -> f64 {
        self.b1.max(self.b2).max(self.b3)
    }

    /// Sup over recorded snapshots of the weighted sums stored in `records`.
    pub fn from_records(records: &[DiagnosticsRecord], delta: f64) -> Self {
        records.iter().fold(Self::default(), |acc, rec| {
            let w = japanese(rec.t);
            Self {
                b1: acc.b1.max(w.powf(-delta) * rec.plain_norms.iter().sum::<f64>()),
                b2: acc.b2.max(w.powf(-delta) * rec.boosted_norms.iter().sum::<f64>()),
                b3: acc.b3.max(rec.linf_weighted),
            }
        })
    }
}

/// `(B1, B2, B3)` over the snapshots of a trajectory.
pub fn bootstrap_norms(
    snapshots: &[RadialState],
    bg: &BackgroundCoeffs,
    delta: f64,
    order: usize,
) -> Result<BootstrapNorms> {
    use rayon::prelude::*;
    let per: Vec<(f64, SnapshotNorms)> = snapshots
        .par_iter()
        .map(|s| snapshot_norms(s, bg, order).map(|n| (s.t, n)))
        .collect::<Result<_>>()?;
    Ok(per.iter().fold(BootstrapNorms::default(), |acc, (t, n)| {
        let w = japanese(*t);
        BootstrapNorms {
            b1: acc.b1.max(w.powf(-delta) * n.plain.iter().sum::<f64>()),
            b2: acc.b2.max(w.powf(-delta) * n.boosted.iter().sum::<f64>()),
            b3: acc.b3.max(w.sqrt() * n.linf),
        }
    }))
}

/// Smallest and largest radius where `max(|eps|, |eps_t|) > threshold`;
/// `(inf, -inf)` if there is none.
pub fn support_radius(state: &RadialState, threshold: f64) -> (f64, f64) {
    let r = state.r();
    let above = |i: &usize| state.eps[*i].abs().max(state.eps_t[*i].abs()) > threshold;
    let lo = (0..r.len()).find(above).map_or(f64::INFINITY, |i| r[i]);
    let hi = (0..r.len()).rev().find(above).map_or(f64::NEG_INFINITY, |i| r[i]);
    (lo, hi)
}

/// `H^s` norm `(int |u_hat|^2 (1 + xi^2)^s dxi)^{1/2}` of grid samples with
/// spacing `h`, computed by FFT after zero padding to a power of two. At
/// `s = 0` it equals `(h sum u^2)^{1/2}`.
pub fn sobolev_norm(field: &[f64], h: f64, s: i32) -> Result<f64> {
    if s < 0 {
        return Err(Error::Unsupported(format!("negative Sobolev order {s}")));
    }
    if field.is_empty() {
        return Ok(0.0);
    }
    let m = field.len().next_power_of_two();
    let mut buf: Vec<Complex<f64>> = field.iter().map(|&v| Complex::new(v, 0.0)).collect();
    buf.resize(m, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let two_pi = 2.0 * std::f64::consts::PI;
    let sum: f64 = buf
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let kk = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
            let xi = two_pi * kk / (m as f64 * h);
            c.norm_sqr() * (1.0 + xi * xi).powi(s)
        })
        .sum();
    Ok((h * sum / m as f64).sqrt())
}

/// Weighted `L^inf` sum `<t>^{1/2} * snapshot linf`.
pub(crate) fn weighted_linf(t: f64, linf: f64) -> f64 {
    japanese(t).sqrt() * linf
}
