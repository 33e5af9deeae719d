//! Second-order finite-difference stencils and trapezoid quadrature on
//! uniform grids.

use crate::jet::Scalar;

/// Highest pure spatial derivative order the repeated stencils support.
pub const MAX_ORDER: usize = 6;

/// First derivative: centered in the interior, second-order one-sided at the
/// two ends.
pub fn d1<S: Scalar>(u: &[S], h: f64) -> Vec<S> {
    let n = u.len();
    if n < 3 {
        return vec![S::cst(0.0); n];
    }
    let inv = 1.0 / (2.0 * h);
    let mut out = Vec::with_capacity(n);
    out.push((u[0] * -3.0 + u[1] * 4.0 - u[2]) * inv);
    for i in 1..n - 1 {
        out.push((u[i + 1] - u[i - 1]) * inv);
    }
    out.push((u[n - 1] * 3.0 - u[n - 2] * 4.0 + u[n - 3]) * inv);
    out
}

/// Second derivative: centered in the interior, second-order one-sided at the
/// two ends.
pub fn d2<S: Scalar>(u: &[S], h: f64) -> Vec<S> {
    let n = u.len();
    if n < 4 {
        return vec![S::cst(0.0); n];
    }
    let inv = 1.0 / (h * h);
    let mut out = Vec::with_capacity(n);
    out.push((u[0] * 2.0 - u[1] * 5.0 + u[2] * 4.0 - u[3]) * inv);
    for i in 1..n - 1 {
        out.push((u[i + 1] - u[i] * 2.0 + u[i - 1]) * inv);
    }
    out.push((u[n - 1] * 2.0 - u[n - 2] * 5.0 + u[n - 3] * 4.0 - u[n - 4]) * inv);
    out
}

/// Pure spatial derivative of the given order built from repeated centered
/// stencils: `d2^(k/2)` for even `k`, `d1 d2^((k-1)/2)` for odd `k`.
pub fn derivative<S: Scalar>(u: &[S], h: f64, order: usize) -> Vec<S> {
    let mut cur = u.to_vec();
    for _ in 0..order / 2 {
        cur = d2(&cur, h);
    }
    if order % 2 == 1 {
        cur = d1(&cur, h);
    }
    cur
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

/// `sqrt(int u^2 r dr)` by the trapezoid rule.
pub fn l2_rdr(u: &[f64], r: &[f64], h: f64) -> f64 {
    let w: Vec<f64> = u.iter().zip(r).map(|(u, r)| u * u * r).collect();
    trapezoid(&w, h).max(0.0).sqrt()
}

pub fn linf(u: &[f64]) -> f64 {
    u.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}
