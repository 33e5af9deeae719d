//! The boost `Gamma_1 = t d_r + r d_t`, the scaling `Gamma_2 = t d_t + r d_r`,
//! the null-form factorizations they give, and their commutators with
//! `box = d_t^2 - d_r^2 - (1/r) d_r`.

use serde::{Deserialize, Serialize};

use crate::geometry::BackgroundCoeffs;
use crate::solver::{eps_tt_field, RadialState};
use crate::stencil::{d1, d2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gamma {
    /// `t d_r + r d_t`
    Boost,
    /// `t d_t + r d_r`
    Scaling,
}

impl Gamma {
    #[inline]
    pub fn apply(self, t: f64, r: f64, f_t: f64, f_r: f64) -> f64 {
        match self {
            Gamma::Boost => t * f_r + r * f_t,
            Gamma::Scaling => t * f_t + r * f_r,
        }
    }
}

/// `Gamma eps` on the grid, using the carried `eps_t` and a centered `eps_r`.
pub fn gamma_apply(state: &RadialState, which: Gamma) -> Vec<f64> {
    let e_r = d1(&state.eps, state.dr());
    state
        .r()
        .iter()
        .enumerate()
        .map(|(i, &r)| which.apply(state.t, r, state.eps_t[i], e_r[i]))
        .collect()
}

/// `|r^2 - t^2|` below which the two quotient identities are not evaluated.
pub fn light_cone_exclusion(t: f64, dr: f64, delta1: f64) -> f64 {
    dr.max(t.powf(1.0 - delta1))
}

/// Largest mismatch of each of the three null-form identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NullformResidual {
    /// `eps_r^2 - eps_t^2 = (Gamma_1 + Gamma_2) eps (eps_r - eps_t) / (r + t)`
    pub sum_factor: f64,
    /// `eps_r^2 - eps_t^2 = ((Gamma_2 eps)^2 - (Gamma_1 eps)^2) / (r^2 - t^2)`
    pub quotient: f64,
    /// `f_t g_t - f_r g_r = (Gamma_2 f Gamma_2 g - Gamma_1 f Gamma_1 g) / (t^2 - r^2)`
    /// with `f = eps` and `g` the perturbation of the inverse square root.
    pub bilinear: f64,
}

impl NullformResidual {
    pub fn max(&self) -> f64 {
        self.sum_factor.max(self.quotient).max(self.bilinear)
    }
}

/// Residual of the bilinear identity at one point.
#[inline]
pub fn nullform_pair_residual(t: f64, r: f64, f_t: f64, f_r: f64, g_t: f64, g_r: f64) -> f64 {
    let lhs = f_t * g_t - f_r * g_r;
    let (b2f, b2g) = (Gamma::Scaling.apply(t, r, f_t, f_r), Gamma::Scaling.apply(t, r, g_t, g_r));
    let (b1f, b1g) = (Gamma::Boost.apply(t, r, f_t, f_r), Gamma::Boost.apply(t, r, g_t, g_r));
    (lhs - (b2f * b2g - b1f * b1g) / (t * t - r * r)).abs()
}

/// Evaluates the three identities with the same discrete derivatives on
/// both sides.
pub fn nullform_residual(state: &RadialState, bg: &BackgroundCoeffs, delta1: f64) -> NullformResidual {
    let h = state.dr();
    let t = state.t;
    let e_r = d1(&state.eps, h);
    let e_rr = d2(&state.eps, h);
    let e_tr = d1(&state.eps_t, h);
    let e_tt = eps_tt_field(&state.eps, &state.eps_t, bg);
    let cut = light_cone_exclusion(t, h, delta1);
    let mut out = NullformResidual::default();
    for (i, &r) in state.r().iter().enumerate() {
        let (et, er) = (state.eps_t[i], e_r[i]);
        let lhs = er * er - et * et;
        let g1 = Gamma::Boost.apply(t, r, et, er);
        let g2 = Gamma::Scaling.apply(t, r, et, er);
        out.sum_factor = out.sum_factor.max((lhs - (g1 + g2) * (er - et) / (r + t)).abs());
        if (r * r - t * t).abs() < cut {
            continue;
        }
        out.quotient = out.quotient.max((lhs - (g2 * g2 - g1 * g1) / (r * r - t * t)).abs());

        // g = L^{-1/2} - L0^{-1/2}
        let p = bg.qr[i] + er;
        let l = 1.0 + p * p - et * et;
        let k = -0.5 / (l * l.sqrt());
        let l0 = 1.0 + bg.qr[i] * bg.qr[i];
        let g_t = k * (2.0 * p * e_tr[i] - 2.0 * et * e_tt[i]);
        let g_r = k * (2.0 * p * (bg.qrr[i] + e_rr[i]) - 2.0 * et * e_tr[i])
            + 0.5 / (l0 * l0.sqrt()) * 2.0 * bg.qr[i] * bg.qrr[i];
        out.bilinear = out.bilinear.max(nullform_pair_residual(t, r, et, er, g_t, g_r));
    }
    out
}

/// Space-time lattice around `t0` on which commutators are discretized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorGrid {
    pub t0: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub dr: f64,
    pub dt: f64,
}

/// `max |[Gamma, box] f - rhs|` over interior radii at `t0`, where `rhs` is
/// `-2 box f` for the scaling field and `Gamma_1 f / r^2` for the boost,
/// and every derivative is a centered difference.
pub fn commutator_residual(f: &dyn Fn(f64, f64) -> f64, which: Gamma, g: &CommutatorGrid) -> f64 {
    let n = ((g.r_max - g.r_min) / g.dr).round() as usize + 1;
    let (h, k) = (g.dr, g.dt);
    let r = |i: usize| g.r_min + i as f64 * h;
    let t = |j: usize| g.t0 + (j as f64 - 2.0) * k;
    // five time levels j = 0..5 around t0 (index 2)
    let u: Vec<Vec<f64>> = (0..5).map(|j| (0..n).map(|i| f(t(j), r(i))).collect()).collect();

    let box_at = |v: &Vec<Vec<f64>>, j: usize, i: usize| {
        (v[j + 1][i] - 2.0 * v[j][i] + v[j - 1][i]) / (k * k)
            - (v[j][i + 1] - 2.0 * v[j][i] + v[j][i - 1]) / (h * h)
            - (v[j][i + 1] - v[j][i - 1]) / (2.0 * h * r(i))
    };
    let gamma_at = |v: &Vec<Vec<f64>>, j: usize, i: usize| {
        let v_t = (v[j + 1][i] - v[j - 1][i]) / (2.0 * k);
        let v_r = (v[j][i + 1] - v[j][i - 1]) / (2.0 * h);
        which.apply(t(j), r(i), v_t, v_r)
    };

    // box f on levels 1..=3, Gamma f on levels 1..=3
    let mut bf = vec![vec![0.0; n]; 5];
    let mut gf = vec![vec![0.0; n]; 5];
    for j in 1..4 {
        for i in 1..n - 1 {
            bf[j][i] = box_at(&u, j, i);
            gf[j][i] = gamma_at(&u, j, i);
        }
    }
    let mut worst = 0.0_f64;
    for i in 2..n - 2 {
        let comm = gamma_at(&bf, 2, i) - box_at(&gf, 2, i);
        let rhs = match which {
            Gamma::Scaling => -2.0 * bf[2][i],
            Gamma::Boost => gf[2][i] / (r(i) * r(i)),
        };
        worst = worst.max((comm - rhs).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::RadialGrid;
    use std::sync::Arc;

    #[test]
    fn gamma_at_time_zero() {
        let g = Arc::new(RadialGrid::new(1.0, 3.0, 201).unwrap());
        let s = RadialState::from_fn(g, 0.0, |r| r * r, |r| r.sin()).unwrap();
        let b = gamma_apply(&s, Gamma::Boost);
        let sc = gamma_apply(&s, Gamma::Scaling);
        for (i, &r) in s.r().iter().enumerate() {
            assert!((b[i] - r * r.sin()).abs() < 1e-12);
            assert!((sc[i] - 2.0 * r * r).abs() < 1e-9);
        }
    }

    #[test]
    fn polynomial_at_time_one() {
        let g = Arc::new(RadialGrid::new(1.0, 3.0, 201).unwrap());
        let s = RadialState::from_fn(g, 1.0, |r| r * r, |_| 0.0).unwrap();
        let b = gamma_apply(&s, Gamma::Boost);
        let sc = gamma_apply(&s, Gamma::Scaling);
        for (i, &r) in s.r().iter().enumerate() {
            assert!((sc[i] - 2.0 * r * r).abs() < 1e-9);
            assert!((b[i] - 2.0 * r).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_field_commutes() {
        let g = CommutatorGrid {
            t0: 1.0,
            r_min: 2.0,
            r_max: 4.0,
            dr: 0.01,
            dt: 0.01,
        };
        for w in [Gamma::Boost, Gamma::Scaling] {
            assert_eq!(commutator_residual(&|_, _| 3.0, w, &g), 0.0);
        }
    }
}
