//! Scaled initial data `(eps, eps_t) = (a f(r / lambda), a lambda^{-1} g(r / lambda))`
//! and its size `kappa0`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::profiles::Profile;
use crate::solver::{RadialGrid, RadialState};

/// Trapezoid intervals for the profile norms on `(1, 2)`.
pub const NORM_POINTS: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbationSpec {
    pub lambda: f64,
    pub amplitude: f64,
    pub profile_f: Profile,
    pub profile_g: Profile,
    /// Highest derivative order in `kappa0`.
    pub norm_order: usize,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self {
            lambda: 40.0,
            amplitude: 0.0,
            profile_f: Profile::Bump,
            profile_g: Profile::Zero,
            norm_order: 10,
        }
    }
}

/// `kappa0` and the same norm sum of the data in physical variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    /// `a (sum_{1..N} ||f^(k)|| + sum_{0..N-1} ||g^(k)||)` in `L^2(s ds)` on `(1, 2)`.
    pub kappa0: f64,
    /// `sum_{1..N} ||d_r^k eps|| + sum_{0..N-1} ||d_r^k eps_t||` in `L^2(r dr)`,
    /// which equals `a (sum lambda^{1-k} ||f^(k)|| + sum lambda^{-k} ||g^(k)||)`.
    pub physical: f64,
}

impl PerturbationSpec {
    pub fn kappa(&self) -> KappaReport {
        let n = self.norm_order;
        let nf = self.profile_f.norms(n, NORM_POINTS);
        let ng = self.profile_g.norms(n, NORM_POINTS);
        let a = self.amplitude.abs();
        let l = self.lambda;
        let kappa0 = a * (nf[1..=n].iter().sum::<f64>() + ng[..n].iter().sum::<f64>());
        let physical = a
            * ((1..=n).map(|k| l.powi(1 - k as i32) * nf[k]).sum::<f64>()
                + (0..n).map(|k| l.powi(-(k as i32)) * ng[k]).sum::<f64>());
        KappaReport { kappa0, physical }
    }

    /// The same spec with the amplitude chosen so that `kappa0 = target`.
    pub fn with_kappa(&self, target: f64) -> Self {
        let unit = Self {
            amplitude: 1.0,
            ..self.clone()
        }
        .kappa()
        .kappa0;
        Self {
            amplitude: if unit > 0.0 { target / unit } else { 0.0 },
            ..self.clone()
        }
    }

    /// Largest `|eps_r|` of the data, from the sampled profile.
    pub fn max_slope(&self) -> f64 {
        (0..=1000)
            .map(|i| self.profile_f.derivative(1.0 + i as f64 * 1e-3, 1).abs())
            .fold(0.0, f64::max)
            * self.amplitude.abs()
            / self.lambda
    }
}

/// Samples the data on `grid` and reports `kappa0`. The grid must contain
/// `[lambda, 2 lambda]`.
pub fn make_initial_data(spec: &PerturbationSpec, grid: Arc<RadialGrid>) -> Result<(RadialState, KappaReport)> {
    if !(spec.lambda > 1.0) {
        return Err(Error::Config(format!("lambda must exceed 1, got {}", spec.lambda)));
    }
    if grid.r_min() > spec.lambda || grid.r_max() < 2.0 * spec.lambda {
        return Err(Error::GridTooSmall(format!(
            "[{}, {}] does not contain [{}, {}]",
            grid.r_min(),
            grid.r_max(),
            spec.lambda,
            2.0 * spec.lambda
        )));
    }
    let (a, l) = (spec.amplitude, spec.lambda);
    let state = RadialState::from_fn(
        grid,
        0.0,
        |r| a * spec.profile_f.value(r / l),
        |r| a / l * spec.profile_g.value(r / l),
    )?;
    Ok((state, spec.kappa()))
}

/// Radial grid `[1 + eta, 2 lambda + t_end + 10 dr]` with spacing `dr`.
pub fn grid_for(lambda: f64, t_end: f64, eta: f64, dr: f64) -> Result<Arc<RadialGrid>> {
    Ok(Arc::new(RadialGrid::with_spacing(1.0 + eta, 2.0 * lambda + t_end.max(0.0) + 10.0 * dr, dr)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_is_zero() {
        let spec = PerturbationSpec::default();
        let g = grid_for(spec.lambda, 35.0, 0.25, 0.1).unwrap();
        let (s, k) = make_initial_data(&spec, g).unwrap();
        assert_eq!(k.kappa0, 0.0);
        assert!(s.eps.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn small_grid_is_rejected() {
        let spec = PerturbationSpec::default();
        let g = Arc::new(RadialGrid::new(1.25, 60.0, 100).unwrap());
        assert!(matches!(make_initial_data(&spec, g), Err(Error::GridTooSmall(_))));
    }

    #[test]
    fn with_kappa_hits_target() {
        let spec = PerturbationSpec::default().with_kappa(1e-3);
        assert!((spec.kappa().kappa0 - 1e-3).abs() < 1e-15);
    }
}
