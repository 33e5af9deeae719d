use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solver::RadialGrid;

/// `(eps, eps_t)` sampled on a radial grid at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub eps: Vec<f64>,
    pub eps_t: Vec<f64>,
    pub grid: Arc<RadialGrid>,
}

impl RadialState {
    pub fn new(t: f64, eps: Vec<f64>, eps_t: Vec<f64>, grid: Arc<RadialGrid>) -> Result<Self> {
        if eps.len() != grid.len() || eps_t.len() != grid.len() {
            return Err(Error::Shape(format!(
                "fields of length {}/{} on a grid of {} points",
                eps.len(),
                eps_t.len(),
                grid.len()
            )));
        }
        let s = Self {
            t,
            eps,
            eps_t,
            grid,
        };
        if !s.is_finite() {
            return Err(Error::NonFinite { t });
        }
        Ok(s)
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let n = grid.len();
        Self {
            t: 0.0,
            eps: vec![0.0; n],
            eps_t: vec![0.0; n],
            grid,
        }
    }

    /// Samples `eps = f(r)`, `eps_t = g(r)`.
    pub fn from_fn(
        grid: Arc<RadialGrid>,
        t: f64,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let eps = grid.points().iter().map(|&r| f(r)).collect();
        let eps_t = grid.points().iter().map(|&r| g(r)).collect();
        Self::new(t, eps, eps_t, grid)
    }

    pub fn r(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn dr(&self) -> f64 {
        self.grid.dr()
    }

    pub fn is_finite(&self) -> bool {
        self.eps.iter().chain(&self.eps_t).all(|v| v.is_finite())
    }

    pub fn max_amplitude(&self) -> f64 {
        self.eps
            .iter()
            .chain(&self.eps_t)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Same data with `eps_t` negated, for time reversal.
    pub fn reversed(&self) -> Self {
        Self {
            t: self.t,
            eps: self.eps.clone(),
            eps_t: self.eps_t.iter().map(|v| -v).collect(),
            grid: self.grid.clone(),
        }
    }
}

/// Uniform grid on `[-z_max, z_max]` for the axially symmetric equation.
#[derive(Clone, Debug, PartialEq)]
pub struct ZGrid {
    z: Vec<f64>,
    dz: f64,
}

impl ZGrid {
    pub fn new(z_max: f64, n: usize) -> Result<Self> {
        if n < 5 || !(z_max > 0.0) {
            return Err(Error::InvalidGrid(format!("z grid with z_max={z_max}, n={n}")));
        }
        let dz = 2.0 * z_max / (n - 1) as f64;
        Ok(Self {
            z: (0..n).map(|i| -z_max + i as f64 * dz).collect(),
            dz,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.z
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Perturbation `w` of the static neck `psi = cosh z + w`.
#[derive(Clone, Debug, PartialEq)]
pub struct CylState {
    pub t: f64,
    pub w: Vec<f64>,
    pub w_t: Vec<f64>,
    pub grid: Arc<ZGrid>,
}

impl CylState {
    pub fn new(t: f64, w: Vec<f64>, w_t: Vec<f64>, grid: Arc<ZGrid>) -> Result<Self> {
        if w.len() != grid.len() || w_t.len() != grid.len() {
            return Err(Error::Shape("cylindrical fields do not match grid".into()));
        }
        Ok(Self { t, w, w_t, grid })
    }

    pub fn zeros(grid: Arc<ZGrid>) -> Self {
        let n = grid.len();
        Self {
            t: 0.0,
            w: vec![0.0; n],
            w_t: vec![0.0; n],
            grid,
        }
    }

    pub fn from_fn(
        grid: Arc<ZGrid>,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let w = grid.points().iter().map(|&z| f(z)).collect();
        let w_t = grid.points().iter().map(|&z| g(z)).collect();
        Self::new(0.0, w, w_t, grid)
    }

    /// `psi = cosh z + w`.
    pub fn psi(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .zip(&self.w)
            .map(|(z, w)| z.cosh() + w)
            .collect()
    }

    pub fn max_abs_w(&self) -> f64 {
        self.w.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}
