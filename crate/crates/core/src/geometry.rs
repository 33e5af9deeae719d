//! Closed-form catenoid profile `Q(r) = log(r + sqrt(r^2 - 1))` and the
//! background coefficient functions of the perturbation equation.
//!
//! Every coefficient is an exact expression in `r` obtained by
//! differentiating `Q`; none is truncated to its leading power.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::RadialGrid;

/// Height and derivatives of the upper catenoid sheet at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatenoidPoint {
    pub r: f64,
    pub q: f64,
    pub q_r: f64,
    pub q_rr: f64,
    /// Set at the collar `r = 1`, where `q_r` and `q_rr` are unbounded.
    pub singular: bool,
}

pub fn catenoid_profile(r: f64) -> Result<CatenoidPoint> {
    if !(r >= 1.0) {
        return Err(Error::Domain { r });
    }
    if r == 1.0 {
        return Ok(CatenoidPoint {
            r,
            q: 0.0,
            q_r: f64::INFINITY,
            q_rr: f64::NEG_INFINITY,
            singular: true,
        });
    }
    let w = (r * r - 1.0).sqrt();
    Ok(CatenoidPoint {
        r,
        q: r.acosh(),
        q_r: 1.0 / w,
        q_rr: -r / (w * w * w),
        singular: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Background {
    Catenoid,
    /// `Q = 0`: the plane, where the perturbation equation is the radial
    /// membrane equation.
    Flat,
}

/// Background coefficients at a single grid point.
#[derive(Clone, Copy, Debug)]
pub struct PointCoeffs {
    pub r: f64,
    pub qr: f64,
    pub qrr: f64,
    /// `1 + Q_r^2`
    pub l0: f64,
    /// `sqrt(1 + Q_r^2)`
    pub s0: f64,
    /// `-Q_r`, multiplies `(e_r e_rr - e_t e_tr) / L^{3/2}`
    pub c1: f64,
    /// `-Q_r^2`, multiplies `e_rr / L^{3/2}`
    pub c2: f64,
    /// `-Q_r Q_rr`, multiplies `e_r / L^{3/2}`
    pub c21: f64,
    /// `d/dr (1 + Q_r^2)^{-1/2}`
    pub c3: f64,
    /// `-Q_r^2 Q_rr`, multiplies `L^{-3/2} - L0^{-3/2}`
    pub c4: f64,
}

/// Background coefficient arrays on a radial grid.
#[derive(Clone, Debug)]
pub struct BackgroundCoeffs {
    grid: Arc<RadialGrid>,
    kind: Background,
    pub qr: Vec<f64>,
    pub qrr: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub c21: Vec<f64>,
    pub c3: Vec<f64>,
    pub c4: Vec<f64>,
    /// `(1 + Q_r^2)^{-1/2} = sqrt(r^2 - 1) / r` on the catenoid.
    pub sqrt_factor: Vec<f64>,
    l0: Vec<f64>,
    s0: Vec<f64>,
}

/// Coefficients for the catenoid background. Every grid point must lie
/// strictly outside the collar.
pub fn background_coeffs(grid: Arc<RadialGrid>) -> Result<BackgroundCoeffs> {
    if let Some(&r) = grid.points().iter().find(|&&r| r <= 1.0) {
        return Err(Error::Domain { r });
    }
    let n = grid.len();
    let mut b = BackgroundCoeffs::zeros(grid.clone(), Background::Catenoid, n);
    for (i, &r) in grid.points().iter().enumerate() {
        let p = catenoid_profile(r)?;
        let w2 = r * r - 1.0;
        let w = w2.sqrt();
        b.qr[i] = p.q_r;
        b.qrr[i] = p.q_rr;
        b.l0[i] = 1.0 + p.q_r * p.q_r;
        b.s0[i] = b.l0[i].sqrt();
        b.sqrt_factor[i] = w / r;
        b.c1[i] = -p.q_r;
        b.c2[i] = -p.q_r * p.q_r;
        b.c21[i] = -p.q_r * p.q_rr;
        b.c3[i] = 1.0 / (r * r * w);
        b.c4[i] = r / (w2 * w2 * w);
    }
    Ok(b)
}

impl BackgroundCoeffs {
    fn zeros(grid: Arc<RadialGrid>, kind: Background, n: usize) -> Self {
        Self {
            grid,
            kind,
            qr: vec![0.0; n],
            qrr: vec![0.0; n],
            c1: vec![0.0; n],
            c2: vec![0.0; n],
            c21: vec![0.0; n],
            c3: vec![0.0; n],
            c4: vec![0.0; n],
            sqrt_factor: vec![1.0; n],
            l0: vec![1.0; n],
            s0: vec![1.0; n],
        }
    }

    pub fn flat(grid: Arc<RadialGrid>) -> Self {
        let n = grid.len();
        Self::zeros(grid, Background::Flat, n)
    }

    pub fn new(kind: Background, grid: Arc<RadialGrid>) -> Result<Self> {
        match kind {
            Background::Catenoid => background_coeffs(grid),
            Background::Flat => Ok(Self::flat(grid)),
        }
    }

    pub fn kind(&self) -> Background {
        self.kind
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.qr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qr.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> PointCoeffs {
        PointCoeffs {
            r: self.grid.points()[i],
            qr: self.qr[i],
            qrr: self.qrr[i],
            l0: self.l0[i],
            s0: self.s0[i],
            c1: self.c1[i],
            c2: self.c2[i],
            c21: self.c21[i],
            c3: self.c3[i],
            c4: self.c4[i],
        }
    }

    /// Pointwise `Delta Q + sqrt(1 + Q_r^2) Q_r d_r (1 + Q_r^2)^{-1/2}`,
    /// which vanishes because `Q` is a static solution.
    pub fn static_residual(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .enumerate()
            .map(|(i, &r)| self.qrr[i] + self.qr[i] / r + self.s0[i] * self.qr[i] * self.c3[i])
            .collect()
    }

    /// Measured envelope constants `max r^3 |c3|` and `max r^4 |c4|`.
    pub fn envelope_constants(&self) -> (f64, f64) {
        self.grid
            .points()
            .iter()
            .enumerate()
            .fold((0.0_f64, 0.0_f64), |(a, b), (i, &r)| {
                (a.max(r.powi(3) * self.c3[i].abs()), b.max(r.powi(4) * self.c4[i].abs()))
            })
    }
}
