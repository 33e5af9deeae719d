use crate::error::{Error, Result};

/// Uniform radial grid `r_i = r_min + i * dr`, `i = 0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    n: usize,
    dr: f64,
    r: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidGrid(format!("need at least 5 points, got {n}")));
        }
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "bad interval [{r_min}, {r_max}]"
            )));
        }
        let dr = (r_max - r_min) / (n - 1) as f64;
        let r = (0..n).map(|i| r_min + i as f64 * dr).collect();
        Ok(Self {
            r_min,
            r_max,
            n,
            dr,
            r,
        })
    }

    /// Grid with exact spacing `dr` starting at `r_min` and reaching at least
    /// `r_max`.
    pub fn with_spacing(r_min: f64, r_max: f64, dr: f64) -> Result<Self> {
        if !(dr > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dr}")));
        }
        let cells = ((r_max - r_min) / dr - 1e-9).ceil().max(4.0) as usize;
        Self::new(r_min, r_min + cells as f64 * dr, cells + 1)
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self::new(self.r_min, self.r_max, 2 * self.n - 1).expect("refinement of a valid grid")
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn points(&self) -> &[f64] {
        &self.r
    }

    pub fn index_of(&self, r: f64) -> Option<usize> {
        let x = (r - self.r_min) / self.dr;
        let i = x.round();
        ((x - i).abs() < 1e-6 && i >= 0.0 && (i as usize) < self.n).then_some(i as usize)
    }
}
