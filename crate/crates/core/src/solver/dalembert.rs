//! Exact half-line solutions of `u_tt = u_rr` and a finite-difference line
//! solver to compare them with.

use crate::error::{Error, Result};

/// Composite Simpson rule with `panels` (rounded up to even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Odd extension of a profile given on `r > 0`.
#[inline]
fn odd(f: &impl Fn(f64) -> f64, x: f64) -> f64 {
    if x > 0.0 {
        f(x)
    } else if x < 0.0 {
        -f(-x)
    } else {
        0.0
    }
}

/// `u(t, r) = (U0(r - t) + U0(r + t)) / 2 + (1/2) int_{r-t}^{r+t} U1` with
/// `U0`, `U1` the odd extensions of `u0`, `u1`. The integral is split at
/// the origin and integrated by Simpson's rule with cells no wider than
/// `quad_step`.
pub fn dalembert_reference(
    u0: impl Fn(f64) -> f64,
    u1: impl Fn(f64) -> f64,
    t: f64,
    r: &[f64],
    quad_step: f64,
) -> Vec<f64> {
    let integral = |a: f64, b: f64| {
        let panels = |x: f64, y: f64| ((y - x).abs() / quad_step).ceil() as usize;
        if a < 0.0 && b > 0.0 {
            simpson(|s| odd(&u1, s), a, 0.0, panels(a, 0.0)) + simpson(|s| odd(&u1, s), 0.0, b, panels(0.0, b))
        } else {
            simpson(|s| odd(&u1, s), a, b, panels(a, b))
        }
    };
    r.iter()
        .map(|&x| 0.5 * (odd(&u0, x - t) + odd(&u0, x + t)) + 0.5 * integral(x - t, x + t))
        .collect()
}

/// `u_tt = u_xx` on `[0, x_max]` with `u = 0` at both ends, centered
/// differences in space and classical Runge-Kutta in time.
#[derive(Clone, Debug)]
pub struct LineWave {
    pub x: Vec<f64>,
    pub dx: f64,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
    pub t: f64,
}

impl LineWave {
    pub fn new(x_max: f64, n: usize, u0: impl Fn(f64) -> f64, u1: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 5 || !(x_max > 0.0) {
            return Err(Error::InvalidGrid(format!("line grid with x_max={x_max}, n={n}")));
        }
        let dx = x_max / (n - 1) as f64;
        let x: Vec<f64> = (0..n).map(|i| i as f64 * dx).collect();
        let mut u: Vec<f64> = x.iter().map(|&v| u0(v)).collect();
        let mut u_t: Vec<f64> = x.iter().map(|&v| u1(v)).collect();
        for f in [&mut u, &mut u_t] {
            f[0] = 0.0;
            f[n - 1] = 0.0;
        }
        Ok(Self { x, dx, u, u_t, t: 0.0 })
    }

    fn accel(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let k = 1.0 / (self.dx * self.dx);
        (0..n)
            .map(|i| if i == 0 || i + 1 == n { 0.0 } else { (u[i + 1] - 2.0 * u[i] + u[i - 1]) * k })
            .collect()
    }

    pub fn step(&mut self, dt: f64) {
        let n = self.u.len();
        let (u, v) = (self.u.clone(), self.u_t.clone());
        let comb = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(x, y)| x + a * y).collect() };
        let a1 = self.accel(&u);
        let (u2, v2) = (comb(&u, 0.5 * dt, &v), comb(&v, 0.5 * dt, &a1));
        let a2 = self.accel(&u2);
        let (u3, v3) = (comb(&u, 0.5 * dt, &v2), comb(&v, 0.5 * dt, &a2));
        let a3 = self.accel(&u3);
        let (u4, v4) = (comb(&u, dt, &v3), comb(&v, dt, &a3));
        let a4 = self.accel(&u4);
        let w = dt / 6.0;
        for i in 0..n {
            self.u[i] = u[i] + w * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            self.u_t[i] = v[i] + w * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        self.t += dt;
    }

    /// Advances to `t_end` with steps of at most `cfl * dx`.
    pub fn run_to(&mut self, t_end: f64, cfl: f64) {
        let remaining = t_end - self.t;
        if remaining <= 0.0 {
            return;
        }
        let steps = (remaining / (cfl * self.dx)).ceil() as usize;
        let dt = remaining / steps as f64;
        for _ in 0..steps {
            self.step(dt);
        }
        self.t = t_end;
    }
}
