//! Principal symbol of the quasilinear operator.
//!
//! For a gradient four-vector `X` with `X_hat = X / |X'|` the symbol is
//! `g^{ab} = |X_hat|^2 m^{ab} - X_hat^a X_hat^b` with `m = diag(-1, 1, 1, 1)`.
//! Completing the square in `xi_0` gives
//! `g(xi, xi) = -(xi_0 + T.xi)^2 + gamma(xi, xi)` with
//! `T^j = X_hat^0 X_hat^j` and `gamma^{ij} = (1 - (X_hat^0)^2)(delta^{ij} - X_hat^i X_hat^j)`.
//!
//! Characteristic speeds are propagation velocities: `c` is a speed in the
//! unit direction `n` when plane waves `F(n.x - c t)` are characteristic.

use crate::error::{Error, Result};

/// Default hyperbolicity margin on the normalized slack.
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimeVector {
    pub x0: f64,
    pub x_prime: [f64; 3],
    norm_prime: f64,
}

impl SpacetimeVector {
    pub fn new(x0: f64, x_prime: [f64; 3]) -> Self {
        let norm_prime = x_prime.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self {
            x0,
            x_prime,
            norm_prime,
        }
    }

    /// `X = (phi_t, -phi_x, -phi_y, 1)` for the graph `z = phi(t, x, y)`.
    pub fn from_graph_gradient(phi_t: f64, phi_x: f64, phi_y: f64) -> Self {
        Self::new(phi_t, [-phi_x, -phi_y, 1.0])
    }

    pub fn norm_prime(&self) -> f64 {
        self.norm_prime
    }

    pub fn normalized(&self) -> Result<[f64; 4]> {
        if !(self.norm_prime > 0.0) {
            return Err(Error::DegenerateDirection);
        }
        let k = 1.0 / self.norm_prime;
        Ok([
            self.x0 * k,
            self.x_prime[0] * k,
            self.x_prime[1] * k,
            self.x_prime[2] * k,
        ])
    }
}

/// Symbol `g^{ab}(X)` with its `(T, gamma)` decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    pub g: [[f64; 4]; 4],
    pub t: [f64; 3],
    pub gamma: [[f64; 3]; 3],
    pub x_hat: [f64; 4],
}

pub fn metric_from_gradient(x: &SpacetimeVector) -> Result<Symbol> {
    let xh = x.normalized()?;
    let metric = [-1.0, 1.0, 1.0, 1.0];
    let norm2 = -xh[0] * xh[0] + xh[1] * xh[1] + xh[2] * xh[2] + xh[3] * xh[3];
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let m = if a == b { metric[a] } else { 0.0 };
            g[a][b] = norm2 * m - xh[a] * xh[b];
        }
    }
    let t = [xh[0] * xh[1], xh[0] * xh[2], xh[0] * xh[3]];
    let w = 1.0 - xh[0] * xh[0];
    let mut gamma = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { 1.0 } else { 0.0 };
            gamma[i][j] = w * (d - xh[i + 1] * xh[j + 1]);
        }
    }
    Ok(Symbol {
        g,
        t,
        gamma,
        x_hat: xh,
    })
}

impl Symbol {
    /// `g^{ab} xi_a xi_b`.
    pub fn quadratic_form(&self, xi: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.g[a][b] * xi[a] * xi[b];
            }
        }
        s
    }

    /// `-(xi_0 + T.xi)^2 + gamma(xi, xi)`.
    pub fn completed_square(&self, xi: &[f64; 4]) -> f64 {
        let shift = xi[0] + (0..3).map(|j| self.t[j] * xi[j + 1]).sum::<f64>();
        -shift * shift + self.gamma_form(&[xi[1], xi[2], xi[3]])
    }

    pub fn gamma_form(&self, v: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.gamma[i][j] * v[i] * v[j];
            }
        }
        s
    }

    pub fn t_norm(&self) -> f64 {
        self.t.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Propagation speeds in a direction of the `(x, y)` plane, i.e. the
    /// 2+1 graph symbol with `xi_3 = 0`.
    pub fn characteristic_speeds(&self, dir: [f64; 2]) -> Result<(f64, f64)> {
        if !(self.x_hat[0].abs() < 1.0) {
            return Err(Error::NotTimelike(self.x_hat[0].abs()));
        }
        let n = [dir[0], dir[1], 0.0];
        let gn = self.gamma_form(&n);
        if gn < 0.0 {
            return Err(Error::NotTimelike(self.x_hat[0].abs()));
        }
        let tn = self.t[0] * n[0] + self.t[1] * n[1];
        let root = gn.sqrt();
        Ok((tn - root, tn + root))
    }
}

/// Result of the graph timelike test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Timelike {
    pub is_hyperbolic: bool,
    /// `(1 + phi_x^2 + phi_y^2 - phi_t^2) / (1 + phi_x^2 + phi_y^2)`
    pub slack: f64,
}

pub fn check_timelike(grad_phi: (f64, f64, f64), margin: f64) -> Timelike {
    let (pt, px, py) = grad_phi;
    let m = 1.0 + px * px + py * py;
    let slack = (m - pt * pt) / m;
    Timelike {
        is_hyperbolic: slack >= margin,
        slack,
    }
}

/// Normalized slack for a radial gradient `(phi_t, phi_r)`.
#[inline]
pub fn radial_slack(phi_t: f64, phi_r: f64) -> f64 {
    let m = 1.0 + phi_r * phi_r;
    (m - phi_t * phi_t) / m
}

/// Propagation speeds of the radial graph equation at gradient
/// `(phi_t, phi_r)`: `(-phi_t phi_r +- sqrt(1 + phi_r^2 - phi_t^2)) / (1 + phi_r^2)`.
#[inline]
pub fn graph_radial_speeds(phi_t: f64, phi_r: f64) -> Result<(f64, f64)> {
    let m = 1.0 + phi_r * phi_r;
    let l = m - phi_t * phi_t;
    if !(l > 0.0) {
        return Err(Error::NotTimelike((phi_t * phi_t / m).sqrt()));
    }
    let root = l.sqrt();
    let shift = -phi_t * phi_r;
    Ok(((shift - root) / m, (shift + root) / m))
}

/// The three quantities of the two-sided bound on `gamma(n, n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl GammaBounds {
    /// Smallest of `value - lower` and `upper - value`.
    pub fn slack(&self) -> f64 {
        (self.value - self.lower).min(self.upper - self.value)
    }
}

pub fn gamma_bounds_check(symbol: &Symbol, n: [f64; 3]) -> Result<GammaBounds> {
    if !(symbol.x_hat[0].abs() < 1.0) {
        return Err(Error::NotTimelike(symbol.x_hat[0].abs()));
    }
    let n2: f64 = n.iter().map(|v| v * v).sum();
    let tn: f64 = (0..3).map(|k| symbol.t[k] * n[k]).sum();
    let t2: f64 = symbol.t.iter().map(|v| v * v).sum();
    let lower = if t2 > 0.0 {
        (1.0 - t2) * (n2 - tn * tn / t2)
    } else {
        n2
    };
    let upper = (n2.sqrt() - tn.abs()).powi(2);
    Ok(GammaBounds {
        lower,
        value: symbol.gamma_form(&n),
        upper,
    })
}

/// Symbol of the cylindrical equation for `r = psi(t, z, theta)` after
/// dividing by `M = 1 + psi_z^2 + psi_theta^2 / r^2`:
/// `tau^2 - A zeta^2 - B eta^2 - 2 C tau zeta - 2 D tau eta + 2 E zeta eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylSymbol {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub m: f64,
    psi_t: f64,
    psi_z: f64,
    eta: f64,
}

pub fn cylindrical_symbol(psi_t: f64, psi_z: f64, psi_theta_over_r: f64) -> CylSymbol {
    let eta = psi_theta_over_r;
    let m = 1.0 + psi_z * psi_z + eta * eta;
    CylSymbol {
        a: (1.0 + eta * eta - psi_t * psi_t) / m,
        b: (1.0 + psi_z * psi_z - psi_t * psi_t) / m,
        c: psi_t * psi_z / m,
        d: psi_t * eta / m,
        e: eta * psi_z / m,
        m,
        psi_t,
        psi_z,
        eta,
    }
}

impl CylSymbol {
    /// Positive definiteness of the completed-square spatial form
    /// `(A + C^2) zeta^2 + (B + D^2) eta^2 - 2 (E - CD) zeta eta`.
    pub fn is_positive_definite(&self) -> bool {
        let p = self.a + self.c * self.c;
        let q = self.b + self.d * self.d;
        let x = self.e - self.c * self.d;
        p > 0.0 && q > 0.0 && p * q > x * x
    }

    /// `M^4 [(A + C^2)(B + D^2) - (E - CD)^2]`.
    pub fn determinant_scaled(&self) -> f64 {
        let p = self.a + self.c * self.c;
        let q = self.b + self.d * self.d;
        let x = self.e - self.c * self.d;
        self.m.powi(4) * (p * q - x * x)
    }

    /// `(1 + psi_z^2 + eta^2)(1 + eta^2 + psi_z^2 - psi_t^2)^2`.
    pub fn determinant_closed_form(&self) -> f64 {
        let s = 1.0 + self.eta * self.eta + self.psi_z * self.psi_z - self.psi_t * self.psi_t;
        (1.0 + self.psi_z * self.psi_z + self.eta * self.eta) * s * s
    }

    /// `(1 + psi_z^2 + eta^2 - psi_t^2) / M`.
    pub fn slack(&self) -> f64 {
        (self.m - self.psi_t * self.psi_t) / self.m
    }

    /// Propagation speeds in the direction `(n_z, n_eta)`.
    pub fn characteristic_speeds(&self, dir: [f64; 2]) -> Result<(f64, f64)> {
        if !self.is_positive_definite() {
            return Err(Error::NotTimelike(self.psi_t.abs()));
        }
        let [nz, ne] = dir;
        let k = self.c * nz + self.d * ne;
        let disc = k * k + self.a * nz * nz + self.b * ne * ne - 2.0 * self.e * nz * ne;
        let root = disc.max(0.0).sqrt();
        Ok((-k - root, -k + root))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn flat_plane_symbol() {
        let s = metric_from_gradient(&SpacetimeVector::new(0.0, [0.0, 0.0, 1.0])).unwrap();
        assert_eq!(s.t, [0.0; 3]);
        assert_eq!(s.gamma, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        let xi = [0.3, -1.2, 0.7, 0.0];
        let want = -0.09 + 1.44 + 0.49;
        assert!(close(s.quadratic_form(&xi), want, 1e-15));
    }

    #[test]
    fn tilted_gradient_symbol() {
        let a = 0.6;
        let s = metric_from_gradient(&SpacetimeVector::new(a, [0.0, 0.0, 1.0])).unwrap();
        assert!(close(s.t[2], a, 1e-16) && s.t[0] == 0.0 && s.t[1] == 0.0);
        let w = 1.0 - a * a;
        assert!(close(s.gamma[0][0], w, 1e-16));
        assert!(close(s.gamma[1][1], w, 1e-16));
        assert!(close(s.gamma[2][2], 0.0, 1e-16));
    }

    #[test]
    fn degenerate_direction_is_an_error() {
        let r = metric_from_gradient(&SpacetimeVector::new(1.0, [0.0; 3]));
        assert!(matches!(r, Err(Error::DegenerateDirection)));
    }

    #[test]
    fn timelike_examples() {
        let t = check_timelike((0.0, 0.0, 0.0), DEFAULT_MARGIN);
        assert!(t.is_hyperbolic && t.slack == 1.0);
        let t = check_timelike((1.0, 0.0, 0.0), 1e-12);
        assert!(!t.is_hyperbolic && t.slack == 0.0);
        let t = check_timelike((0.5, 1.0, 0.0), DEFAULT_MARGIN);
        assert!(close(t.slack, 0.875, 1e-15));
    }

    #[test]
    fn gamma_bounds_examples() {
        let s = metric_from_gradient(&SpacetimeVector::new(0.0, [0.0, 0.0, 1.0])).unwrap();
        let b = gamma_bounds_check(&s, [1.0, 0.0, 0.0]).unwrap();
        assert_eq!((b.lower, b.value, b.upper), (1.0, 1.0, 1.0));

        let s = metric_from_gradient(&SpacetimeVector::new(0.5, [0.0, 0.0, 1.0])).unwrap();
        let b = gamma_bounds_check(&s, [0.0, 0.0, 1.0]).unwrap();
        assert!(close(b.value, 0.0, 1e-16));
        assert!(close(b.upper, 0.25, 1e-16));
        assert!(close(b.lower, 0.0, 1e-16));
    }

    #[test]
    fn static_catenoid_cylindrical_symbol() {
        let z = 0.8_f64;
        let s = cylindrical_symbol(0.0, z.sinh(), 0.0);
        assert!(close(s.m, z.cosh().powi(2), 1e-14));
        assert!(close(s.a, 1.0 / z.cosh().powi(2), 1e-15));
        assert!(close(s.b, 1.0, 1e-15));
        assert_eq!((s.c, s.d, s.e), (0.0, 0.0, 0.0));
        assert!(s.is_positive_definite());

        let flat = cylindrical_symbol(0.0, 0.0, 0.0);
        assert_eq!((flat.a, flat.b), (1.0, 1.0));
    }

    #[test]
    fn spacelike_cylindrical_data_is_rejected() {
        assert!(!cylindrical_symbol(1.5, 0.5, 0.3).is_positive_definite());
        assert!(!cylindrical_symbol(1.0, 0.0, 0.0).is_positive_definite());
    }

    #[test]
    fn characteristic_speed_examples() {
        let flat = metric_from_gradient(&SpacetimeVector::from_graph_gradient(0.0, 0.0, 0.0)).unwrap();
        for dir in [[1.0, 0.0], [0.0, 1.0], [0.6, 0.8]] {
            let (lo, hi) = flat.characteristic_speeds(dir).unwrap();
            assert!(close(lo, -1.0, 1e-15) && close(hi, 1.0, 1e-15));
        }
        assert_eq!(graph_radial_speeds(0.0, 0.0).unwrap(), (-1.0, 1.0));

        let neck = cylindrical_symbol(0.0, 0.0, 0.0);
        assert_eq!(neck.characteristic_speeds([1.0, 0.0]).unwrap(), (-1.0, 1.0));
        let one = cylindrical_symbol(0.0, 1.0_f64.sinh(), 0.0);
        let (lo, hi) = one.characteristic_speeds([1.0, 0.0]).unwrap();
        let c = 1.0 / 1.0_f64.cosh();
        assert!(close(lo, -c, 1e-15) && close(hi, c, 1e-15));
    }

    #[test]
    fn radial_speeds_agree_with_full_symbol() {
        for &(pt, pr) in &[(0.1, 0.5), (-0.4, 2.0), (0.3, -0.7), (0.0, 3.0)] {
            let s = metric_from_gradient(&SpacetimeVector::from_graph_gradient(pt, pr, 0.0)).unwrap();
            let (a, b) = s.characteristic_speeds([1.0, 0.0]).unwrap();
            let (c, d) = graph_radial_speeds(pt, pr).unwrap();
            assert!(close(a, c, 1e-14) && close(b, d, 1e-14), "{pt} {pr}");
        }
    }

    #[test]
    fn non_hyperbolic_speeds_are_errors() {
        assert!(graph_radial_speeds(1.5, 0.2).is_err());
        assert!(cylindrical_symbol(2.0, 0.0, 0.0)
            .characteristic_speeds([1.0, 0.0])
            .is_err());
    }
}
