//! Truncated Taylor arithmetic.
//!
//! A [`Jet<N>`] holds the first `N` Taylor coefficients of a function around
//! an expansion point. Arithmetic propagates coefficients exactly up to the
//! truncation order, which gives analytic derivatives of closed-form profiles
//! and exact time-derivatives of the semi-discrete evolution map.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar types the pointwise kernels can be evaluated on.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Self;
    fn value(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize>(pub [f64; N]);

impl<const N: usize> Jet<N> {
    pub const ZERO: Self = Jet([0.0; N]);

    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Jet(c)
    }

    /// The identity function `x0 + h` expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x0;
        if N > 1 {
            c[1] = 1.0;
        }
        Jet(c)
    }

    pub fn coeffs(&self) -> &[f64; N] {
        &self.0
    }

    /// k-th derivative at the expansion point: `k! * c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * fact
    }

    pub fn recip(self) -> Self {
        let a = self.0;
        let mut b = [0.0; N];
        b[0] = 1.0 / a[0];
        for k in 1..N {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s * b[0];
        }
        Jet(b)
    }

    pub fn exp(self) -> Self {
        let a = self.0;
        let mut b = [0.0; N];
        b[0] = a[0].exp();
        // b' = a' b  =>  k b_k = sum_{j=1..k} j a_j b_{k-j}
        for k in 1..N {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Jet(b)
    }
}

impl<const N: usize> Scalar for Jet<N> {
    fn cst(v: f64) -> Self {
        Jet::constant(v)
    }

    fn sqrt(self) -> Self {
        let a = self.0;
        let mut b = [0.0; N];
        b[0] = a[0].sqrt();
        // b^2 = a  =>  2 b_0 b_k = a_k - sum_{j=1..k-1} b_j b_{k-j}
        for k in 1..N {
            let s: f64 = (1..k).map(|j| b[j] * b[k - j]).sum();
            b[k] = (a[k] - s) / (2.0 * b[0]);
        }
        Jet(b)
    }

    fn value(self) -> f64 {
        self.0[0]
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.0.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let mut c = [0.0; N];
        for k in 0..N {
            c[k] = (0..=k).map(|j| a[j] * b[k - j]).sum();
        }
        Jet(c)
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // c = a / b  =>  b_0 c_k = a_k - sum_{j=1..k} b_j c_{k-j}
        let (a, b) = (self.0, rhs.0);
        let mut c = [0.0; N];
        for k in 0..N {
            let s: f64 = (1..=k).map(|j| b[j] * c[k - j]).sum();
            c[k] = (a[k] - s) / b[0];
        }
        Jet(c)
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.0[0] += rhs;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_variable_gives_factorial_series() {
        let j = Jet::<6>::variable(0.0).exp();
        for k in 0..6 {
            assert!((j.derivative(k) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sqrt_and_recip_match_closed_form_derivatives() {
        let x0 = 2.0;
        let x = Jet::<4>::variable(x0);
        let s = x.sqrt();
        // d/dx sqrt(x) = 1/(2 sqrt x), d2 = -1/(4 x^{3/2}), d3 = 3/(8 x^{5/2})
        assert!((s.derivative(1) - 0.5 / x0.sqrt()).abs() < 1e-14);
        assert!((s.derivative(2) + 0.25 / x0.powf(1.5)).abs() < 1e-14);
        assert!((s.derivative(3) - 0.375 / x0.powf(2.5)).abs() < 1e-14);
        let r = x.recip();
        assert!((r.derivative(2) - 2.0 / x0.powi(3)).abs() < 1e-14);
        let q = Jet::<4>::constant(1.0) / x;
        assert_eq!(q.0, r.0);
    }

    #[test]
    fn product_rule() {
        let x = Jet::<5>::variable(0.3);
        let f = x * x * x;
        assert!((f.derivative(1) - 3.0 * 0.09).abs() < 1e-15);
        assert!((f.derivative(3) - 6.0).abs() < 1e-13);
        assert_eq!(f.derivative(4), 0.0);
    }
}
