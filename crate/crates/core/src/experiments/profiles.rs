//! Smooth profiles compactly supported in `(1, 2)`.

use serde::{Deserialize, Serialize};

use crate::jet::{Jet, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `exp(-1 / (1 - (2s - 3)^2))`
    #[default]
    Bump,
    /// The bump times a second bump on `(1, 1.7)`.
    Asymmetric,
    Zero,
}

/// Below this value of `1 - x^2` the bump and all its derivatives are
/// under `1e-40` and are set to zero.
const EDGE: f64 = 5e-3;

fn unit_bump<const N: usize>(x: Jet<N>) -> Jet<N> {
    let u = Jet::constant(1.0) - x * x;
    if !(u.0[0] > EDGE) {
        return Jet::ZERO;
    }
    (-u.recip()).exp()
}

impl Profile {
    /// Taylor jet of the profile at `s`.
    pub fn jet<const N: usize>(&self, s: f64) -> Jet<N> {
        let v = Jet::<N>::variable(s);
        match self {
            Profile::Zero => Jet::ZERO,
            Profile::Bump => unit_bump(v * 2.0 + -3.0),
            Profile::Asymmetric => unit_bump(v * 2.0 + -3.0) * unit_bump((v * 2.0 + -2.7) * (1.0 / 0.7)),
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.jet::<1>(s).value()
    }

    /// `alpha`-th derivative at `s`, `alpha <= 10`.
    pub fn derivative(&self, s: f64, alpha: usize) -> f64 {
        assert!(alpha <= 10, "profile derivatives are available up to order 10");
        self.jet::<11>(s).derivative(alpha)
    }

    /// `||f^(alpha)||_{L^2(s ds)}` on `(1, 2)` for `alpha = 0..=order`, by
    /// the trapezoid rule on `points` intervals.
    pub fn norms(&self, order: usize, points: usize) -> Vec<f64> {
        assert!(order <= 10, "profile derivatives are available up to order 10");
        let h = 1.0 / points as f64;
        let mut acc = vec![0.0; order + 1];
        for i in 0..=points {
            let s = 1.0 + i as f64 * h;
            let w = if i == 0 || i == points { 0.5 } else { 1.0 };
            let j = self.jet::<11>(s);
            for (a, slot) in acc.iter_mut().enumerate() {
                let d = j.derivative(a);
                *slot += w * d * d * s;
            }
        }
        acc.into_iter().map(|v| (v * h).sqrt()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_peak_and_support() {
        assert!((Profile::Bump.value(1.5) - (-1.0_f64).exp()).abs() < 1e-15);
        for s in [0.5, 1.0, 2.0, 2.5] {
            assert_eq!(Profile::Bump.value(s), 0.0);
            assert_eq!(Profile::Asymmetric.value(s), 0.0);
        }
        assert_eq!(Profile::Asymmetric.value(1.8), 0.0);
        assert!(Profile::Asymmetric.value(1.3) > 0.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for p in [Profile::Bump, Profile::Asymmetric] {
            for s in [1.2, 1.45, 1.6] {
                let fd = (p.derivative(s + h, 3) - p.derivative(s - h, 3)) / (2.0 * h);
                let d4 = p.derivative(s, 4);
                assert!((fd - d4).abs() < 1e-5 * d4.abs().max(1.0), "{p:?} {s}");
            }
        }
    }
}
