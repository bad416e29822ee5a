//! Closed-form three-tangles of the J and X pure-state families and the
//! piecewise three-tangle of the rank-4 mixture `σ(x)`.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

/// Branch points of the piecewise three-tangle of `σ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Largest zero of the X-family three-tangle.
    pub x0: f64,
    /// Where the linear branch joins `α_I`.
    pub x1: f64,
    /// Onset of non-convexity of `α_I`.
    pub x_star: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            x0: 0.75,
            x1: (2.0 + 3f64.sqrt()) / 4.0,
            x_star: (1.0 + 2f64.cbrt() + 4f64.cbrt()) / 4.0,
        }
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::param(format!("x = {x} outside [0, 1]")))
    }
}

/// `√(x(1−x)³)`, nonnegative branch.
fn root_term(x: f64) -> f64 {
    (x * (1.0 - x).powi(3)).max(0.0).sqrt()
}

/// `(1/9)·|1 − (e^{iθ₁} − e^{iθ₂})²|·|1 − (e^{iθ₁} + e^{iθ₂})²|`.
pub fn tau_j(theta1: f64, theta2: f64) -> f64 {
    let one = C64::new(1.0, 0.0);
    let (a, b) = (C64::from_polar(1.0, theta1), C64::from_polar(1.0, theta2));
    let diff = a - b;
    let sum = a + b;
    (one - diff * diff).norm() * (one - sum * sum).norm() / 9.0
}

/// The eight angle pairs at which `tau_j` vanishes.
pub fn j_zero_angles() -> [(f64, f64); 8] {
    let t = PI / 3.0;
    [
        (t, 2.0 * t),
        (5.0 * t, 4.0 * t),
        (2.0 * t, t),
        (4.0 * t, 5.0 * t),
        (t, 5.0 * t),
        (5.0 * t, t),
        (2.0 * t, 4.0 * t),
        (4.0 * t, 2.0 * t),
    ]
}

/// The complex polynomial whose modulus is the X-family three-tangle, with
/// its gradient in the three phases.
pub fn x_polynomial(x: f64, phi: [f64; 3]) -> Result<(C64, [C64; 3])> {
    check_unit(x)?;
    let rest = (1.0 - x) * (1.0 - x);
    let (square, single, pair) = (rest / 9.0, -2.0 / 3.0 * x * (1.0 - x), -2.0 / 9.0 * rest);
    let terms: [(f64, [f64; 3]); 10] = [
        (x * x, [0.0, 0.0, 0.0]),
        (square, [4.0, 0.0, 0.0]),
        (square, [0.0, 4.0, 0.0]),
        (square, [0.0, 0.0, 4.0]),
        (single, [2.0, 0.0, 0.0]),
        (single, [0.0, 2.0, 0.0]),
        (single, [0.0, 0.0, 2.0]),
        (pair, [2.0, 2.0, 0.0]),
        (pair, [2.0, 0.0, 2.0]),
        (pair, [0.0, 2.0, 2.0]),
    ];
    let cube = (-8.0 * 3f64.sqrt() / 9.0 * root_term(x), [1.0, 1.0, 1.0]);
    let mut value = C64::default();
    let mut grad = [C64::default(); 3];
    for (c, k) in terms.iter().chain(std::iter::once(&cube)) {
        let t = C64::from_polar(*c, k[0] * phi[0] + k[1] * phi[1] + k[2] * phi[2]);
        value += t;
        for j in 0..3 {
            grad[j] += t * C64::new(0.0, k[j]);
        }
    }
    Ok((value, grad))
}

/// Closed-form three-tangle of `|X(x, φ₁, φ₂, φ₃)⟩`.
pub fn tau_x(x: f64, phi: [f64; 3]) -> Result<f64> {
    Ok(x_polynomial(x, phi)?.0.norm())
}

/// Average three-tangle of the four-member X decomposition of `σ(x)`.
pub fn alpha_i(x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(x * x - (1.0 - x).powi(2) / 3.0 - 2.0 * x * (1.0 - x) - 8.0 * 3f64.sqrt() / 9.0 * root_term(x))
}

/// Chord from `(x1, α_I(x1))` to `(1, 1)` evaluated at `x`.
pub fn alpha_ii(x: f64, x1: f64) -> Result<f64> {
    let x0 = Thresholds::default().x0;
    if !(x1 > x0 && x1 < 1.0) {
        return Err(Error::param(format!("x1 = {x1} outside ({x0}, 1)")));
    }
    if !(x1..=1.0).contains(&x) {
        return Err(Error::param(format!("x = {x} outside [{x1}, 1]")));
    }
    Ok((1.0 - x) / (1.0 - x1) * alpha_i(x1)? + (x - x1) / (1.0 - x1))
}

/// Which closed form applies at a given `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Zero,
    AlphaI,
    AlphaII,
}

/// The three-branch three-tangle of `σ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PiecewiseTangle {
    pub thresholds: Thresholds,
}

impl PiecewiseTangle {
    pub fn branch(&self, x: f64) -> Result<Branch> {
        check_unit(x)?;
        let t = self.thresholds;
        Ok(if x <= t.x0 {
            Branch::Zero
        } else if x <= t.x1 {
            Branch::AlphaI
        } else {
            Branch::AlphaII
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self.branch(x)? {
            Branch::Zero => 0.0,
            Branch::AlphaI => alpha_i(x)?,
            Branch::AlphaII => alpha_ii(x, self.thresholds.x1)?,
        })
    }
}

pub fn tau_sigma(x: f64) -> Result<f64> {
    PiecewiseTangle::default().eval(x)
}

/// A(BC) one-tangle of `σ(x)` in closed form.
pub fn one_tangle_sigma(x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok((5.0 - 4.0 * x + 8.0 * x * x - 8.0 * (3.0 * x * (1.0 - x).powi(3)).max(0.0).sqrt()) / 9.0)
}

/// `ξ·τ₃(σ(x))`, an upper bound on the three-tangle of the rank-8 mixture
/// whenever the minus-sign component has `y ≤ 3/4`.
pub fn rank8_upper_bound(xi: f64, x: f64, y: f64) -> Result<f64> {
    check_unit(xi)?;
    check_unit(x)?;
    let x0 = Thresholds::default().x0;
    if !(0.0..=x0).contains(&y) {
        return Err(Error::param(format!("y = {y} outside [0, {x0}]; no bound is available there")));
    }
    Ok(xi * tau_sigma(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let t = Thresholds::default();
        assert!(t.x0 < t.x1 && t.x1 < t.x_star && t.x_star < 1.0);
        assert!((t.x1 - 0.933013).abs() < 1e-6);
        assert!((t.x_star - 0.961831).abs() < 1e-6);
    }

    #[test]
    fn tau_j_examples() {
        assert!(tau_j(PI / 3.0, 2.0 * PI / 3.0) < 1e-12);
        assert!((tau_j(0.0, 0.0) - 1.0 / 3.0).abs() < 1e-12);
        assert!(tau_j(4.0 * PI / 3.0, 2.0 * PI / 3.0) < 1e-12);
        assert!((tau_j(0.3, 1.1) - tau_j(1.1, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn zero_angles() {
        let z = j_zero_angles();
        assert_eq!(z.len(), 8);
        let t = PI / 3.0;
        assert!(z.contains(&(t, 2.0 * t)));
        assert!(z.contains(&(5.0 * t, 4.0 * t)));
        for (a, b) in z {
            assert!(tau_j(a, b) < 1e-12);
        }
    }

    #[test]
    fn tau_x_examples() {
        assert!((tau_x(1.0, [0.4, 1.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(tau_x(0.75, [0.0; 3]).unwrap() < 1e-12);
        assert!((tau_x(0.0, [0.0; 3]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(tau_x(1.5, [0.0; 3]).is_err());
    }

    #[test]
    fn alpha_values() {
        assert!(alpha_i(0.75).unwrap().abs() < 1e-15);
        assert!((alpha_i(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha_i(0.9).unwrap() - 0.580479).abs() < 1e-6);
        let x1 = Thresholds::default().x1;
        assert!((alpha_ii(1.0, x1).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha_ii(x1, x1).unwrap() - alpha_i(x1).unwrap()).abs() < 1e-15);
        assert!(alpha_ii(0.8, x1).is_err());
        assert!(alpha_ii(0.9, 0.7).is_err());
    }

    #[test]
    fn x1_is_stationary() {
        let x1 = Thresholds::default().x1;
        let h = 1e-5;
        for x in [0.95, 0.97, 0.99] {
            let d = (alpha_ii(x, x1 + h).unwrap() - alpha_ii(x, x1 - h).unwrap()) / (2.0 * h);
            assert!(d.abs() < 1e-6, "x = {x}: {d}");
        }
    }

    #[test]
    fn piecewise_examples() {
        assert_eq!(tau_sigma(0.5).unwrap(), 0.0);
        assert!((tau_sigma(0.9).unwrap() - 0.580479).abs() < 1e-6);
        assert!((tau_sigma(1.0).unwrap() - 1.0).abs() < 1e-15);
        let p = PiecewiseTangle::default();
        assert_eq!(p.branch(0.75).unwrap(), Branch::Zero);
        assert_eq!(p.branch(0.9).unwrap(), Branch::AlphaI);
        assert_eq!(p.branch(0.95).unwrap(), Branch::AlphaII);
    }

    #[test]
    fn piecewise_is_continuous() {
        let t = Thresholds::default();
        let eps = 1e-12;
        for b in [t.x0, t.x1] {
            assert!((tau_sigma(b - eps).unwrap() - tau_sigma(b + eps).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn one_tangle_examples() {
        assert!((one_tangle_sigma(0.0).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!((one_tangle_sigma(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((one_tangle_sigma(0.75).unwrap() - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rank8_bound() {
        assert!((rank8_upper_bound(0.5, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(rank8_upper_bound(0.0, 0.9, 0.5).unwrap(), 0.0);
        assert_eq!(rank8_upper_bound(0.3, 0.5, 0.2).unwrap(), 0.0);
        assert!(matches!(rank8_upper_bound(0.3, 0.5, 0.8), Err(Error::BadParameter(_))));
    }
}
