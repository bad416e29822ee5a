//! Known decompositions of the GHZ-basis mixtures.

use std::f64::consts::PI;

use crate::analytic::{j_zero_angles, Thresholds};
use crate::qstate::{ghz_basis_amplitudes, ghz_basis, named_pure, Ensemble, PureState, Sign, StateLabel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceName {
    /// Eight J states at the zeros of their three-tangle, weight 1/8 each.
    JPiGhz,
    /// X states with phase patterns (0,0,0), (0,π,π), (π,0,π), (π,π,0).
    XSigma(f64),
    /// X states at `x₀` mixed with the J decomposition; needs `x ≤ x₀`.
    MixedLowX(f64),
    /// X states at `x₁` mixed with `|GHZ,1+⟩`; needs `x ≥ x₁`.
    MixedHighX(f64),
    /// X states with phase patterns (π,π,π), (π,0,0), (0,π,0), (0,0,π).
    PatternBSigma(f64),
    /// `(|GHZ,2+⟩ ± |GHZ,3+⟩)/√2`, both A-separable, and `|GHZ,4+⟩`, weight
    /// 1/3 each. Its average A(BC) one-tangle is 1/3.
    ProductPiGhz,
}

pub const PATTERN_A: [[f64; 3]; 4] = [[0.0, 0.0, 0.0], [0.0, PI, PI], [PI, 0.0, PI], [PI, PI, 0.0]];
pub const PATTERN_B: [[f64; 3]; 4] = [[PI, PI, PI], [PI, 0.0, 0.0], [0.0, PI, 0.0], [0.0, 0.0, PI]];

fn x_ensemble(x: f64, patterns: &[[f64; 3]; 4]) -> Result<Ensemble> {
    let states = patterns.iter().map(|&phi| named_pure(StateLabel::X { x, phi })).collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(states)
}

fn j_ensemble() -> Result<Ensemble> {
    let states = j_zero_angles()
        .iter()
        .map(|&(theta1, theta2)| named_pure(StateLabel::J { theta1, theta2 }))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(states)
}

fn product_ensemble() -> Result<Ensemble> {
    let (a, b) = (ghz_basis_amplitudes(2, Sign::Plus)?, ghz_basis_amplitudes(3, Sign::Plus)?);
    let sum = a.iter().zip(&b).map(|(p, q)| p + q).collect();
    let diff = a.iter().zip(&b).map(|(p, q)| p - q).collect();
    Ensemble::uniform(vec![PureState::new(sum, true)?, PureState::new(diff, true)?, ghz_basis(4, Sign::Plus)?])
}

fn unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::param(format!("x = {x} outside [0, 1]")))
    }
}

pub fn reference_decomposition(name: ReferenceName) -> Result<Ensemble> {
    let t = Thresholds::default();
    match name {
        ReferenceName::JPiGhz => j_ensemble(),
        ReferenceName::ProductPiGhz => product_ensemble(),
        ReferenceName::XSigma(x) => {
            unit(x)?;
            x_ensemble(x, &PATTERN_A)
        }
        ReferenceName::PatternBSigma(x) => {
            unit(x)?;
            x_ensemble(x, &PATTERN_B)
        }
        ReferenceName::MixedLowX(x) => {
            if !(0.0..=t.x0).contains(&x) {
                return Err(Error::param(format!("x = {x} outside [0, {}]", t.x0)));
            }
            Ensemble::combine(vec![(x / t.x0, x_ensemble(t.x0, &PATTERN_A)?), ((t.x0 - x) / t.x0, j_ensemble()?)])
        }
        ReferenceName::MixedHighX(x) => {
            if !(t.x1..=1.0).contains(&x) {
                return Err(Error::param(format!("x = {x} outside [{}, 1]", t.x1)));
            }
            let ghz = Ensemble::new(vec![(1.0, named_pure(StateLabel::GhzBasis { k: 1, sign: Sign::Plus })?)])?;
            Ensemble::combine(vec![((1.0 - x) / (1.0 - t.x1), x_ensemble(t.x1, &PATTERN_A)?), ((x - t.x1) / (1.0 - t.x1), ghz)])
        }
    }
}
