//! The named states and GHZ-basis mixtures that the rest of the crate studies.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;

use super::{DensityMatrix, PureState};
use crate::{Error, Result, C64};

/// Relative sign between the two complementary terms of a GHZ-basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Basis-index pairs `(b, !b)` spanned by `|GHZ,k±⟩` for `k = 1..=4`.
pub const GHZ_PLUS_BASIS: [(usize, usize); 4] = [(0b000, 0b111), (0b001, 0b110), (0b010, 0b101), (0b011, 0b100)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateLabel {
    /// `(|000⟩ + |111⟩)/√2`.
    Ghz,
    /// `(|001⟩ + |010⟩ + |100⟩)/√3`.
    W,
    /// `|GHZ,k±⟩ = (|b⟩ ± |b̄⟩)/√2` with `b` the k-th entry of [`GHZ_PLUS_BASIS`].
    GhzBasis { k: u8, sign: Sign },
    /// `(|GHZ,2+⟩ − e^{iθ₁}|GHZ,3+⟩ − e^{iθ₂}|GHZ,4+⟩)/√3`.
    J { theta1: f64, theta2: f64 },
    /// `√x|GHZ,1+⟩ − √((1−x)/3) Σₖ e^{iφₖ}|GHZ,k+1,+⟩`.
    X { x: f64, phi: [f64; 3] },
    /// Five-qubit purification of the rank-3 GHZ mixture; the two ancilla
    /// qubits are the least significant bits.
    Psi5,
}

/// Amplitude vector of `|GHZ,k±⟩` on three qubits.
pub fn ghz_basis_amplitudes(k: u8, sign: Sign) -> Result<Vec<C64>> {
    if !(1..=4).contains(&k) {
        return Err(Error::param(format!("GHZ basis index {k} not in 1..=4")));
    }
    let (lo, hi) = GHZ_PLUS_BASIS[(k - 1) as usize];
    let mut a = vec![C64::new(0.0, 0.0); 8];
    a[lo] = C64::new(FRAC_1_SQRT_2, 0.0);
    a[hi] = C64::new(FRAC_1_SQRT_2 * sign.value(), 0.0);
    Ok(a)
}

pub fn ghz_basis(k: u8, sign: Sign) -> Result<PureState> {
    PureState::new(ghz_basis_amplitudes(k, sign)?, false)
}

fn accumulate(target: &mut [C64], coeff: C64, k: u8) {
    let v = ghz_basis_amplitudes(k, Sign::Plus).expect("k in range");
    for (t, a) in target.iter_mut().zip(v) {
        *t += coeff * a;
    }
}

pub fn named_pure(label: StateLabel) -> Result<PureState> {
    let zero = C64::new(0.0, 0.0);
    match label {
        StateLabel::Ghz => ghz_basis(1, Sign::Plus),
        StateLabel::W => {
            let mut a = vec![zero; 8];
            let w = C64::new(1.0 / 3f64.sqrt(), 0.0);
            a[0b001] = w;
            a[0b010] = w;
            a[0b100] = w;
            PureState::new(a, false)
        }
        StateLabel::GhzBasis { k, sign } => ghz_basis(k, sign),
        StateLabel::J { theta1, theta2 } => {
            if !theta1.is_finite() || !theta2.is_finite() {
                return Err(Error::param("angles must be finite"));
            }
            let r = 1.0 / 3f64.sqrt();
            let mut a = vec![zero; 8];
            accumulate(&mut a, C64::new(r, 0.0), 2);
            accumulate(&mut a, -C64::from_polar(r, theta1), 3);
            accumulate(&mut a, -C64::from_polar(r, theta2), 4);
            PureState::new(a, false)
        }
        StateLabel::X { x, phi } => {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::param(format!("x = {x} outside [0, 1]")));
            }
            if phi.iter().any(|p| !p.is_finite()) {
                return Err(Error::param("angles must be finite"));
            }
            let rest = ((1.0 - x) / 3.0).sqrt();
            let mut a = vec![zero; 8];
            accumulate(&mut a, C64::new(x.sqrt(), 0.0), 1);
            for (k, p) in (2u8..=4).zip(phi) {
                accumulate(&mut a, -C64::from_polar(rest, p), k);
            }
            PureState::new(a, false)
        }
        StateLabel::Psi5 => {
            let r = C64::new(1.0 / 3f64.sqrt(), 0.0);
            let mut a = vec![zero; 32];
            for (k, ancilla) in [(2u8, 0b00usize), (3, 0b01), (4, 0b10)] {
                let g = ghz_basis_amplitudes(k, Sign::Plus)?;
                for (idx, amp) in g.iter().enumerate() {
                    a[(idx << 2) | ancilla] += r * amp;
                }
            }
            PureState::new(a, false)
        }
    }
}

/// The GHZ-basis mixtures examined by the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Equal mixture of `|GHZ,2+⟩`, `|GHZ,3+⟩`, `|GHZ,4+⟩`.
    PiGhz,
    /// `x|GHZ,1+⟩⟨GHZ,1+| + (1 − x)·PiGhz`.
    Sigma { x: f64 },
    /// The same mixture over the minus-sign GHZ states.
    SigmaTilde { y: f64 },
    /// `ξ·Sigma(x) + (1 − ξ)·SigmaTilde(y)`.
    Rho { xi: f64, x: f64, y: f64 },
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {v} outside [0, 1]")))
    }
}

fn ghz_mixture(sign: Sign, head: f64) -> Result<DMatrix<C64>> {
    let mut m = DMatrix::<C64>::zeros(8, 8);
    for k in 1..=4u8 {
        let w = if k == 1 { head } else { (1.0 - head) / 3.0 };
        let a = ghz_basis_amplitudes(k, sign)?;
        for i in 0..8 {
            for j in 0..8 {
                m[(i, j)] += a[i] * a[j].conj() * w;
            }
        }
    }
    Ok(m)
}

pub fn sigma_family(which: Family) -> Result<DensityMatrix> {
    let m = match which {
        Family::PiGhz => ghz_mixture(Sign::Plus, 0.0)?,
        Family::Sigma { x } => {
            unit_interval("x", x)?;
            ghz_mixture(Sign::Plus, x)?
        }
        Family::SigmaTilde { y } => {
            unit_interval("y", y)?;
            ghz_mixture(Sign::Minus, y)?
        }
        Family::Rho { xi, x, y } => {
            unit_interval("xi", xi)?;
            unit_interval("x", x)?;
            unit_interval("y", y)?;
            ghz_mixture(Sign::Plus, x)? * C64::new(xi, 0.0) + ghz_mixture(Sign::Minus, y)? * C64::new(1.0 - xi, 0.0)
        }
    };
    Ok(DensityMatrix::from_hermitian_unchecked(m))
}
