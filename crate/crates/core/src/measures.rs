//! Entanglement measures: three-tangle, concurrence, negativity, π-tangle,
//! linear-entropy one-tangles and the purification measure `E_ms`.
//!
//! Mixed-state three-tangle is a convex roof and lives in [`crate::roof`] and
//! [`crate::analytic`]; only its pure-state kernel is computed here.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::qstate::{self, hermitian_eigenvalues, partial_trace, partial_transpose_many, DensityMatrix, PureState};
use crate::{Error, Result, C64};

/// The three degree-four invariants whose combination `d₁ − 2d₂ + 4d₃` is
/// Cayley's hyperdeterminant of the 2×2×2 amplitude tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperdetTerms {
    pub d1: C64,
    pub d2: C64,
    pub d3: C64,
}

impl HyperdetTerms {
    /// Terms for a raw (not necessarily normalized) three-qubit amplitude
    /// vector indexed as `a[ijk]`.
    pub fn of(a: &[C64]) -> Result<Self> {
        if a.len() != 8 {
            return Err(Error::WrongSize { expected: 8, got: a.len() });
        }
        let sq = |z: C64| z * z;
        let d1 = sq(a[0b000]) * sq(a[0b111]) + sq(a[0b001]) * sq(a[0b110]) + sq(a[0b010]) * sq(a[0b101]) + sq(a[0b100]) * sq(a[0b011]);
        let p0 = a[0b000] * a[0b111];
        let p1 = a[0b011] * a[0b100];
        let p2 = a[0b101] * a[0b010];
        let p3 = a[0b110] * a[0b001];
        let d2 = p0 * p1 + p0 * p2 + p0 * p3 + p1 * p2 + p1 * p3 + p2 * p3;
        let d3 = a[0b000] * a[0b110] * a[0b101] * a[0b011] + a[0b111] * a[0b001] * a[0b010] * a[0b100];
        Ok(HyperdetTerms { d1, d2, d3 })
    }

    pub fn hyperdeterminant(&self) -> C64 {
        self.d1 - self.d2 * 2.0 + self.d3 * 4.0
    }
}

/// `4|d₁ − 2d₂ + 4d₃|` on raw amplitudes; homogeneous of degree four.
pub fn three_tangle_raw(a: &[C64]) -> Result<f64> {
    Ok(4.0 * HyperdetTerms::of(a)?.hyperdeterminant().norm())
}

pub fn three_tangle_pure(psi: &PureState) -> Result<f64> {
    if psi.n_qubits() != 3 {
        return Err(Error::WrongSize { expected: 8, got: psi.dim() });
    }
    three_tangle_raw(psi.amplitudes())
}

fn require_dim(rho: &DensityMatrix, dim: usize) -> Result<()> {
    if rho.dim() == dim {
        Ok(())
    } else {
        Err(Error::WrongSize { expected: dim, got: rho.dim() })
    }
}

fn spin_flip(rho: &DMatrix<C64>) -> DMatrix<C64> {
    let y = qstate::pauli::y();
    let yy = DMatrix::from_fn(4, 4, |i, j| y[(i >> 1, j >> 1)] * y[(i & 1, j & 1)]);
    &yy * rho.map(|z| z.conj()) * &yy
}

/// Spin-flipped eigenvalues below this are rounding noise; their square
/// roots would otherwise leak `~1e-8` into the concurrence.
const SPIN_FLIP_CUTOFF: f64 = 1e-12;

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit state.
///
/// The `λᵢ` are the square roots of the eigenvalues of `ρ ρ̃`, obtained here as
/// the spectrum of the Hermitian matrix `√ρ ρ̃ √ρ`.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    require_dim(rho, 4)?;
    let spec = rho.spectrum();
    let sqrt_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(4, spec.values.iter().map(|v| C64::new(v.sqrt(), 0.0))));
    let root = &spec.vectors * sqrt_diag * spec.vectors.adjoint();
    let r = &root * spin_flip(rho.matrix()) * &root;
    let r = (&r + r.adjoint()) * C64::new(0.5, 0.0);
    let lambdas: Vec<f64> = hermitian_eigenvalues(&r)
        .into_iter()
        .map(|m| if m < SPIN_FLIP_CUTOFF { 0.0 } else { m.sqrt() })
        .collect();
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

fn det2(m: &DMatrix<C64>) -> f64 {
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
}

/// `4·det ρ_q` for the single-qubit reduction of a pure state.
pub fn one_tangle_pure(psi: &PureState, qubit: usize) -> Result<f64> {
    let reduced = partial_trace(&psi.projector(), &[qubit])?;
    Ok((4.0 * det2(reduced.matrix())).clamp(0.0, 1.0))
}

/// `4·det ρ_A` from a raw amplitude vector, scaled by `‖a‖⁴`.
pub(crate) fn one_tangle_a_raw(a: &[C64]) -> f64 {
    let half = a.len() / 2;
    let (lo, hi) = a.split_at(half);
    let p0: f64 = lo.iter().map(|z| z.norm_sqr()).sum();
    let p1: f64 = hi.iter().map(|z| z.norm_sqr()).sum();
    let off: C64 = lo.iter().zip(hi).map(|(x, y)| x * y.conj()).sum();
    4.0 * (p0 * p1 - off.norm_sqr()).max(0.0)
}

/// `‖ρ^{T_S}‖₁ − 1` for the partial transpose over the qubits in `subsystem`.
pub fn negativity(rho: &DensityMatrix, subsystem: &[usize]) -> Result<f64> {
    let pt = partial_transpose_many(rho, subsystem)?;
    let trace_norm: f64 = hermitian_eigenvalues(&pt).iter().map(|v| v.abs()).sum();
    Ok((trace_norm - 1.0).max(0.0))
}

/// One-qubit residual `N²_{q(rest)} − Σ_r N²_{qr}` of a three-qubit state.
pub fn pi_residual(rho: &DensityMatrix, qubit: usize) -> Result<f64> {
    require_dim(rho, 8)?;
    if qubit > 2 {
        return Err(Error::BadSubset(format!("qubit {qubit} out of range")));
    }
    let global = negativity(rho, &[qubit])?;
    let mut residual = global * global;
    for other in (0..3).filter(|&r| r != qubit) {
        let pair = partial_trace(rho, &[qubit, other])?;
        let pos = if qubit < other { 0 } else { 1 };
        let n = negativity(&pair, &[pos])?;
        residual -= n * n;
    }
    Ok(residual)
}

/// π-tangle: the mean of the three one-qubit negativity residuals.
pub fn pi_tangle(rho: &DensityMatrix) -> Result<f64> {
    require_dim(rho, 8)?;
    Ok((0..3).map(|q| pi_residual(rho, q)).sum::<Result<f64>>()? / 3.0)
}

/// `2(1 − Tr ρ²)` for a single-qubit state.
pub fn linear_entropy_tangle(rho: &DensityMatrix) -> Result<f64> {
    require_dim(rho, 2)?;
    Ok((2.0 * (1.0 - rho.purity())).clamp(0.0, 1.0))
}

/// `[Σₖ τ_k − 2 Σ_{i<j} C²_ij] / N` for a pure state of 3 to 5 qubits.
pub fn e_ms(psi: &PureState) -> Result<f64> {
    let n = psi.n_qubits();
    if !(3..=5).contains(&n) {
        return Err(Error::WrongSize { expected: 8, got: psi.dim() });
    }
    let rho = psi.projector();
    let mut one = 0.0;
    for k in 0..n {
        one += linear_entropy_tangle(&partial_trace(&rho, &[k])?)?;
    }
    let mut two = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let c = concurrence_two_qubit(&partial_trace(&rho, &[i, j])?)?;
            two += c * c;
        }
    }
    Ok((one - 2.0 * two) / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct TangleReport {
    pub tau3: f64,
    /// `4·det(Tr_BC ρ)`: the one-tangle for pure states, an upper bound on its
    /// convex roof otherwise.
    pub one_tangle_A: f64,
    pub concurrence_AB: f64,
    pub concurrence_AC: f64,
    pub negativity_A_BC: f64,
    pub pi_tangle: f64,
}

const REPORT_SLACK: f64 = 1e-9;

/// Collects the standard measures of a three-qubit state. `tau3` is taken
/// from the caller since it needs a roof or closed form for mixed inputs.
pub fn full_report(rho: &DensityMatrix, tau3: f64) -> Result<TangleReport> {
    require_dim(rho, 8)?;
    if !(tau3.is_finite() && (-REPORT_SLACK..=1.0 + REPORT_SLACK).contains(&tau3)) {
        return Err(Error::param(format!("tau3 = {tau3} outside [0, 1]")));
    }
    let a = partial_trace(rho, &[0])?;
    let report = TangleReport {
        tau3: tau3.clamp(0.0, 1.0),
        one_tangle_A: (4.0 * det2(a.matrix())).clamp(0.0, 1.0),
        concurrence_AB: concurrence_two_qubit(&partial_trace(rho, &[0, 1])?)?,
        concurrence_AC: concurrence_two_qubit(&partial_trace(rho, &[0, 2])?)?,
        negativity_A_BC: negativity(rho, &[0])?,
        pi_tangle: pi_tangle(rho)?,
    };
    Ok(report)
}
