use nalgebra::{DMatrix, Matrix2};

use super::{norm_sqr, DensityMatrix, PureState, NORM_TOLERANCE};
use crate::{Error, Result, C64};

#[inline]
fn bit_of(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn check_qubits(n: usize, qubits: &[usize], allow_full: bool) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::BadSubset("empty qubit set".into()));
    }
    if let Some(q) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::BadSubset(format!("qubit {q} out of range for {n} qubits")));
    }
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != qubits.len() {
        return Err(Error::BadSubset("repeated qubit index".into()));
    }
    if !allow_full && qubits.len() == n {
        return Err(Error::BadSubset("subset must be proper".into()));
    }
    Ok(())
}

/// Reduced state on `keep`, traced over every other qubit.
///
/// The kept qubits appear in ascending order in the result regardless of the
/// order of `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    check_qubits(n, keep, false)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let k = kept.len();
    let keep_mask: usize = kept.iter().map(|&q| bit_of(n, q)).sum();
    // map full index -> reduced index
    let reduce = |i: usize| -> usize {
        kept.iter().enumerate().fold(0, |acc, (pos, &q)| {
            if i & bit_of(n, q) != 0 {
                acc | (1 << (k - 1 - pos))
            } else {
                acc
            }
        })
    };
    let d = rho.dim();
    let m = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(1 << k, 1 << k);
    for i in 0..d {
        for j in 0..d {
            if (i & !keep_mask) == (j & !keep_mask) {
                out[(reduce(i), reduce(j))] += m[(i, j)];
            }
        }
    }
    Ok(DensityMatrix::from_hermitian_unchecked(out))
}

/// Partial transpose over every qubit in `qubits`.
pub fn partial_transpose_many(rho: &DensityMatrix, qubits: &[usize]) -> Result<DMatrix<C64>> {
    let n = rho.n_qubits();
    check_qubits(n, qubits, true)?;
    let mask: usize = qubits.iter().map(|&q| bit_of(n, q)).sum();
    let m = rho.matrix();
    let d = rho.dim();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        let swapped_i = (i & !mask) | (j & mask);
        let swapped_j = (j & !mask) | (i & mask);
        m[(swapped_i, swapped_j)]
    }))
}

/// Partial transpose on a single qubit.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<DMatrix<C64>> {
    partial_transpose_many(rho, &[subsystem])
}

/// `(O₀ ⊗ … ⊗ Oₙ₋₁)·a` on a raw amplitude vector, one operator per qubit.
pub fn apply_local_raw(amps: &[C64], ops: &[Matrix2<C64>]) -> Result<Vec<C64>> {
    let n = amps.len().trailing_zeros() as usize;
    if !amps.len().is_power_of_two() || ops.len() != n {
        return Err(Error::WrongSize { expected: n, got: ops.len() });
    }
    let mut cur = amps.to_vec();
    for (q, op) in ops.iter().enumerate() {
        let b = bit_of(n, q);
        for i in 0..cur.len() {
            if i & b == 0 {
                let (lo, hi) = (cur[i], cur[i | b]);
                cur[i] = op[(0, 0)] * lo + op[(0, 1)] * hi;
                cur[i | b] = op[(1, 0)] * lo + op[(1, 1)] * hi;
            }
        }
    }
    Ok(cur)
}

/// Applies one 2×2 operator per qubit.
///
/// With `renormalize = false` the result must already be unit norm (unitary
/// operators); use [`apply_local_raw`] to keep unnormalized amplitudes.
pub fn apply_local_operator(psi: &PureState, ops: &[Matrix2<C64>], renormalize: bool) -> Result<PureState> {
    let out = apply_local_raw(psi.amplitudes(), ops)?;
    let norm = norm_sqr(&out).sqrt();
    if norm < 1e-300 {
        return Err(Error::ZeroResult);
    }
    if !renormalize && (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    PureState::new(out, true)
}

/// Pauli matrices and identity as 2×2 complex matrices.
pub mod pauli {
    use super::*;

    pub fn i() -> Matrix2<C64> {
        Matrix2::identity()
    }

    pub fn x() -> Matrix2<C64> {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Matrix2::new(o, l, l, o)
    }

    pub fn y() -> Matrix2<C64> {
        let o = C64::new(0.0, 0.0);
        Matrix2::new(o, C64::new(0.0, -1.0), C64::new(0.0, 1.0), o)
    }

    pub fn z() -> Matrix2<C64> {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Matrix2::new(l, o, o, -l)
    }
}
