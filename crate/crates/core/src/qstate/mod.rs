//! Pure states, density matrices and ensembles on up to five qubits.

mod io;
mod named;
mod ops;

pub use io::{DensityFile, StateFile};
pub use named::{
    ghz_basis, ghz_basis_amplitudes, named_pure, sigma_family, Family, Sign, StateLabel, GHZ_PLUS_BASIS,
};
pub use ops::{pauli, apply_local_operator, apply_local_raw, partial_trace, partial_transpose, partial_transpose_many};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result, C64};

/// Tolerance on `|‖ψ‖ − 1|` for states passed without normalization.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are treated as rounding and clamped.
pub const PSD_TOLERANCE: f64 = 1e-10;

pub(crate) fn qubits_for_len(len: usize) -> Option<usize> {
    match len {
        4 => Some(2),
        8 => Some(3),
        16 => Some(4),
        32 => Some(5),
        _ => None,
    }
}

pub(crate) fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// A normalized pure state of 2 to 5 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Builds a state from amplitudes ordered by basis index.
    ///
    /// With `normalize` the vector is rescaled to unit norm; otherwise its norm
    /// must already be within [`NORM_TOLERANCE`] of one (it is still rescaled
    /// so the stored norm is exact to rounding).
    pub fn new(amplitudes: Vec<C64>, normalize: bool) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len()).ok_or(Error::BadLength(amplitudes.len()))?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::param("amplitudes must be finite"));
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if !normalize && (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        let amps = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(PureState { n_qubits, amps })
    }

    /// Computational basis state `|bits⟩` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::param(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        PureState::new(amps, false)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix::from_hermitian_unchecked(m)
    }

    /// Overlap `|⟨ψ|φ⟩|²`; equal up to global phase iff this is one.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// Hermitian eigen-decomposition sorted by decreasing eigenvalue.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: DMatrix<C64>,
}

pub(crate) fn hermitian_spectrum(m: &DMatrix<C64>) -> Spectrum {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |i, k| eig.eigenvectors[(i, order[k])]);
    Spectrum { values, vectors }
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace within [`DENSITY_TOLERANCE`] and
    /// eigenvalues against [`PSD_TOLERANCE`]. The stored matrix is the
    /// Hermitian part of the input.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 2 || !m.nrows().is_power_of_two() || m.nrows() > 32 {
            return Err(Error::InvalidDensity(format!("unsupported shape {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let skew = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {skew:.3e})")));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOLERANCE || trace.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
        }
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let min = *hermitian_eigenvalues(&herm).last().unwrap();
        if min < -PSD_TOLERANCE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { m: herm })
    }

    /// For matrices that are Hermitian unit-trace PSD by construction.
    pub(crate) fn from_hermitian_unchecked(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        DensityMatrix { m }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        DensityMatrix::new(DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut s = hermitian_spectrum(&self.m);
        for v in &mut s.values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        s
    }

    /// Count of eigenvalues above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        hermitian_eigenvalues(&self.m).iter().filter(|&&v| v > cutoff).count()
    }

    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for z in self.m.iter() {
            acc += z.norm_sqr();
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.m - &other.m).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Convex combination `t·self + (1 − t)·other`.
    pub fn mix(&self, t: f64, other: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::param(format!("mixing weight {t} outside [0, 1]")));
        }
        if self.dim() != other.dim() {
            return Err(Error::MixedDimensions);
        }
        Ok(DensityMatrix::from_hermitian_unchecked(
            &self.m * C64::new(t, 0.0) + &other.m * C64::new(1.0 - t, 0.0),
        ))
    }

    /// `U ρ U†` for a unitary `U` of matching size.
    pub fn conjugate_by(&self, u: &DMatrix<C64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::WrongSize { expected: self.dim(), got: u.nrows() });
        }
        let m = u * &self.m * u.adjoint();
        DensityMatrix::new((&m + m.adjoint()) * C64::new(0.5, 0.0))
    }
}

/// Weighted collection of pure states realizing a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub const WEIGHT_TOLERANCE: f64 = 1e-12;

    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::InvalidEnsemble("no members".into()))?;
        let n = first.1.n_qubits();
        if members.iter().any(|(_, s)| s.n_qubits() != n) {
            return Err(Error::MixedDimensions);
        }
        if let Some((w, _)) = members.iter().find(|(w, _)| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidEnsemble(format!("negative or non-finite weight {w}")));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > Self::WEIGHT_TOLERANCE {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Ensemble { members })
    }

    /// Uniform weights over `states`.
    pub fn uniform(states: Vec<PureState>) -> Result<Self> {
        let w = 1.0 / states.len().max(1) as f64;
        Ensemble::new(states.into_iter().map(|s| (w, s)).collect())
    }

    /// Concatenates ensembles, scaling each by its mixing weight.
    pub fn combine(parts: Vec<(f64, Ensemble)>) -> Result<Self> {
        let members = parts
            .into_iter()
            .flat_map(|(t, e)| e.members.into_iter().map(move |(w, s)| (t * w, s)))
            .collect();
        Ensemble::new(members)
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.members[0].1.n_qubits()
    }

    /// `Σ wᵢ f(ψᵢ)`.
    pub fn average<F: Fn(&PureState) -> f64>(&self, f: F) -> f64 {
        self.members.iter().map(|(w, s)| w * f(s)).sum()
    }

    /// Like [`Ensemble::average`] for fallible measures.
    pub fn try_average<F: Fn(&PureState) -> Result<f64>>(&self, f: F) -> Result<f64> {
        self.members.iter().try_fold(0.0, |acc, (w, s)| Ok(acc + w * f(s)?))
    }

    /// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`.
    pub fn density(&self) -> DensityMatrix {
        let d = self.members[0].1.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (w, s) in &self.members {
            let a = s.amplitudes();
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += a[i] * a[j].conj() * *w;
                }
            }
        }
        DensityMatrix::from_hermitian_unchecked(m)
    }
}

/// Free-function form of [`PureState::new`].
pub fn make_pure(amplitudes: Vec<C64>, normalize: bool) -> Result<PureState> {
    PureState::new(amplitudes, normalize)
}

/// Free-function form of [`Ensemble::density`].
pub fn density_from_ensemble(e: &Ensemble) -> DensityMatrix {
    e.density()
}
