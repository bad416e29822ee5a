//! Convex-roof extensions by direct search over ensemble decompositions.
//!
//! Every decomposition of a rank-`r` state `ρ = Σⱼ λⱼ|vⱼ⟩⟨vⱼ|` into `m`
//! members is `|ψ̃ᵢ⟩ = Σⱼ Uᵢⱼ √λⱼ |vⱼ⟩` for an `m×r` isometry `U`. The search
//! walks the isometry by elementary two-row rotations, so every visited point
//! is an exact decomposition and every reported value is an upper bound on
//! the roof.

mod curves;
mod reference;
mod search;

pub use curves::{characteristic_min_curve, lower_convex_envelope, CurvePoint};
pub use reference::{reference_decomposition, ReferenceName, PATTERN_A, PATTERN_B};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::measures::{one_tangle_a_raw, three_tangle_raw};
use crate::qstate::{norm_sqr, DensityMatrix, Ensemble, PureState};
use crate::{Error, Result, C64};

/// Eigenvalues at or below this do not count towards the rank.
pub const RANK_CUTOFF: f64 = 1e-10;
/// Members lighter than this are dropped from returned ensembles.
pub const WEIGHT_CUTOFF: f64 = 1e-12;
const ISOMETRY_TOLERANCE: f64 = 1e-10;

/// Pure-state functional whose convex roof is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoofMeasure {
    /// Three-tangle (three qubits only).
    Tau3,
    /// `4·det ρ_A`, the squared concurrence across qubit A versus the rest.
    OneTangleA,
}

impl RoofMeasure {
    /// `w·f(ψ̃/√w)` for an unnormalized member with `w = ‖ψ̃‖²`.
    #[inline]
    pub(crate) fn weighted(self, raw: &[C64]) -> f64 {
        let w = norm_sqr(raw);
        if w < 1e-300 {
            return 0.0;
        }
        match self {
            RoofMeasure::Tau3 => three_tangle_raw(raw).expect("three-qubit member") / w,
            RoofMeasure::OneTangleA => one_tangle_a_raw(raw) / w,
        }
    }

    /// Value on a normalized pure state; `Tau3` needs three qubits and
    /// `OneTangleA` at least two.
    pub fn pure(self, psi: &PureState) -> Result<f64> {
        match self {
            RoofMeasure::Tau3 if psi.dim() != 8 => Err(Error::WrongSize { expected: 8, got: psi.dim() }),
            RoofMeasure::OneTangleA if psi.dim() < 4 => Err(Error::WrongSize { expected: 4, got: psi.dim() }),
            _ => Ok(self.weighted(psi.amplitudes())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RoofMeasure::Tau3 => "tau3",
            RoofMeasure::OneTangleA => "one_tangle_A",
        }
    }
}

impl std::str::FromStr for RoofMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau3" => Ok(RoofMeasure::Tau3),
            "one_tangle_A" | "one-tangle" | "one_tangle" => Ok(RoofMeasure::OneTangleA),
            other => Err(Error::param(format!("unknown roof measure '{other}'"))),
        }
    }
}

/// Eigen-ensemble `{λⱼ, |vⱼ⟩}` restricted to the support of a state.
#[derive(Debug, Clone)]
pub struct EigenEnsemble {
    values: Vec<f64>,
    vectors: Vec<Vec<C64>>,
}

impl EigenEnsemble {
    pub fn of(rho: &DensityMatrix) -> Self {
        let spec = rho.spectrum();
        let mut values = Vec::new();
        let mut vectors = Vec::new();
        for (k, &v) in spec.values.iter().enumerate() {
            if v > RANK_CUTOFF {
                values.push(v);
                vectors.push(spec.vectors.column(k).iter().copied().collect());
            }
        }
        EigenEnsemble { values, vectors }
    }

    /// Uses a caller-chosen eigenbasis, e.g. to fix a basis inside a
    /// degenerate eigenspace. The parts must reproduce `rho` within 1e-10.
    pub fn from_parts(rho: &DensityMatrix, values: Vec<f64>, vectors: Vec<PureState>) -> Result<Self> {
        if values.len() != vectors.len() || values.is_empty() {
            return Err(Error::param("eigenvalue and eigenvector counts differ"));
        }
        if vectors.iter().any(|v| v.dim() != rho.dim()) {
            return Err(Error::MixedDimensions);
        }
        let d = rho.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (l, v) in values.iter().zip(&vectors) {
            let a = v.amplitudes();
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += a[i] * a[j].conj() * *l;
                }
            }
        }
        let dev = (m - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > 1e-10 {
            return Err(Error::param(format!("eigen-ensemble does not reproduce the state (deviation {dev:.3e})")));
        }
        Ok(EigenEnsemble { values, vectors: vectors.into_iter().map(PureState::into_amplitudes).collect() })
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// Rows `√λⱼ ⟨vⱼ|` stacked as an `r×d` matrix.
    fn scaled_rows(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(self.rank(), d, |j, k| self.vectors[j][k] * self.values[j].sqrt())
    }

    /// Unnormalized members `U·B` for an `m×r` isometry.
    fn members(&self, u: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        check_isometry(u, self.rank())?;
        Ok(u * self.scaled_rows())
    }

    pub fn with_isometry(&self, u: &DMatrix<C64>) -> Result<Ensemble> {
        ensemble_from_rows(&self.members(u)?)
    }
}

fn check_isometry(u: &DMatrix<C64>, rank: usize) -> Result<()> {
    if u.ncols() != rank || u.nrows() < rank {
        return Err(Error::RankMismatch { columns: u.ncols(), rank });
    }
    let gram = u.adjoint() * u;
    let dev = (gram - DMatrix::<C64>::identity(rank, rank)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > ISOMETRY_TOLERANCE {
        return Err(Error::NotIsometry(dev));
    }
    Ok(())
}

/// Members closer than this (after aligning the global phase) are merged.
const MERGE_DISTANCE: f64 = 1e-12;

fn same_ray(a: &PureState, b: &PureState) -> bool {
    let ov = a.inner(b);
    if ov.norm() == 0.0 {
        return false;
    }
    let phase = ov / ov.norm();
    let d: f64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (y - phase * x).norm_sqr()).sum();
    d.sqrt() < MERGE_DISTANCE
}

/// Normalizes the rows of an `m×d` member matrix into an ensemble, dropping
/// members lighter than [`WEIGHT_CUTOFF`] and merging repeated states.
fn ensemble_from_rows(rows: &DMatrix<C64>) -> Result<Ensemble> {
    let mut members: Vec<(f64, PureState)> = Vec::new();
    for i in 0..rows.nrows() {
        let raw: Vec<C64> = rows.row(i).iter().copied().collect();
        let w = norm_sqr(&raw);
        if w < WEIGHT_CUTOFF {
            continue;
        }
        let state = PureState::new(raw, true)?;
        match members.iter_mut().find(|(_, s)| same_ray(s, &state)) {
            Some((acc, _)) => *acc += w,
            None => members.push((w, state)),
        }
    }
    let total: f64 = members.iter().map(|(w, _)| w).sum();
    for (w, _) in &mut members {
        *w /= total;
    }
    Ensemble::new(members)
}

/// Decomposition of `rho` induced by the isometry `u` acting on its
/// eigen-ensemble.
pub fn ensemble_from_isometry(rho: &DensityMatrix, u: &DMatrix<C64>) -> Result<Ensemble> {
    EigenEnsemble::of(rho).with_isometry(u)
}

/// A convex-roof minimization request.
#[derive(Debug, Clone)]
pub struct RoofProblem {
    pub target: DensityMatrix,
    pub measure: RoofMeasure,
    /// Members per decomposition; `None` means `max(8, 2·rank)`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    /// Sweep improvement below which the step size is halved.
    pub tolerance: f64,
    /// Sweep cap per restart.
    pub max_iterations: usize,
    /// Extra starting isometries searched before the random restarts.
    pub initial: Vec<DMatrix<C64>>,
}

impl RoofProblem {
    pub const DEFAULT_RESTARTS: usize = 32;
    pub const DEFAULT_SEED: u64 = 42;
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;
    pub const DEFAULT_MAX_ITERATIONS: usize = 2000;

    pub fn new(target: DensityMatrix, measure: RoofMeasure) -> Self {
        RoofProblem {
            target,
            measure,
            ensemble_size: None,
            restarts: Self::DEFAULT_RESTARTS,
            seed: Self::DEFAULT_SEED,
            tolerance: Self::DEFAULT_TOLERANCE,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            initial: Vec::new(),
        }
    }

    pub fn ensemble_size(mut self, m: usize) -> Self {
        self.ensemble_size = Some(m);
        self
    }

    pub fn restarts(mut self, n: usize) -> Self {
        self.restarts = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_initial_isometry(mut self, u: DMatrix<C64>) -> Self {
        self.initial.push(u);
        self
    }

    pub fn rank(&self) -> usize {
        self.target.rank(RANK_CUTOFF)
    }

    pub fn resolved_ensemble_size(&self) -> usize {
        self.ensemble_size.unwrap_or_else(|| (2 * self.rank()).max(8))
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.target.dim();
        match self.measure {
            RoofMeasure::Tau3 if dim != 8 => {
                return Err(Error::BadProblem(format!("three-tangle needs a three-qubit state, got dimension {dim}")))
            }
            RoofMeasure::OneTangleA if dim != 4 && dim != 8 => {
                return Err(Error::BadProblem(format!("roofs are limited to two or three qubits, got dimension {dim}")))
            }
            _ => {}
        }
        let rank = self.rank();
        let m = self.resolved_ensemble_size();
        if m < rank {
            return Err(Error::BadProblem(format!("ensemble size {m} below rank {rank}")));
        }
        if self.restarts == 0 && self.initial.is_empty() {
            return Err(Error::BadProblem("at least one restart is required".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::BadProblem(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::BadProblem("iteration cap must be positive".into()));
        }
        for u in &self.initial {
            check_isometry(u, rank)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RoofResult {
    /// Ensemble average of the measure over `ensemble`.
    pub value: f64,
    pub ensemble: Ensemble,
    /// Whether the winning run shrank its step below the floor before the
    /// iteration cap.
    pub converged: bool,
    /// Sweeps used by the winning run.
    pub iterations: usize,
    /// Index of the winning run; initial isometries come first.
    pub best_run: usize,
    /// Final value of every run in index order.
    pub run_values: Vec<f64>,
}

/// Multi-restart direct search for the lowest ensemble average.
///
/// Runs are independent and seeded from `(seed, run index)`, so the result
/// does not depend on how they are scheduled. Ties go to the lowest index.
pub fn roof_minimize(p: &RoofProblem) -> Result<RoofResult> {
    p.validate()?;
    let eig = EigenEnsemble::of(&p.target);
    let m = p.resolved_ensemble_size();
    let basis = eig.scaled_rows();
    let settings = search::Settings { tolerance: p.tolerance, max_iterations: p.max_iterations };
    let runs = p.initial.len() + p.restarts;
    let outcomes: Vec<search::Outcome> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let u = match p.initial.get(run) {
                Some(u) => pad_isometry(u, m),
                None => search::random_isometry(m, eig.rank(), p.seed, (run - p.initial.len()) as u64),
            };
            search::run(&u, &basis, p.measure, &settings)
        })
        .collect();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.value.total_cmp(&b.value).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("at least one run");
    let winner = &outcomes[best];
    let ensemble = ensemble_from_rows(&winner.rows)?;
    let value = ensemble.try_average(|s| p.measure.pure(s))?;
    Ok(RoofResult {
        value,
        ensemble,
        converged: winner.converged,
        iterations: winner.iterations,
        best_run: best,
        run_values: outcomes.iter().map(|o| o.value).collect(),
    })
}

/// Appends zero rows so a supplied isometry matches the search size.
fn pad_isometry(u: &DMatrix<C64>, m: usize) -> DMatrix<C64> {
    if u.nrows() >= m {
        return u.clone();
    }
    let mut out = DMatrix::<C64>::zeros(m, u.ncols());
    out.view_mut((0, 0), (u.nrows(), u.ncols())).copy_from(u);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::qstate::{named_pure, sigma_family, Family, StateLabel};

    #[test]
    fn identity_isometry_gives_eigen_ensemble() {
        let rho = sigma_family(Family::Sigma { x: 0.6 }).unwrap();
        let eig = EigenEnsemble::of(&rho);
        let e = eig.with_isometry(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(e.len(), 4);
        let mut w: Vec<f64> = e.members().iter().map(|(w, _)| *w).collect();
        w.sort_by(|a, b| b.total_cmp(a));
        assert!((w[0] - 0.6).abs() < 1e-12 && (w[3] - 0.4 / 3.0).abs() < 1e-12);
        assert!(e.density().max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn isometry_errors() {
        let rho = sigma_family(Family::PiGhz).unwrap();
        let bad = DMatrix::<C64>::identity(8, 3) * C64::new(2.0, 0.0);
        assert!(matches!(ensemble_from_isometry(&rho, &bad), Err(Error::NotIsometry(_))));
        let wrong = DMatrix::<C64>::identity(8, 4);
        assert!(matches!(ensemble_from_isometry(&rho, &wrong), Err(Error::RankMismatch { columns: 4, rank: 3 })));
    }

    #[test]
    fn rank_one_roof_is_the_pure_value() {
        let ghz = named_pure(StateLabel::Ghz).unwrap().projector();
        let r = roof_minimize(&RoofProblem::new(ghz, RoofMeasure::Tau3).restarts(2)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.ensemble.len(), r.ensemble.members().len());
    }

    #[test]
    fn problem_validation() {
        let two = crate::qstate::DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(roof_minimize(&RoofProblem::new(two.clone(), RoofMeasure::Tau3)), Err(Error::BadProblem(_))));
        let pi = sigma_family(Family::PiGhz).unwrap();
        assert!(roof_minimize(&RoofProblem::new(pi.clone(), RoofMeasure::Tau3).ensemble_size(2)).is_err());
        assert!(roof_minimize(&RoofProblem::new(pi.clone(), RoofMeasure::Tau3).restarts(0)).is_err());
        assert!(roof_minimize(&RoofProblem::new(pi, RoofMeasure::Tau3).tolerance(-1.0)).is_err());
        assert!(RoofProblem::new(two, RoofMeasure::OneTangleA).validate().is_ok());
    }

    #[test]
    fn pi_ghz_three_tangle_roof_vanishes() {
        let pi = sigma_family(Family::PiGhz).unwrap();
        let r = roof_minimize(&RoofProblem::new(pi.clone(), RoofMeasure::Tau3).restarts(8)).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
        assert!(r.ensemble.density().max_abs_diff(&pi) < 1e-8);
    }

    #[test]
    fn sigma_middle_branch_is_reached_from_above() {
        let x = 0.85;
        let r = roof_minimize(&RoofProblem::new(sigma_family(Family::Sigma { x }).unwrap(), RoofMeasure::Tau3)).unwrap();
        let want = analytic::alpha_i(x).unwrap();
        assert!(r.value >= want - 1e-9 && r.value <= want + 1e-3, "{} vs {want}", r.value);
    }
}
