//! Pattern search over decompositions by two-row SU(2) rotations, with a
//! Levenberg-Marquardt stage for the three-tangle.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::RoofMeasure;
use crate::measures::HyperdetTerms;
use crate::C64;

const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-9;
const LM_ITERATIONS: usize = 100;
const LM_FLOOR: f64 = 1e-13;
const LM_MAX_DAMPING: f64 = 1e8;
/// Central-difference step for the residual Jacobian.
const LM_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub(super) struct Settings {
    pub tolerance: f64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone)]
pub(super) struct Outcome {
    pub rows: DMatrix<C64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// First `r` columns of a Haar-random `m×m` unitary, drawn from the stream
/// `stream` of the generator seeded with `seed`.
pub(super) fn random_isometry(m: usize, r: usize, seed: u64, stream: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let g = DMatrix::<C64>::from_fn(m, m, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    // fix column phases so the distribution is Haar
    let phased = DMatrix::from_fn(m, m, |i, j| {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * ph
    });
    phased.columns(0, r).into_owned()
}

struct Workspace {
    d: usize,
    rows: Vec<C64>,
    contrib: Vec<f64>,
    measure: RoofMeasure,
    scratch_a: Vec<C64>,
    scratch_b: Vec<C64>,
}

impl Workspace {
    fn new(rows: &DMatrix<C64>, measure: RoofMeasure) -> Self {
        let (m, d) = rows.shape();
        let flat: Vec<C64> = (0..m).flat_map(|i| (0..d).map(move |k| (i, k))).map(|(i, k)| rows[(i, k)]).collect();
        let contrib = (0..m).map(|i| measure.weighted(&flat[i * d..(i + 1) * d])).collect();
        Workspace { d, rows: flat, contrib, measure, scratch_a: vec![C64::default(); d], scratch_b: vec![C64::default(); d] }
    }

    fn m(&self) -> usize {
        self.contrib.len()
    }

    fn total(&self) -> f64 {
        self.contrib.iter().sum()
    }

    /// Applies `[[a, b], [c, e]]` to rows `i`, `j` if that lowers the total.
    fn try_rotate(&mut self, i: usize, j: usize, g: [C64; 4]) -> bool {
        let d = self.d;
        for k in 0..d {
            let (ri, rj) = (self.rows[i * d + k], self.rows[j * d + k]);
            self.scratch_a[k] = g[0] * ri + g[1] * rj;
            self.scratch_b[k] = g[2] * ri + g[3] * rj;
        }
        let fi = self.measure.weighted(&self.scratch_a);
        let fj = self.measure.weighted(&self.scratch_b);
        if fi + fj < self.contrib[i] + self.contrib[j] {
            self.rows[i * d..(i + 1) * d].copy_from_slice(&self.scratch_a);
            self.rows[j * d..(j + 1) * d].copy_from_slice(&self.scratch_b);
            self.contrib[i] = fi;
            self.contrib[j] = fj;
            true
        } else {
            false
        }
    }

    fn into_rows(self) -> DMatrix<C64> {
        let d = self.d;
        DMatrix::from_fn(self.m(), d, |i, k| self.rows[i * d + k])
    }
}

fn rotations(angle: f64) -> [[C64; 4]; 2] {
    let (s, c) = angle.sin_cos();
    let (c, s_re, s_im) = (C64::new(c, 0.0), C64::new(s, 0.0), C64::new(0.0, s));
    [[c, -s_re, s_re, c], [c, s_im, s_im, c]]
}

/// Coordinate pattern search from the member matrix `rows`.
///
/// A sweep tries `±step` along both rotation generators of every row pair. A
/// sweep that improves the total by less than `tolerance` halves the step;
/// the run has converged once the step falls below `MIN_STEP`.
fn descend(rows: &DMatrix<C64>, measure: RoofMeasure, settings: &Settings) -> Outcome {
    let mut ws = Workspace::new(rows, measure);
    let m = ws.m();
    let mut step = INITIAL_STEP;
    let mut converged = false;
    let mut iterations = 0;
    let mut total = ws.total();
    while iterations < settings.max_iterations {
        iterations += 1;
        let before = total;
        let plus = rotations(step);
        let minus = rotations(-step);
        for i in 0..m {
            for j in i + 1..m {
                for kind in 0..2 {
                    if !ws.try_rotate(i, j, plus[kind]) {
                        ws.try_rotate(i, j, minus[kind]);
                    }
                }
            }
        }
        total = ws.total();
        if before - total < settings.tolerance {
            step *= 0.5;
            if step < MIN_STEP {
                converged = true;
                break;
            }
        }
    }
    Outcome { value: total, converged, iterations, rows: ws.into_rows() }
}

/// Orthonormalizes the columns of `y` by its polar factor `Y(Y†Y)^{-1/2}`.
fn polar(y: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    let eig = (y.adjoint() * y).symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l.is_nan() || l <= 1e-14) {
        return None;
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l.sqrt(), 0.0)));
    Some(y * &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint())
}

/// Complex residuals `4·Det(ψ̃)/‖ψ̃‖³` of the members `polar(Y)·B`, stacked
/// as real and imaginary parts. Their squared norm is `Σ wᵢτᵢ²`, which
/// bounds the square of the ensemble-average three-tangle.
fn residuals(y: &DMatrix<C64>, basis: &DMatrix<C64>) -> Option<DVector<f64>> {
    let rows = polar(y)? * basis;
    let m = rows.nrows();
    let mut out = DVector::zeros(2 * m);
    for i in 0..m {
        let raw: Vec<C64> = rows.row(i).iter().copied().collect();
        let w: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        if w < 1e-300 {
            continue;
        }
        let z = HyperdetTerms::of(&raw).expect("three-qubit member").hyperdeterminant() * (4.0 / (w * w.sqrt()));
        out[i] = z.re;
        out[m + i] = z.im;
    }
    Some(out)
}

fn perturbed(y: &DMatrix<C64>, k: usize, h: f64) -> DMatrix<C64> {
    let n = y.len();
    let mut out = y.clone();
    let delta = if k < n { C64::new(h, 0.0) } else { C64::new(0.0, h) };
    out[k % n] += delta;
    out
}

/// Levenberg-Marquardt on the three-tangle residuals from the isometry `u`.
///
/// Drives every member towards a zero of the hyperdeterminant, which the
/// coordinate search approaches only slowly; a state whose roof vanishes is
/// reached in a few dozen steps. Returns the polished isometry.
fn zero_residuals(u: &DMatrix<C64>, basis: &DMatrix<C64>) -> DMatrix<C64> {
    let mut y = u.clone();
    let Some(mut z) = residuals(&y, basis) else { return u.clone() };
    let n = 2 * y.len();
    let mut damping = 1e-3;
    for _ in 0..LM_ITERATIONS {
        if z.norm() < LM_FLOOR || damping > LM_MAX_DAMPING {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(z.len(), n);
        for k in 0..n {
            let (Some(fwd), Some(back)) = (residuals(&perturbed(&y, k, LM_STEP), basis), residuals(&perturbed(&y, k, -LM_STEP), basis))
            else {
                return polar(&y).unwrap_or_else(|| u.clone());
            };
            jac.set_column(k, &((fwd - back) / (2.0 * LM_STEP)));
        }
        let normal = &jac * jac.transpose() + DMatrix::<f64>::identity(z.len(), z.len()) * damping;
        let Some(chol) = normal.cholesky() else { break };
        let delta = -(jac.transpose() * chol.solve(&z));
        let trial = DMatrix::from_fn(y.nrows(), y.ncols(), |i, j| {
            let k = i + j * y.nrows();
            y[(i, j)] + C64::new(delta[k], delta[k + y.len()])
        });
        match residuals(&trial, basis) {
            Some(tz) if tz.norm() < z.norm() => {
                (y, z) = (trial, tz);
                damping = (damping / 3.0).max(1e-12);
            }
            _ => damping *= 4.0,
        }
    }
    polar(&y).unwrap_or_else(|| u.clone())
}

/// One restart: coordinate search from `u·B`, and for the three-tangle a
/// second attempt that first zeroes the residuals. The lower value wins,
/// with ties going to the plain search.
pub(super) fn run(u: &DMatrix<C64>, basis: &DMatrix<C64>, measure: RoofMeasure, settings: &Settings) -> Outcome {
    let plain = descend(&(u * basis), measure, settings);
    if measure != RoofMeasure::Tau3 || plain.value <= settings.tolerance {
        return plain;
    }
    let polished = descend(&(zero_residuals(u, basis) * basis), measure, settings);
    if polished.value < plain.value {
        polished
    } else {
        plain
    }
}
