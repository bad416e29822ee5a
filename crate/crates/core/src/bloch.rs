//! Four-level Bloch vectors over the GHZ+ subspace.
//!
//! A `d = 4` state is written `ρ = (I + √6 n⃗·λ⃗)/4` in the generalized
//! Gell-Mann basis, ordered as the six symmetric matrices `Λ_s^{jk}`, the six
//! antisymmetric `Λ_a^{jk}` (pairs 12, 13, 14, 23, 24, 34) and the three
//! diagonal `Λ¹, Λ², Λ³`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, Matrix3, Matrix4, Vector3};

use crate::qstate::{ghz_basis_amplitudes, hermitian_eigenvalues, named_pure, DensityMatrix, Sign, StateLabel, PSD_TOLERANCE};
use crate::roof::PATTERN_A;
use crate::{Error, Result, C64};

pub const DIM: usize = 4;
pub const COMPONENTS: usize = 15;
const LEAKAGE_TOLERANCE: f64 = 1e-10;

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone)]
pub struct GellMannBasis {
    mats: [Matrix4<C64>; COMPONENTS],
}

impl GellMannBasis {
    fn build() -> Self {
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let mut mats = [Matrix4::<C64>::zeros(); COMPONENTS];
        for (n, &(j, k)) in PAIRS.iter().enumerate() {
            mats[n][(j, k)] = one;
            mats[n][(k, j)] = one;
            mats[n + 6][(j, k)] = -i;
            mats[n + 6][(k, j)] = i;
        }
        for l in 1..=3usize {
            let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
            let m = &mut mats[11 + l];
            for d in 0..l {
                m[(d, d)] = C64::new(scale, 0.0);
            }
            m[(l, l)] = C64::new(-scale * l as f64, 0.0);
        }
        GellMannBasis { mats }
    }

    pub fn get() -> &'static GellMannBasis {
        static BASIS: OnceLock<GellMannBasis> = OnceLock::new();
        BASIS.get_or_init(GellMannBasis::build)
    }

    pub fn matrices(&self) -> &[Matrix4<C64>; COMPONENTS] {
        &self.mats
    }

    pub fn len(&self) -> usize {
        COMPONENTS
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn gell_mann_basis() -> &'static GellMannBasis {
    GellMannBasis::get()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; COMPONENTS]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn components(&self) -> &[f64; COMPONENTS] {
        &self.0
    }
}

fn to_matrix4(rho: &DensityMatrix) -> Result<Matrix4<C64>> {
    if rho.dim() != DIM {
        return Err(Error::WrongSize { expected: DIM, got: rho.dim() });
    }
    Ok(Matrix4::from_fn(|i, j| rho.matrix()[(i, j)]))
}

/// `nᵢ = Tr(ρλᵢ)/√(3/2)`, inverting `ρ = (I + √6 n⃗·λ⃗)/4`.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    let m = to_matrix4(rho)?;
    let scale = 2.0 / 6f64.sqrt();
    let mut n = [0.0; COMPONENTS];
    for (out, lam) in n.iter_mut().zip(gell_mann_basis().matrices()) {
        *out = (m * lam).trace().re * scale;
    }
    Ok(BlochVector(n))
}

/// `(I + √6 n⃗·λ⃗)/4`, rejected if it is not positive semidefinite.
pub fn state_from_bloch(n: &BlochVector) -> Result<DensityMatrix> {
    let mut m = Matrix4::<C64>::identity();
    for (c, lam) in n.0.iter().zip(gell_mann_basis().matrices()) {
        m += lam * C64::new(6f64.sqrt() * c, 0.0);
    }
    m *= C64::new(0.25, 0.0);
    let dm = DMatrix::from_fn(DIM, DIM, |i, j| m[(i, j)]);
    let min = *hermitian_eigenvalues(&dm).last().unwrap();
    if min < -PSD_TOLERANCE {
        return Err(Error::NotAState(min));
    }
    DensityMatrix::new(dm)
}

/// `8×4` matrix whose columns are `|GHZ,k+⟩`.
fn ghz_plus_columns() -> DMatrix<C64> {
    let cols: Vec<Vec<C64>> = (1..=4).map(|k| ghz_basis_amplitudes(k, Sign::Plus).expect("k in 1..=4")).collect();
    DMatrix::from_fn(8, DIM, |i, k| cols[k][i])
}

/// Matrix of a three-qubit state in the ordered `|GHZ,k+⟩` basis.
pub fn embed_ghz_subspace(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 8 {
        return Err(Error::WrongSize { expected: 8, got: rho.dim() });
    }
    let g = ghz_plus_columns();
    let small = g.adjoint() * rho.matrix() * &g;
    let back = &g * &small * g.adjoint();
    let leakage = (back - rho.matrix()).norm();
    if leakage > LEAKAGE_TOLERANCE {
        return Err(Error::OutsideSubspace(leakage));
    }
    DensityMatrix::new((&small + small.adjoint()) * C64::new(0.5, 0.0))
}

/// Inverse of [`embed_ghz_subspace`]: a four-level state as a three-qubit one.
pub fn lift_ghz_subspace(rho4: &DensityMatrix) -> Result<DensityMatrix> {
    if rho4.dim() != DIM {
        return Err(Error::WrongSize { expected: DIM, got: rho4.dim() });
    }
    let g = ghz_plus_columns();
    let big = &g * rho4.matrix() * g.adjoint();
    DensityMatrix::new((&big + big.adjoint()) * C64::new(0.5, 0.0))
}

/// Simplex spanned by four pure-state projectors in the Bloch space.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    vertices: [DensityMatrix; 4],
    bloch: [BlochVector; 4],
}

impl Polyhedron {
    pub fn new(vertices: [DensityMatrix; 4]) -> Result<Self> {
        let mut bloch = [BlochVector([0.0; COMPONENTS]); 4];
        for (b, v) in bloch.iter_mut().zip(&vertices) {
            *b = bloch_vector(v)?;
        }
        let gram = difference_gram(&bloch);
        let det = gram.determinant();
        if det.abs() < 1e-12 {
            return Err(Error::param("polyhedron vertices are affinely dependent"));
        }
        Ok(Polyhedron { vertices, bloch })
    }

    /// Images of `|X(3/4, φ⃗)⟩` for the four sign patterns whose three-tangle
    /// vanishes; every interior state has vanishing three-tangle.
    pub fn zero_tangle() -> Result<Self> {
        let mut verts = Vec::with_capacity(4);
        for phi in PATTERN_A {
            let p = named_pure(StateLabel::X { x: 0.75, phi })?.projector();
            verts.push(embed_ghz_subspace(&p)?);
        }
        let vertices: [DensityMatrix; 4] = verts.try_into().expect("four vertices");
        Polyhedron::new(vertices)
    }

    pub fn vertices(&self) -> &[DensityMatrix; 4] {
        &self.vertices
    }

    pub fn vertex_bloch(&self) -> &[BlochVector; 4] {
        &self.bloch
    }

    /// `Σ wᵢ Pᵢ` for nonnegative weights summing to one.
    pub fn combine(&self, weights: [f64; 4]) -> Result<DensityMatrix> {
        if weights.iter().any(|w| *w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::param("weights must be nonnegative and sum to one"));
        }
        let mut m = DMatrix::<C64>::zeros(DIM, DIM);
        for (w, v) in weights.iter().zip(&self.vertices) {
            m += v.matrix() * C64::new(*w, 0.0);
        }
        DensityMatrix::new(m)
    }

    /// Barycentric weights of `rho` if it lies in the simplex.
    ///
    /// Solves the least-squares problem on the affine hull, then requires a
    /// Frobenius residual and negative weights no larger than `tol`. Small
    /// negative weights are clamped and the rest renormalized.
    pub fn membership(&self, rho: &DensityMatrix, tol: f64) -> Result<Option<[f64; 4]>> {
        let n = bloch_vector(rho)?;
        let base = &self.bloch[3].0;
        let diffs: Vec<Vector3<f64>> = (0..COMPONENTS)
            .map(|c| Vector3::new(self.bloch[0].0[c] - base[c], self.bloch[1].0[c] - base[c], self.bloch[2].0[c] - base[c]))
            .collect();
        let gram = difference_gram(&self.bloch);
        let mut rhs = Vector3::zeros();
        for c in 0..COMPONENTS {
            rhs += diffs[c] * (n.0[c] - base[c]);
        }
        let sol = gram.lu().solve(&rhs).ok_or_else(|| Error::param("degenerate polyhedron"))?;
        let mut w = [sol[0], sol[1], sol[2], 1.0 - sol.sum()];
        let mut fitted = DMatrix::<C64>::zeros(DIM, DIM);
        for (wi, v) in w.iter().zip(&self.vertices) {
            fitted += v.matrix() * C64::new(*wi, 0.0);
        }
        let residual = (fitted - rho.matrix()).norm();
        if residual > tol || w.iter().any(|&wi| wi < -tol) {
            return Ok(None);
        }
        for wi in &mut w {
            *wi = wi.max(0.0);
        }
        let total: f64 = w.iter().sum();
        for wi in &mut w {
            *wi /= total;
        }
        Ok(Some(w))
    }
}

fn difference_gram(b: &[BlochVector; 4]) -> Matrix3<f64> {
    let mut g = Matrix3::zeros();
    for c in 0..COMPONENTS {
        let v = Vector3::new(b[0].0[c] - b[3].0[c], b[1].0[c] - b[3].0[c], b[2].0[c] - b[3].0[c]);
        g += v * v.transpose();
    }
    g
}

/// Membership of a four-level state in the zero-tangle simplex.
pub fn polyhedron_membership(rho4: &DensityMatrix, tol: f64) -> Result<Option<[f64; 4]>> {
    if rho4.dim() != DIM {
        return Err(Error::WrongSize { expected: DIM, got: rho4.dim() });
    }
    Polyhedron::zero_tangle()?.membership(rho4, tol)
}
