//! JSON file formats for states and density matrices.
//!
//! ```json
//! {"n_qubits": 3, "amplitudes": [[re, im], ...]}
//! {"dim": 8, "matrix": [[[re, im], ...], ...]}
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<PureState> {
        Self::from_json(&read(path)?)?.into_state()
    }

    pub fn into_state(self) -> Result<PureState> {
        let expected = 1usize.checked_shl(self.n_qubits as u32).unwrap_or(0);
        if self.amplitudes.len() != expected {
            return Err(Error::BadLength(self.amplitudes.len()));
        }
        PureState::new(self.amplitudes.into_iter().map(|[re, im]| C64::new(re, im)).collect(), false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        StateFile { n_qubits: s.n_qubits(), amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect() }
    }
}

impl DensityFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<DensityMatrix> {
        Self::from_json(&read(path)?)?.into_density()
    }

    pub fn into_density(self) -> Result<DensityMatrix> {
        if self.matrix.len() != self.dim || self.matrix.iter().any(|row| row.len() != self.dim) {
            return Err(Error::WrongSize { expected: self.dim, got: self.matrix.len() });
        }
        let m = DMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.matrix[i][j];
            C64::new(re, im)
        });
        DensityMatrix::new(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

impl From<&DensityMatrix> for DensityFile {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        DensityFile {
            dim: rho.dim(),
            matrix: (0..rho.dim()).map(|i| (0..rho.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect(),
        }
    }
}
