//! JSON wire format for 4x4 complex matrices:
//! `{"matrix": [[[re, im], x4] x4]}`.

use crate::density::{DensityMatrix4, InvalidState, Matrix4c, C64};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("matrix must be 4x4, got {rows} rows and row {bad_row} of length {bad_len}")]
    BadShape { rows: usize, bad_row: usize, bad_len: usize },
    #[error(transparent)]
    Invalid(#[from] InvalidState),
}

impl StateJson {
    pub fn to_matrix(&self) -> Result<Matrix4c, ReadError> {
        if self.matrix.len() != 4 {
            return Err(ReadError::BadShape { rows: self.matrix.len(), bad_row: 0, bad_len: 0 });
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != 4 {
                return Err(ReadError::BadShape {
                    rows: 4,
                    bad_row: i,
                    bad_len: row.len(),
                });
            }
        }
        Ok(Matrix4c::from_fn(|i, j| {
            C64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        }))
    }

    pub fn from_matrix(m: &Matrix4c) -> Self {
        let matrix = (0..4)
            .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { matrix }
    }
}

/// Parse a matrix file without density-matrix validation (structure-only
/// consumers like the CS/X transform accept arbitrary complex matrices).
pub fn read_matrix_file(path: &Path) -> Result<Matrix4c, ReadError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parsed: StateJson = serde_json::from_str(&text).map_err(|source| ReadError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    parsed.to_matrix()
}

/// Parse and validate a density matrix at the given tolerance.
pub fn read_state_file(path: &Path, tol: f64) -> Result<DensityMatrix4, ReadError> {
    let m = read_matrix_file(path)?;
    Ok(DensityMatrix4::validate(m, tol)?)
}

pub fn matrix_to_json_string(m: &Matrix4c) -> String {
    serde_json::to_string_pretty(&StateJson::from_matrix(m)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_json() {
        let m = Matrix4c::from_fn(|i, j| C64::new(0.1 * i as f64, 0.01 * j as f64));
        let text = matrix_to_json_string(&m);
        let parsed: StateJson = serde_json::from_str(&text).unwrap();
        assert!((parsed.to_matrix().unwrap() - m).norm() < 1e-16);
    }

    #[test]
    fn shape_errors_are_reported() {
        let bad = StateJson { matrix: vec![vec![[0.0, 0.0]; 4]; 3] };
        assert!(matches!(bad.to_matrix(), Err(ReadError::BadShape { rows: 3, .. })));
        let bad = StateJson {
            matrix: vec![
                vec![[0.0, 0.0]; 4],
                vec![[0.0, 0.0]; 2],
                vec![[0.0, 0.0]; 4],
                vec![[0.0, 0.0]; 4],
            ],
        };
        assert!(matches!(
            bad.to_matrix(),
            Err(ReadError::BadShape { bad_row: 1, bad_len: 2, .. })
        ));
    }

    #[test]
    fn validation_failure_surfaces_from_reader() {
        let dir = std::env::temp_dir().join("qdiscord-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("notpsd.json");
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 3)] = C64::new(0.6, 0.0);
        m[(3, 0)] = C64::new(0.6, 0.0);
        std::fs::write(&path, matrix_to_json_string(&m)).unwrap();
        assert!(matches!(read_state_file(&path, 1e-10), Err(ReadError::Invalid(_))));
        assert!(read_matrix_file(&path).is_ok());
    }
}
