//! Centrosymmetric (CS) and X matrix structure, and the local orthogonal
//! double-Hadamard similarity mapping one onto the other.
//!
//! The transform applies to arbitrary complex fourth-order matrices, not only
//! density matrices; density-specific checks belong to the callers.

use crate::density::{Matrix4c, C64};
use nalgebra::Matrix4;
use sha2::{Digest, Sha256};

/// Positions of the eight X slots, row-major:
/// (0,0), (0,3), (1,1), (1,2), (2,1), (2,2), (3,0), (3,3).
pub const X_SLOTS: [(usize, usize); 8] =
    [(0, 0), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 0), (3, 3)];

/// Positions holding the eight independent CS coefficients (first two rows);
/// the last two rows repeat them in reversed order.
pub const CS_SLOTS: [(usize, usize); 8] =
    [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3)];

/// Sign table of the CS -> X map: x_coeff[i] = sum_j SIGNS[i][j] * cs_coeff[j] / 2.
///
/// Derived by conjugating the eight CS basis matrices with the double
/// Hadamard transform and frozen here; a unit test regenerates it from the
/// conjugation. Row 4 is (+,+,-,-,-,-,+,+).
pub const CS_TO_X_SIGNS: [[i8; 8]; 8] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, -1, 1, -1, -1, 1, -1, 1],
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, -1, 1, -1, 1, -1, 1, -1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, 1, 1, 1, -1, -1, -1, -1],
    [1, -1, -1, 1, -1, 1, 1, -1],
];

/// SHA-256 of the frozen sign table, for provenance in `--version` output.
pub fn signs_table_hash() -> String {
    let mut hasher = Sha256::new();
    for row in &CS_TO_X_SIGNS {
        for &s in row {
            hasher.update([s as u8]);
        }
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error("matrix is not centrosymmetric: max pattern deviation = {max_dev:.3e}")]
    NotCs { max_dev: f64 },
    #[error("matrix is not X-structured: max off-pattern magnitude = {max_dev:.3e}")]
    NotX { max_dev: f64 },
}

/// Max deviation from the CS pattern m[i][j] = m[3-i][3-j].
pub fn cs_deviation(m: &Matrix4c) -> f64 {
    let mut max = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            max = max.max((m[(i, j)] - m[(3 - i, 3 - j)]).norm());
        }
    }
    max
}

/// Max magnitude outside the eight X slots.
pub fn x_deviation(m: &Matrix4c) -> f64 {
    let mut max = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if !X_SLOTS.contains(&(i, j)) {
                max = max.max(m[(i, j)].norm());
            }
        }
    }
    max
}

pub fn is_cs(m: &Matrix4c, tol: f64) -> bool {
    cs_deviation(m) <= tol
}

pub fn is_x(m: &Matrix4c, tol: f64) -> bool {
    x_deviation(m) <= tol
}

/// H tensor H: symmetric, orthogonal, involutive.
pub fn hadamard2() -> Matrix4<f64> {
    Matrix4::new(
        1.0, 1.0, 1.0, 1.0, //
        1.0, -1.0, 1.0, -1.0, //
        1.0, 1.0, -1.0, -1.0, //
        1.0, -1.0, -1.0, 1.0,
    ) * 0.5
}

/// H2 m H2 for a complex matrix.
pub fn conjugate_h2(m: &Matrix4c) -> Matrix4c {
    let h2 = hadamard2().map(|x| C64::new(x, 0.0));
    h2 * m * h2
}

/// Fourth-order centrosymmetric matrix held by its eight coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CsMatrix {
    pub coeffs: [C64; 8],
}

impl CsMatrix {
    pub fn to_matrix(&self) -> Matrix4c {
        let mut m = Matrix4c::zeros();
        for (k, &(i, j)) in CS_SLOTS.iter().enumerate() {
            m[(i, j)] = self.coeffs[k];
            m[(3 - i, 3 - j)] = self.coeffs[k];
        }
        m
    }

    pub fn from_matrix(m: &Matrix4c, tol: f64) -> Result<Self, StructureError> {
        let dev = cs_deviation(m);
        if dev > tol {
            return Err(StructureError::NotCs { max_dev: dev });
        }
        let mut coeffs = [C64::new(0.0, 0.0); 8];
        for (k, &(i, j)) in CS_SLOTS.iter().enumerate() {
            // average the two pattern slots so rounding-level asymmetry cancels
            coeffs[k] = (m[(i, j)] + m[(3 - i, 3 - j)]) * C64::new(0.5, 0.0);
        }
        Ok(Self { coeffs })
    }
}

/// Fourth-order X matrix held by its eight slot values.
#[derive(Debug, Clone, PartialEq)]
pub struct XMatrix {
    pub coeffs: [C64; 8],
}

impl XMatrix {
    pub fn to_matrix(&self) -> Matrix4c {
        let mut m = Matrix4c::zeros();
        for (k, &(i, j)) in X_SLOTS.iter().enumerate() {
            m[(i, j)] = self.coeffs[k];
        }
        m
    }

    pub fn from_matrix(m: &Matrix4c, tol: f64) -> Result<Self, StructureError> {
        let dev = x_deviation(m);
        if dev > tol {
            return Err(StructureError::NotX { max_dev: dev });
        }
        let mut coeffs = [C64::new(0.0, 0.0); 8];
        for (k, &(i, j)) in X_SLOTS.iter().enumerate() {
            coeffs[k] = m[(i, j)];
        }
        Ok(Self { coeffs })
    }
}

/// Map a CS matrix to its X similarity image under H2 . H2.
///
/// Entries come from explicit conjugation rather than a transcribed
/// coefficient list; the frozen [`CS_TO_X_SIGNS`] table is checked against
/// this conjugation in a unit test.
pub fn cs_to_x(a: &CsMatrix) -> XMatrix {
    let b = conjugate_h2(&a.to_matrix());
    debug_assert!(x_deviation(&b) < 1e-13 * (1.0 + b.norm()));
    let mut coeffs = [C64::new(0.0, 0.0); 8];
    for (k, &(i, j)) in X_SLOTS.iter().enumerate() {
        coeffs[k] = b[(i, j)];
    }
    XMatrix { coeffs }
}

/// Inverse map; H2 is an involution so it is the same conjugation.
pub fn x_to_cs(b: &XMatrix) -> CsMatrix {
    let a = conjugate_h2(&b.to_matrix());
    debug_assert!(cs_deviation(&a) < 1e-13 * (1.0 + a.norm()));
    let mut coeffs = [C64::new(0.0, 0.0); 8];
    for (k, &(i, j)) in CS_SLOTS.iter().enumerate() {
        coeffs[k] = (a[(i, j)] + a[(3 - i, 3 - j)]) * C64::new(0.5, 0.0);
    }
    CsMatrix { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cs(rng: &mut ChaCha8Rng) -> CsMatrix {
        let mut coeffs = [C64::new(0.0, 0.0); 8];
        for c in &mut coeffs {
            *c = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
        CsMatrix { coeffs }
    }

    #[test]
    fn identity_is_both_cs_and_x() {
        let id = Matrix4c::identity();
        assert!(is_cs(&id, 0.0));
        assert!(is_x(&id, 0.0));
    }

    #[test]
    fn hadamard2_matches_printed_form_and_is_involutive() {
        let h2 = hadamard2();
        let expected = Matrix4::new(
            1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0,
        ) * 0.5;
        assert!((h2 - expected).norm() == 0.0);
        assert!(((h2 * h2) - Matrix4::identity()).norm() < 1e-15);
        assert!((h2 - h2.transpose()).norm() == 0.0);
        assert_abs_diff_eq!(h2.determinant(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn frozen_sign_table_matches_explicit_conjugation() {
        for j in 0..8 {
            let mut coeffs = [C64::new(0.0, 0.0); 8];
            coeffs[j] = C64::new(1.0, 0.0);
            let b = conjugate_h2(&CsMatrix { coeffs }.to_matrix());
            assert!(x_deviation(&b) < 1e-15, "basis {j} leaked outside X slots");
            for (i, &(r, c)) in X_SLOTS.iter().enumerate() {
                let expected = f64::from(CS_TO_X_SIGNS[i][j]) * 0.5;
                assert_abs_diff_eq!(b[(r, c)].re, expected, epsilon = 1e-15);
                assert_abs_diff_eq!(b[(r, c)].im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn first_coefficient_is_half_the_total_sum() {
        // b1 = (a1 + ... + a8)/2 on symbolic unit vectors
        assert!(CS_TO_X_SIGNS[0].iter().all(|&s| s == 1));
    }

    #[test]
    fn round_trip_is_identity_on_random_cs_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = random_cs(&mut rng);
            let back = x_to_cs(&cs_to_x(&a));
            let dev = (a.to_matrix() - back.to_matrix()).norm();
            assert!(dev < 1e-14, "round trip deviation {dev}");
        }
    }

    #[test]
    fn transform_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a1 = random_cs(&mut rng);
        let a2 = random_cs(&mut rng);
        let (al, be) = (C64::new(0.7, -0.2), C64::new(-1.3, 0.4));
        let mut combo = [C64::new(0.0, 0.0); 8];
        for k in 0..8 {
            combo[k] = al * a1.coeffs[k] + be * a2.coeffs[k];
        }
        let lhs = cs_to_x(&CsMatrix { coeffs: combo }).to_matrix();
        let rhs = cs_to_x(&a1).to_matrix() * al + cs_to_x(&a2).to_matrix() * be;
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn spectrum_preserved_by_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a = random_cs(&mut rng);
            let m = a.to_matrix();
            let b = cs_to_x(&a).to_matrix();
            // similarity preserves the characteristic polynomial; compare
            // trace moments tr(M^k), k = 1..4, which determine the spectrum
            let mut pa = Matrix4c::identity();
            let mut pb = Matrix4c::identity();
            for _ in 0..4 {
                pa *= m;
                pb *= b;
                assert!((pa.trace() - pb.trace()).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn structure_rejection_carries_magnitude() {
        let mut m = Matrix4c::identity();
        m[(0, 1)] = C64::new(0.25, 0.0);
        match CsMatrix::from_matrix(&m, 1e-12) {
            Err(StructureError::NotCs { max_dev }) => assert_abs_diff_eq!(max_dev, 0.25),
            other => panic!("expected NotCs, got {other:?}"),
        }
        match XMatrix::from_matrix(&m, 1e-12) {
            Err(StructureError::NotX { max_dev }) => assert_abs_diff_eq!(max_dev, 0.25),
            other => panic!("expected NotX, got {other:?}"),
        }
    }

    #[test]
    fn table_hash_is_stable() {
        assert_eq!(signs_table_hash().len(), 64);
        assert_eq!(signs_table_hash(), signs_table_hash());
    }
}
