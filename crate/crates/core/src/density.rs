//! Validated two-qubit density matrices and the entropy/reduction toolkit.
//!
//! The computational product basis is fixed globally as |00>, |01>, |10>, |11>
//! with qubit A the left tensor factor; qubit B is the measured subsystem
//! everywhere in this crate.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type Matrix4c = Matrix4<C64>;
pub type Matrix2c = Matrix2<C64>;

/// Default tolerance for the density-matrix invariants (Hermiticity, trace,
/// positivity). Eigenvalues in [-tol, 0) are treated as rounding and clamped
/// to zero; anything more negative is a hard validation error.
pub const DEFAULT_TOL: f64 = 1e-12;

/// x*ln(x) with the 0*ln(0) = 0 convention; negative inputs (rounding
/// residue already screened by validation) also map to 0.
#[inline]
pub fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Shannon entropy in nats of a probability vector (entries may carry
/// clamped rounding noise).
pub fn entropy_nats<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    -probs.into_iter().map(xlnx).sum::<f64>()
}

/// Logarithm base for entropy values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyUnit {
    Nats,
    Bits,
}

impl EntropyUnit {
    /// Convert a value computed in nats into this unit.
    #[inline]
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            EntropyUnit::Nats => nats,
            EntropyUnit::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

impl std::fmt::Display for EntropyUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntropyUnit::Nats => write!(f, "nats"),
            EntropyUnit::Bits => write!(f, "bits"),
        }
    }
}

/// Which qubit to keep or measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A single violated density-matrix invariant, with its magnitude.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Violation {
    #[error("not Hermitian: max |rho - rho^H| = {max_abs_dev:.3e}")]
    NotHermitian { max_abs_dev: f64 },
    #[error("trace is not one: |tr(rho) - 1| = {deviation:.3e}")]
    TraceNotOne { deviation: f64 },
    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
}

/// Validation failure carrying every violated invariant at once.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct InvalidState {
    pub violations: Vec<Violation>,
}

impl std::fmt::Display for InvalidState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid density matrix: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("matrix is not unitary: max |U U^H - I| = {max_abs_dev:.3e}")]
pub struct NotUnitary {
    pub max_abs_dev: f64,
}

const UNITARY_TOL: f64 = 1e-12;

/// Pauli sigma_x.
pub fn pauli_x() -> Matrix2c {
    Matrix2c::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0))
}

/// Pauli sigma_y.
pub fn pauli_y() -> Matrix2c {
    Matrix2c::new(C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0))
}

/// Pauli sigma_z.
pub fn pauli_z() -> Matrix2c {
    Matrix2c::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0))
}

/// The Pauli triple (sigma_x, sigma_y, sigma_z).
pub fn pauli_triple() -> [Matrix2c; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Eigenvalues of a Hermitian 4x4 matrix, ascending. This generic routine is
/// the trusted path; closed-form block shortcuts elsewhere must agree with it.
pub fn hermitian_eigenvalues4(m: &Matrix4c) -> [f64; 4] {
    let eig = nalgebra::linalg::SymmetricEigen::new(*m);
    let mut vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.eigenvalues[3]];
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending (closed form).
pub fn hermitian_eigenvalues2(m: &Matrix2c) -> [f64; 2] {
    let half_tr = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let half_diff = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let disc = (half_diff * half_diff + m[(0, 1)].norm_sqr()).sqrt();
    [half_tr - disc, half_tr + disc]
}

/// von Neumann entropy of a Hermitian PSD unit-trace 2x2 matrix.
pub fn entropy_qubit(m: &Matrix2c, unit: EntropyUnit) -> f64 {
    let ev = hermitian_eigenvalues2(m);
    unit.from_nats(entropy_nats(ev))
}

fn max_abs_hermiticity_dev(m: &Matrix4c) -> f64 {
    let mut max = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

/// Coefficients of the Pauli expansion
/// rho = (1/4) [ s0 I + sum_i a_i sigma_i x I + sum_j b_j I x sigma_j
///              + sum_ij T_ij sigma_i x sigma_j ].
#[derive(Debug, Clone, PartialEq)]
pub struct BlochCoefficients {
    pub scalar: f64,
    pub vec_a: Vector3<f64>,
    pub vec_b: Vector3<f64>,
    pub tensor: Matrix3<f64>,
}

impl BlochCoefficients {
    /// Rebuild the 4x4 matrix from the coefficients.
    pub fn compose(&self) -> Matrix4c {
        let id2 = Matrix2c::identity();
        let sigma = pauli_triple();
        let mut m = id2.kronecker(&id2) * C64::new(self.scalar, 0.0);
        for i in 0..3 {
            m += sigma[i].kronecker(&id2) * C64::new(self.vec_a[i], 0.0);
            m += id2.kronecker(&sigma[i]) * C64::new(self.vec_b[i], 0.0);
            for j in 0..3 {
                m += sigma[i].kronecker(&sigma[j]) * C64::new(self.tensor[(i, j)], 0.0);
            }
        }
        m * C64::new(0.25, 0.0)
    }
}

/// Validated two-qubit density matrix: Hermitian, unit trace, PSD within
/// the tolerance passed to [`DensityMatrix4::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    m: Matrix4c,
}

impl DensityMatrix4 {
    /// Check all invariants against `tol`; on failure the error lists every
    /// violated invariant with its magnitude.
    pub fn validate(entries: Matrix4c, tol: f64) -> Result<Self, InvalidState> {
        let mut violations = Vec::new();
        let herm = max_abs_hermiticity_dev(&entries);
        if herm > tol {
            violations.push(Violation::NotHermitian { max_abs_dev: herm });
        }
        let tr = entries.trace();
        let tr_dev = (tr - C64::new(1.0, 0.0)).norm();
        if tr_dev > tol {
            violations.push(Violation::TraceNotOne { deviation: tr_dev });
        }
        // PSD only meaningful for (near-)Hermitian input; use the Hermitian part.
        let herm_part = (entries + entries.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = hermitian_eigenvalues4(&herm_part)[0];
        if min_eig < -tol {
            violations.push(Violation::NotPsd { min_eigenvalue: min_eig });
        }
        if violations.is_empty() {
            Ok(Self { m: entries })
        } else {
            Err(InvalidState { violations })
        }
    }

    /// Validate with the library default tolerance.
    pub fn new(entries: Matrix4c) -> Result<Self, InvalidState> {
        Self::validate(entries, DEFAULT_TOL)
    }

    /// Build from Bloch coefficients, then validate.
    pub fn from_bloch(coeffs: &BlochCoefficients, tol: f64) -> Result<Self, InvalidState> {
        Self::validate(coeffs.compose(), tol)
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    /// Spectrum by the generic Hermitian routine, ascending, with rounding
    /// residue in [-DEFAULT_TOL, 0) clamped to zero.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev = hermitian_eigenvalues4(&self.m);
        for v in &mut ev {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        ev
    }

    /// S(rho) = -tr(rho ln rho) in the requested unit.
    pub fn von_neumann_entropy(&self, unit: EntropyUnit) -> f64 {
        unit.from_nats(entropy_nats(self.eigenvalues()))
    }

    /// Reduced state of one qubit.
    pub fn partial_trace(&self, keep: Subsystem) -> Matrix2c {
        let m = &self.m;
        let mut out = Matrix2c::zeros();
        match keep {
            Subsystem::A => {
                for a in 0..2 {
                    for b in 0..2 {
                        out[(a, b)] = m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)];
                    }
                }
            }
            Subsystem::B => {
                for c in 0..2 {
                    for d in 0..2 {
                        out[(c, d)] = m[(c, d)] + m[(2 + c, 2 + d)];
                    }
                }
            }
        }
        out
    }

    /// I(A:B) = S(rho_A) + S(rho_B) - S(rho_AB), clamped at zero.
    pub fn mutual_information(&self, unit: EntropyUnit) -> f64 {
        let sa = entropy_qubit(&self.partial_trace(Subsystem::A), EntropyUnit::Nats);
        let sb = entropy_qubit(&self.partial_trace(Subsystem::B), EntropyUnit::Nats);
        let sab = self.von_neumann_entropy(EntropyUnit::Nats);
        unit.from_nats((sa + sb - sab).max(0.0))
    }

    /// (U_A x U_B) rho (U_A x U_B)^H. Both factors must be unitary to 1e-12.
    pub fn conjugate_local(&self, u_a: &Matrix2c, u_b: &Matrix2c) -> Result<Self, NotUnitary> {
        for u in [u_a, u_b] {
            let dev = (u * u.adjoint() - Matrix2c::identity())
                .iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            if dev > UNITARY_TOL {
                return Err(NotUnitary { max_abs_dev: dev });
            }
        }
        let u = u_a.kronecker(u_b);
        Ok(Self { m: u * self.m * u.adjoint() })
    }

    /// Pauli expansion coefficients; all real for Hermitian input.
    pub fn bloch_decompose(&self) -> BlochCoefficients {
        let sigma = pauli_triple();
        let id2 = Matrix2c::identity();
        let scalar = self.m.trace().re;
        let mut vec_a = Vector3::zeros();
        let mut vec_b = Vector3::zeros();
        let mut tensor = Matrix3::zeros();
        for i in 0..3 {
            vec_a[i] = (sigma[i].kronecker(&id2) * self.m).trace().re;
            vec_b[i] = (id2.kronecker(&sigma[i]) * self.m).trace().re;
            for j in 0..3 {
                tensor[(i, j)] = (sigma[i].kronecker(&sigma[j]) * self.m).trace().re;
            }
        }
        BlochCoefficients { scalar, vec_a, vec_b, tensor }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell_phi_plus() -> DensityMatrix4 {
        let h = C64::new(0.5, 0.0);
        let z = C64::new(0.0, 0.0);
        let m = Matrix4c::new(h, z, z, h, z, z, z, z, z, z, z, z, h, z, z, h);
        DensityMatrix4::new(m).unwrap()
    }

    fn maximally_mixed() -> DensityMatrix4 {
        DensityMatrix4::new(Matrix4c::identity() * C64::new(0.25, 0.0)).unwrap()
    }

    #[test]
    fn identity_over_four_is_valid_with_two_bits_entropy() {
        let rho = maximally_mixed();
        assert_abs_diff_eq!(rho.von_neumann_entropy(EntropyUnit::Bits), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn bell_state_entropies_and_marginals() {
        let rho = bell_phi_plus();
        assert_abs_diff_eq!(rho.von_neumann_entropy(EntropyUnit::Bits), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.mutual_information(EntropyUnit::Bits), 2.0, epsilon = 1e-10);
        let ra = rho.partial_trace(Subsystem::A);
        assert!((ra - Matrix2c::identity() * C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rank_two_diagonal_has_one_bit() {
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        let rho = DensityMatrix4::new(m).unwrap();
        assert_abs_diff_eq!(rho.von_neumann_entropy(EntropyUnit::Bits), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn oversized_coherence_fails_psd() {
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 3)] = C64::new(0.6, 0.0);
        m[(3, 0)] = C64::new(0.6, 0.0);
        let err = DensityMatrix4::new(m).unwrap_err();
        assert!(err.violations.iter().any(|v| matches!(v, Violation::NotPsd { .. })));
    }

    #[test]
    fn validation_reports_all_violations() {
        let mut m = Matrix4c::identity(); // trace 4
        m[(0, 1)] = C64::new(0.0, 0.3); // breaks Hermiticity
        m[(3, 3)] = C64::new(-1.0, 0.0); // breaks PSD
        let err = DensityMatrix4::validate(m, 1e-12).unwrap_err();
        assert_eq!(err.violations.len(), 3);
    }

    #[test]
    fn product_state_has_zero_mutual_information() {
        let ra = Matrix2c::new(
            C64::new(0.7, 0.0),
            C64::new(0.1, 0.2),
            C64::new(0.1, -0.2),
            C64::new(0.3, 0.0),
        );
        let rb = Matrix2c::new(
            C64::new(0.4, 0.0),
            C64::new(0.0, -0.15),
            C64::new(0.0, 0.15),
            C64::new(0.6, 0.0),
        );
        let rho = DensityMatrix4::new(ra.kronecker(&rb)).unwrap();
        assert!(rho.mutual_information(EntropyUnit::Nats) <= 1e-12);
        // reduction returns the exact factors
        assert!((rho.partial_trace(Subsystem::A) - ra).norm() < 1e-14);
        assert!((rho.partial_trace(Subsystem::B) - rb).norm() < 1e-14);
    }

    #[test]
    fn bloch_round_trip_on_bell_state() {
        let rho = bell_phi_plus();
        let coeffs = rho.bloch_decompose();
        assert_abs_diff_eq!(coeffs.scalar, 1.0, epsilon = 1e-14);
        let back = coeffs.compose();
        assert!((back - rho.matrix()).norm() < 1e-14);
    }

    #[test]
    fn maximally_mixed_bloch_is_trivial() {
        let coeffs = maximally_mixed().bloch_decompose();
        assert!(coeffs.vec_a.norm() < 1e-15);
        assert!(coeffs.vec_b.norm() < 1e-15);
        assert!(coeffs.tensor.norm() < 1e-15);
    }

    #[test]
    fn conjugate_by_identity_is_identity_map() {
        let rho = bell_phi_plus();
        let same = rho.conjugate_local(&Matrix2c::identity(), &Matrix2c::identity()).unwrap();
        assert!((same.matrix() - rho.matrix()).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_factor_is_rejected() {
        let rho = maximally_mixed();
        let bad = Matrix2c::identity() * C64::new(1.1, 0.0);
        assert!(rho.conjugate_local(&bad, &Matrix2c::identity()).is_err());
    }
}
