//! Independent ground truth: discord of any two-qubit state by explicit
//! projective measurements over the full Bloch sphere, and an exact dense
//! simulation of the N-spin chain whose reduced pair state the closed-form
//! correlators must reproduce.

use crate::density::{
    entropy_nats, hermitian_eigenvalues2, pauli_triple, DensityMatrix4, EntropyUnit, Matrix2c,
    Matrix4c, Subsystem, C64,
};
use nalgebra::{DMatrix, Vector3};
use rayon::prelude::*;

/// Measurement direction on the Bloch sphere of qubit B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    /// Polar angle from the z axis, in [0, pi].
    pub theta: f64,
    /// Azimuth, in [0, 2 pi).
    pub phi: f64,
}

impl MeasurementDirection {
    pub fn unit_vector(&self) -> Vector3<f64> {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        Vector3::new(st * self.phi.cos(), st * self.phi.sin(), ct)
    }

    /// Rank-one projectors P_+ = (I + n.sigma)/2 and P_- = I - P_+.
    pub fn projectors(&self) -> (Matrix2c, Matrix2c) {
        let n = self.unit_vector();
        let sigma = pauli_triple();
        let mut p = Matrix2c::identity() * C64::new(0.5, 0.0);
        for i in 0..3 {
            p += sigma[i] * C64::new(0.5 * n[i], 0.0);
        }
        (p, Matrix2c::identity() - p)
    }
}

/// Outcomes rarer than this contribute nothing to the average entropy.
const OUTCOME_FLOOR: f64 = 1e-14;

/// sum_i p_i S(rho_A^i) for the projective measurement of B along `dir`.
pub fn conditional_entropy_at(
    rho: &DensityMatrix4,
    dir: &MeasurementDirection,
    unit: EntropyUnit,
) -> f64 {
    let m = rho.matrix();
    let (p_plus, p_minus) = dir.projectors();
    let mut total = 0.0;
    for proj in [p_plus, p_minus] {
        // For projectors, Tr_B[(I x P) rho (I x P)] = Tr_B[rho (I x P)]:
        // M_A[a][b] = sum_{c,d} rho[(a c), (b d)] P[d][c]
        let mut ma = Matrix2c::zeros();
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..2 {
                    for d in 0..2 {
                        acc += m[(2 * a + c, 2 * b + d)] * proj[(d, c)];
                    }
                }
                ma[(a, b)] = acc;
            }
        }
        let p = ma.trace().re;
        if p > OUTCOME_FLOOR {
            let ev = hermitian_eigenvalues2(&ma);
            total += p * entropy_nats([ev[0] / p, ev[1] / p]);
        }
    }
    unit.from_nats(total)
}

/// Resolution of the brute-force direction grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self { n_theta: 181, n_phi: 181 }
    }
}

fn grid_direction(grid: &OracleGrid, idx: usize) -> MeasurementDirection {
    let it = idx / grid.n_phi;
    let ip = idx % grid.n_phi;
    MeasurementDirection {
        theta: std::f64::consts::PI * it as f64 / (grid.n_theta - 1) as f64,
        phi: std::f64::consts::TAU * ip as f64 / grid.n_phi as f64,
    }
}

/// Discord by exhaustive minimization of the conditional entropy over the
/// measurement sphere. The grid minimum is an upper bound; compass-search
/// refinement tightens it. Deterministic for a fixed grid regardless of
/// thread count.
pub fn discord(rho: &DensityMatrix4, unit: EntropyUnit, grid: &OracleGrid, refine: bool) -> f64 {
    assert!(grid.n_theta >= 2 && grid.n_phi >= 1, "grid too coarse");
    let s_b = crate::density::entropy_qubit(&rho.partial_trace(Subsystem::B), EntropyUnit::Nats);
    let s_ab = rho.von_neumann_entropy(EntropyUnit::Nats);

    let total = grid.n_theta * grid.n_phi;
    let (mut best_val, best_idx) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let dir = grid_direction(grid, idx);
            (conditional_entropy_at(rho, &dir, EntropyUnit::Nats), idx)
        })
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |acc, item| {
                if item.0 < acc.0 || (item.0 == acc.0 && item.1 < acc.1) {
                    item
                } else {
                    acc
                }
            },
        );

    if refine {
        let dir = grid_direction(grid, best_idx);
        let (mut theta, mut phi) = (dir.theta, dir.phi);
        let mut step = std::f64::consts::PI / (grid.n_theta - 1) as f64;
        while step > 1e-8 {
            let mut moved = false;
            for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let cand = MeasurementDirection { theta: theta + dt, phi: phi + dp };
                let val = conditional_entropy_at(rho, &cand, EntropyUnit::Nats);
                if val < best_val {
                    best_val = val;
                    theta += dt;
                    phi += dp;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
    }
    unit.from_nats((s_b - s_ab + best_val).max(0.0))
}

/// Chain simulation inputs. The dense state matrix holds 4^N complex
/// entries, which caps N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub n_spins: u32,
    pub beta: f64,
    pub alpha_t: f64,
}

pub const MAX_CHAIN_SPINS: u32 = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainError {
    #[error("chain of {n_spins} spins exceeds the dense-matrix cap of {MAX_CHAIN_SPINS}")]
    TooLarge { n_spins: u32 },
    #[error("chain needs at least two spins, got {n_spins}")]
    TooSmall { n_spins: u32 },
}

/// Evolve the post-pulse product state under the diagonal quadratic
/// propagator and reduce to the first two spins.
///
/// The initial state exp(beta I_x)/Z factorizes into per-spin matrices
/// (1/2)[[1, t], [t, 1]] with t = tanh(beta/2). I_z is diagonal in the
/// computational basis, so exp(-i alpha t I_z^2) acts as explicit phases.
/// The quadratic Casimir part of the dipolar Hamiltonian commutes with the
/// initial state and is omitted; a unit test keeps that simplification
/// honest by comparing against the full propagator at small N.
pub fn simulate_chain(params: &ChainParams) -> Result<DensityMatrix4, ChainError> {
    if params.n_spins < 2 {
        return Err(ChainError::TooSmall { n_spins: params.n_spins });
    }
    if params.n_spins > MAX_CHAIN_SPINS {
        return Err(ChainError::TooLarge { n_spins: params.n_spins });
    }
    let n = params.n_spins as usize;
    let t = (params.beta / 2.0).tanh();
    let single = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(0.5, 0.0), C64::new(0.5 * t, 0.0), C64::new(0.5 * t, 0.0), C64::new(0.5, 0.0)],
    );
    let mut rho = single.clone();
    for _ in 1..n {
        rho = rho.kronecker(&single);
    }

    // phases exp(-i alpha t m_i^2), m_i = (N - 2 popcount(i)) / 2
    let dim = 1usize << n;
    let phases: Vec<C64> = (0..dim)
        .map(|i| {
            let m = (n as f64 - 2.0 * (i as u32).count_ones() as f64) / 2.0;
            let angle = -params.alpha_t * m * m;
            C64::new(angle.cos(), angle.sin())
        })
        .collect();
    for i in 0..dim {
        for j in 0..dim {
            rho[(i, j)] *= phases[i] * phases[j].conj();
        }
    }

    // keep the two most significant bits (spins 1 and 2)
    let rest = dim / 4;
    let mut pair = Matrix4c::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..rest {
                acc += rho[(a * rest + r, b * rest + r)];
            }
            pair[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix4::new(pair).expect("reduced chain state must be a valid density matrix"))
}
