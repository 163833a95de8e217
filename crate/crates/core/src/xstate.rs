//! Seven-parameter X density matrices and their reduction to the real
//! five-parameter canonical form with nonnegative off-diagonal elements.

use crate::density::{DensityMatrix4, InvalidState, Matrix2c, Matrix4c, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const XSTATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvalidXState {
    #[error("populations do not sum to one: |a+b+c+d - 1| = {deviation:.3e}")]
    TraceNotOne { deviation: f64 },
    #[error("negative population: {value:.3e}")]
    NegativePopulation { value: f64 },
    #[error("outer coherence violates positivity: ad = {bound:.3e} < |u|^2 = {norm_sqr:.3e}")]
    OuterCoherenceTooLarge { bound: f64, norm_sqr: f64 },
    #[error("inner coherence violates positivity: bc = {bound:.3e} < |v|^2 = {norm_sqr:.3e}")]
    InnerCoherenceTooLarge { bound: f64, norm_sqr: f64 },
}

/// General X state: populations a, b, c, d on the diagonal, complex outer
/// coherence u1 + i u2 at (1,4) and inner coherence v1 + i v2 at (2,3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub v2: f64,
}

fn check_params(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    u_sqr: f64,
    v_sqr: f64,
) -> Result<(), InvalidXState> {
    let tr_dev = (a + b + c + d - 1.0).abs();
    if tr_dev > XSTATE_TOL {
        return Err(InvalidXState::TraceNotOne { deviation: tr_dev });
    }
    for pop in [a, b, c, d] {
        if pop < -XSTATE_TOL {
            return Err(InvalidXState::NegativePopulation { value: pop });
        }
    }
    if a * d < u_sqr - XSTATE_TOL {
        return Err(InvalidXState::OuterCoherenceTooLarge { bound: a * d, norm_sqr: u_sqr });
    }
    if b * c < v_sqr - XSTATE_TOL {
        return Err(InvalidXState::InnerCoherenceTooLarge { bound: b * c, norm_sqr: v_sqr });
    }
    Ok(())
}

impl XState {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        u1: f64,
        u2: f64,
        v1: f64,
        v2: f64,
    ) -> Result<Self, InvalidXState> {
        check_params(a, b, c, d, u1 * u1 + u2 * u2, v1 * v1 + v2 * v2)?;
        Ok(Self { a, b, c, d, u1, u2, v1, v2 })
    }

    /// The 4x4 matrix with the X pattern.
    pub fn embed(&self) -> Matrix4c {
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = C64::new(self.a, 0.0);
        m[(1, 1)] = C64::new(self.b, 0.0);
        m[(2, 2)] = C64::new(self.c, 0.0);
        m[(3, 3)] = C64::new(self.d, 0.0);
        m[(0, 3)] = C64::new(self.u1, self.u2);
        m[(3, 0)] = C64::new(self.u1, -self.u2);
        m[(1, 2)] = C64::new(self.v1, self.v2);
        m[(2, 1)] = C64::new(self.v1, -self.v2);
        m
    }

    /// Embed and run the full density-matrix validation.
    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix4, InvalidState> {
        DensityMatrix4::validate(self.embed(), tol)
    }
}

/// Real X state with u, v >= 0, together with the local unitaries that took
/// the original state here.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalXState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub u: f64,
    pub v: f64,
    applied: Vec<(Matrix2c, Matrix2c)>,
}

impl CanonicalXState {
    pub fn new(a: f64, b: f64, c: f64, d: f64, u: f64, v: f64) -> Result<Self, InvalidXState> {
        let u = if u.abs() <= XSTATE_TOL { u.abs() } else { u };
        let v = if v.abs() <= XSTATE_TOL { v.abs() } else { v };
        if u < 0.0 {
            return Err(InvalidXState::OuterCoherenceTooLarge { bound: a * d, norm_sqr: u * u });
        }
        if v < 0.0 {
            return Err(InvalidXState::InnerCoherenceTooLarge { bound: b * c, norm_sqr: v * v });
        }
        check_params(a, b, c, d, u * u, v * v)?;
        Ok(Self { a, b, c, d, u, v, applied: Vec::new() })
    }

    /// Local unitary pairs (U_A, U_B) whose composed conjugation maps the
    /// original state onto this canonical one. Empty when built directly.
    pub fn applied_transformations(&self) -> &[(Matrix2c, Matrix2c)] {
        &self.applied
    }

    pub fn embed(&self) -> Matrix4c {
        let mut m = Matrix4c::zeros();
        m[(0, 0)] = C64::new(self.a, 0.0);
        m[(1, 1)] = C64::new(self.b, 0.0);
        m[(2, 2)] = C64::new(self.c, 0.0);
        m[(3, 3)] = C64::new(self.d, 0.0);
        m[(0, 3)] = C64::new(self.u, 0.0);
        m[(3, 0)] = C64::new(self.u, 0.0);
        m[(1, 2)] = C64::new(self.v, 0.0);
        m[(2, 1)] = C64::new(self.v, 0.0);
        m
    }

    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix4, InvalidState> {
        DensityMatrix4::validate(self.embed(), tol)
    }
}

fn z_rotation(angle: f64) -> Matrix2c {
    let half = 0.5 * angle;
    Matrix2c::new(
        C64::new(half.cos(), -half.sin()),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(half.cos(), half.sin()),
    )
}

/// Reduce an X state to its real nonnegative form.
///
/// The X pattern admits two independent phase freedoms: conjugating by
/// exp(-i g_A sigma_z / 2) x exp(-i g_B sigma_z / 2) multiplies the outer
/// coherence by exp(-i (g_A + g_B)) and the inner one by exp(-i (g_A - g_B)).
/// Choosing the angle sums as the coherence phases lands both on their
/// moduli at once, which also covers every sign-fix case. Coherences that
/// are already zero get no rotation.
pub fn canonicalize(x: &XState) -> CanonicalXState {
    let u = f64::hypot(x.u1, x.u2);
    let v = f64::hypot(x.v1, x.v2);
    let sum = if u > 0.0 { f64::atan2(x.u2, x.u1) } else { 0.0 };
    let diff = if v > 0.0 { f64::atan2(x.v2, x.v1) } else { 0.0 };
    let g_a = 0.5 * (sum + diff);
    let g_b = 0.5 * (sum - diff);

    let applied = if g_a == 0.0 && g_b == 0.0 {
        Vec::new()
    } else {
        vec![(z_rotation(g_a), z_rotation(g_b))]
    };
    CanonicalXState { a: x.a, b: x.b, c: x.c, d: x.d, u, v, applied }
}

/// Deterministic sampler of valid X states: populations uniform on the
/// simplex, coherences uniform inside their positivity disks.
pub struct XStateSampler {
    rng: ChaCha8Rng,
}

impl XStateSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_state(&mut self) -> XState {
        let rng = &mut self.rng;
        let mut e = [0.0f64; 4];
        for x in &mut e {
            *x = -(1.0 - rng.random::<f64>()).ln();
        }
        let total: f64 = e.iter().sum();
        let [a, b, c, d] = [e[0] / total, e[1] / total, e[2] / total, e[3] / total];
        let ru = (a * d).sqrt() * rng.random::<f64>().sqrt();
        let pu = std::f64::consts::TAU * rng.random::<f64>();
        let rv = (b * c).sqrt() * rng.random::<f64>().sqrt();
        let pv = std::f64::consts::TAU * rng.random::<f64>();
        XState {
            a,
            b,
            c,
            d,
            u1: ru * pu.cos(),
            u2: ru * pu.sin(),
            v1: rv * pv.cos(),
            v2: rv * pv.sin(),
        }
    }
}

/// One random valid X state per seed.
pub fn sample_random_xstate(seed: u64) -> XState {
    XStateSampler::new(seed).next_state()
}
