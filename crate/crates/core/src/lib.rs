//! Quantum discord of two-qubit X and centrosymmetric density matrices,
//! with the nanopore spin-pair dynamics built on top.
//!
//! The piecewise formula Q = min{Q0, Qtheta, Qpi/2} carries the closed-form
//! endpoint branches and a grid-refined interior branch; an exhaustive
//! measurement oracle and a dense chain simulation provide independent
//! ground truth for both the discord values and the nanopore correlators.

pub mod csx;
pub mod density;
pub mod discord;
pub mod io;
pub mod minimize;
pub mod nanopore;
pub mod oracle;
pub mod selftest;
pub mod xstate;

pub use density::{DensityMatrix4, EntropyUnit};
pub use discord::{Branch, DiscordOptions, DiscordResult};
pub use nanopore::NanoporeParams;
pub use xstate::{CanonicalXState, XState};

/// The piecewise route needs an X or CS structured state.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error(
    "state is neither X nor CS structured (X deviation {x_dev:.3e}, CS deviation {cs_dev:.3e}); \
     use the measurement oracle"
)]
pub struct NotXOrCs {
    pub x_dev: f64,
    pub cs_dev: f64,
}

/// Piecewise discord of a validated state: X states are canonicalized
/// directly, CS states first pass through the double-Hadamard similarity
/// (discord is invariant under that local orthogonal transform). Anything
/// else is refused; the brute-force oracle covers general states.
pub fn piecewise_discord(
    rho: &DensityMatrix4,
    unit: EntropyUnit,
    opts: &DiscordOptions,
    tol: f64,
) -> Result<DiscordResult, NotXOrCs> {
    let m = rho.matrix();
    let x_form = if csx::is_x(m, tol) {
        *m
    } else if csx::is_cs(m, tol) {
        csx::conjugate_h2(m)
    } else {
        return Err(NotXOrCs { x_dev: csx::x_deviation(m), cs_dev: csx::cs_deviation(m) });
    };
    let x = XState::new(
        x_form[(0, 0)].re,
        x_form[(1, 1)].re,
        x_form[(2, 2)].re,
        x_form[(3, 3)].re,
        x_form[(0, 3)].re,
        x_form[(0, 3)].im,
        x_form[(1, 2)].re,
        x_form[(1, 2)].im,
    )
    .expect("validated X/CS density matrix yields valid X parameters");
    let canonical = xstate::canonicalize(&x);
    Ok(discord::discord(&canonical, unit, opts))
}
