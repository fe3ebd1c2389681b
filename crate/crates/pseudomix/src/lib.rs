//! Decompose bipartite quantum states into pseudomixtures of product
//! projectors.
//!
//! Every density matrix ρ on a finite-dimensional bipartite Hilbert space
//! C^d1 ⊗ C^d2 can be written as a weighted difference of two separable
//! states,
//!
//! ```text
//! ρ = a·ρ⁺ − b·ρ⁻,    a = 1 + b,    a, b ≥ 0,
//! ```
//!
//! where ρ⁺ and ρ⁻ are convex mixtures of projectors onto simple tensor
//! products |x⟩⊗|y⟩. This crate computes such a pseudomixture by repeatedly
//! splitting the current remainder into a part that is diagonal in a product
//! basis (banked as explicit product terms) and an orthogonal rest, with the
//! product basis chosen by a seeded multi-restart unitary search that
//! maximizes the extracted diagonal mass.
//!
//! The pieces are usable on their own:
//!
//! - [`linalg`]: dense Hermitian matrices on a bipartite index space,
//!   eigendecomposition, random states, named test states.
//! - [`split`]: the product-diagonal / remainder split under a local basis.
//! - [`search`]: coordinate ascent over pairs of local unitaries, plus a
//!   probe family that guarantees a nonzero starting objective.
//! - [`pipeline`]: the iterative decomposition loop and pseudomixture
//!   assembly.
//! - [`oracles`]: density-matrix validation, partial transpose and the PPT
//!   entanglement test, report verification.
//! - [`io`]: JSON state and report files.
//!
//! # Quick start
//!
//! ```
//! use pseudomix::linalg::bell_state;
//! use pseudomix::pipeline::{assemble, decompose, AssembleOptions, PipelineConfig};
//!
//! let rho = bell_state();
//! let cfg = PipelineConfig::default();
//! let dec = decompose(&rho, &cfg).unwrap();
//! assert!(dec.converged);
//!
//! let pm = assemble(&dec, &AssembleOptions::default()).unwrap();
//! assert!((pm.a - pm.b - 1.0).abs() < 1e-9);
//! // A Bell pair is entangled, so the negative part must carry weight.
//! assert!(pm.b > 0.0);
//! ```
//!
//! The `pseudomix` binary wraps the same pipeline behind `decompose`,
//! `validate`, `random` and `verify` subcommands; the `examples/` directory
//! has one runnable walkthrough per module.

pub mod cli;
pub mod io;
pub mod linalg;
pub mod oracles;
pub mod pipeline;
pub mod search;
pub mod split;

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a precondition (wrong shape, bad norm, out of
    /// range parameter, malformed file content).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two operands live on incompatible index spaces.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// Every restart and every probe of the unitary search landed at (or
    /// below) the stall floor on a nonzero matrix.
    #[error("unitary search stalled: best objective {objective:.3e} is below floor {floor:.3e}")]
    SearchStall { objective: f64, floor: f64 },

    /// The decomposition loop could not make progress before reaching the
    /// residual tolerance. The partial result is kept for inspection.
    #[error("decomposition stalled at step {step} with residual {residual:.3e}")]
    PipelineStall {
        step: usize,
        residual: f64,
        partial: Box<pipeline::Decomposition>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
