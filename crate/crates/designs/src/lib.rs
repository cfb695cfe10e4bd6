//! Classical and quantum combinatorial designs.
//!
//! This crate builds, converts and verifies the combinatorial objects that
//! sit behind highly entangled multipartite states:
//!
//! - classical orthogonal arrays and Latin squares/cubes/hypercubes
//!   ([`classical`]),
//! - quantum Latin arrangements and quantum orthogonal arrays ([`quantum`]),
//! - a catalog of named constructions for both kinds ([`constructions`]),
//! - k-uniformity certification and robustness diagnostics ([`uniformity`]),
//! - the state/matrix correspondence for multiunitary (perfect-tensor)
//!   matrices ([`multiunitary`]),
//! - a seeded alternating-projection search for k-unitary matrices
//!   ([`search`]).
//!
//! States are kept unnormalized and sparse (see [`tensor::QuditState`]);
//! verifiers rescale internally, so integer amplitude tables can be used
//! as-is. All operations are pure functions over immutable values and are
//! safe to call concurrently.

#![forbid(unsafe_code)]

pub mod classical;
pub mod constructions;
pub mod multiunitary;
pub mod quantum;
pub mod search;
pub mod tensor;
pub mod uniformity;

pub use tensor::{ComplexMatrix, DensityOperator, QuditState};

/// Default numeric tolerances.
///
/// All checks are absolute on the max norm after states are rescaled to unit
/// norm, which leaves several orders of magnitude of headroom for instances
/// that are exact in exact arithmetic.
pub mod tol {
    /// Hermiticity slack for reduced density operators.
    pub const HERMITICITY: f64 = 1e-10;
    /// Slack for proportionality-to-identity tests.
    pub const IDENTITY: f64 = 1e-8;
    /// Smallest singular value accepted by the polar projection.
    pub const RANK: f64 = 1e-10;
}
