//! Minimum output Rényi entropies of quantum channels.
//!
//! This crate builds pairs of quantum channels from 4- to 3-dimensional
//! systems whose minimum output p-Rényi entropy is non-additive for small
//! p, and provides the numerics to check every piece of that claim:
//!
//! - [`qmath`]: dense complex linear algebra and bipartite-system
//!   primitives (Kronecker products, partial trace/transpose, Schmidt
//!   decompositions, Haar-random subspaces, a Jacobi eigensolver).
//! - [`channels`]: channels represented by generalized Choi–Jamiołkowski
//!   states, their reconstruction, application, and tensoring.
//! - [`construction`]: the explicit orthogonal subspace pair R, S of
//!   C⁴⊗C³ with no product vectors, random orthogonal pairs, and the
//!   numerical product-vector search.
//! - [`entropy`]: Rényi entropies and minimum-output-entropy search.
//! - [`scan`]: additivity violation scans over p and the weight search.
//! - [`certify`]: rigorous one-sided bounds via a PPT semidefinite
//!   relaxation with independently checkable dual certificates.
//!
//! Everything is deterministic given an explicit `u64` seed; random
//! constructions use a named ChaCha generator so that every reported
//! number can be reproduced bit for bit.

pub mod certify;
pub mod channels;
pub mod construction;
pub mod entropy;
pub mod experiments;
pub mod qmath;
pub mod scan;
pub mod tol;

mod error;
mod optim;

pub use error::{Error, Result};

/// Version string stamped into JSON sidecars.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
