//! Named tolerances used across the crate.
//!
//! Double precision at dimension ≤ 144 leaves at least six orders of
//! magnitude of headroom over every structural threshold here, so a
//! failed check indicates a genuine defect rather than roundoff.

/// Exact-orthogonality checks (inner products of constructed bases).
pub const ORTHO_TOL: f64 = 1e-12;

/// Structural identities: Gram matrices, projector idempotence,
/// trace preservation, reconstruction residuals.
pub const STRUCT_TOL: f64 = 1e-10;

/// Hermiticity deviation allowed before a matrix is rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigensolver residual, relative to the matrix scale.
pub const EIG_RESIDUAL_TOL: f64 = 1e-9;

/// Default relative cutoff for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-9;

/// Eigenvalues of a state may dip this far below zero from roundoff.
pub const PSD_FLOOR: f64 = -1e-10;

/// A-marginal eigenvalues below this are treated as genuine rank
/// deficiency rather than roundoff.
pub const MARGINAL_MIN_EIG: f64 = 1e-8;

/// Floor applied inside matrix inverse square roots.
pub const INV_SQRT_FLOOR: f64 = 1e-12;

/// Orthogonality of the paired Choi–Jamiołkowski supports, tr(ρσ^T).
pub const PAIR_ORTHO_TOL: f64 = 1e-14;

/// Default tolerance for declaring a subspace to contain a product vector.
pub const PRODUCT_TOL: f64 = 1e-6;

/// See-saw stops once the overlap gain per iteration falls below this.
pub const SEESAW_GAIN_TOL: f64 = 1e-12;

/// Iteration cap for one see-saw run.
pub const SEESAW_MAX_ITERS: usize = 500;

/// Simplex search stops once the objective improvement falls below this.
pub const SIMPLEX_F_TOL: f64 = 1e-11;

/// Target duality gap for the PPT semidefinite bound.
pub const SDP_GAP_TOL: f64 = 1e-8;

/// Residual allowed when re-verifying a dual certificate.
pub const CERT_RESIDUAL_TOL: f64 = 1e-8;

/// Eigenvalues of certificate blocks may dip this far below zero.
pub const CERT_PSD_FLOOR: f64 = -1e-10;

/// Crossing points are refined by bisection to this width in p.
pub const CROSSING_REFINE_TOL: f64 = 1e-4;

/// A grid point counts as violated only if red < blue by this margin.
pub const VIOLATION_MARGIN: f64 = 1e-9;

/// Bisection width for certified violation thresholds.
pub const THRESHOLD_BISECT_TOL: f64 = 1e-6;

/// Safety margin subtracted from SDP dual values before they are used
/// as certified eigenvalue bounds.
pub const CERT_SAFETY_MARGIN: f64 = 1e-9;
