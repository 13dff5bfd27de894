//! Complex dense linear algebra and bipartite-structure primitives.

pub mod bipartite;
pub mod eig;
pub mod matrix;
pub mod rng;
pub mod subspace;

pub use bipartite::{
    gamma_unnormalized, matrix_to_vec, maximally_entangled, partial_trace, partial_transpose,
    schmidt, vec_to_matrix, BipartiteShape, SchmidtDecomposition, Subsystem,
};
pub use eig::{
    cholesky, hermitian_eig, hermitian_eigenvalues, log_det_pd, rank_eps,
    rank_eps_from_eigenvalues, SpectralState,
};
pub use matrix::{inner_product, l2_norm, ComplexMatrix, PureVector};
pub use subspace::{haar_random_subspace, haar_random_subspace_stream, Subspace, SubspaceJson};
