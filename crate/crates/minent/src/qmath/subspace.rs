//! Subspaces of a bipartite space: orthonormal bases, projectors and
//! Haar-random sampling.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bipartite::BipartiteShape;
use super::matrix::{inner_product, l2_norm, ComplexMatrix, PureVector};
use super::rng::{gaussian_vector, seeded_rng};
use crate::tol;
use crate::{Error, Result};

/// An orthonormal basis of a d_E-dimensional subspace of A⊗B.
#[derive(Debug, Clone)]
pub struct Subspace {
    shape: BipartiteShape,
    basis: Vec<PureVector>,
}

impl Subspace {
    /// Wrap a basis that is already orthonormal (Gram deviation from the
    /// identity at most 1e-10).
    pub fn new(shape: BipartiteShape, basis: Vec<PureVector>) -> Result<Self> {
        let d_e = basis.len();
        if d_e == 0 || d_e > shape.dim() {
            return Err(Error::SubspaceDimOutOfRange { d_e, max: shape.dim() });
        }
        for v in &basis {
            if v.dim() != shape.dim() {
                return Err(Error::DimensionMismatch { expected: shape.dim(), got: v.dim() });
            }
        }
        for i in 0..d_e {
            for j in 0..d_e {
                let g = basis[i].inner(&basis[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (g - expect).norm() > tol::STRUCT_TOL {
                    return Err(Error::Numerical(format!(
                        "basis not orthonormal: Gram[{i}][{j}] = {g}"
                    )));
                }
            }
        }
        Ok(Self { shape, basis })
    }

    /// Orthonormalize arbitrary spanning vectors (two-pass modified
    /// Gram-Schmidt). Vectors that are linearly dependent on earlier
    /// ones are rejected.
    pub fn from_spanning(shape: BipartiteShape, vectors: &[Vec<Complex64>]) -> Result<Self> {
        let basis = orthonormalize(vectors, shape.dim())?;
        Self::new(shape, basis)
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    /// Subspace dimension d_E.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PureVector] {
        &self.basis
    }

    /// Π = Σ |b_i⟩⟨b_i|.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.shape.dim();
        let mut p = ComplexMatrix::zeros(n, n);
        for v in &self.basis {
            let amps = v.amplitudes();
            for r in 0..n {
                for c in 0..n {
                    p[(r, c)] += amps[r] * amps[c].conj();
                }
            }
        }
        p
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Result<Subspace> {
        let n = self.shape.dim();
        let k = self.dim();
        if k == n {
            return Err(Error::SubspaceDimOutOfRange { d_e: 0, max: n });
        }
        // Sweep the identity columns, projecting out the subspace and the
        // complement vectors found so far; keep the n-k that survive.
        let mut found: Vec<PureVector> = Vec::with_capacity(n - k);
        for c in 0..n {
            if found.len() == n - k {
                break;
            }
            let mut v: Vec<Complex64> = PureVector::basis_state(n, c).amplitudes().to_vec();
            for _pass in 0..2 {
                for b in self.basis.iter().chain(found.iter()) {
                    let ov = inner_product(b.amplitudes(), &v);
                    for (x, y) in v.iter_mut().zip(b.amplitudes()) {
                        *x -= ov * y;
                    }
                }
            }
            if l2_norm(&v) > 1e-6 {
                found.push(PureVector::from_unnormalized(&v)?);
            }
        }
        Subspace::new(self.shape, found)
    }

    /// Projection of `v` into the subspace (not normalized).
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.shape.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for b in &self.basis {
            let ov = inner_product(b.amplitudes(), v);
            for (x, y) in out.iter_mut().zip(b.amplitudes()) {
                *x += ov * y;
            }
        }
        out
    }
}

/// Two-pass modified Gram-Schmidt with positive-real diagonal phases;
/// applied to complex-Gaussian columns this produces Haar-distributed
/// frames.
pub fn orthonormalize(vectors: &[Vec<Complex64>], dim: usize) -> Result<Vec<PureVector>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for b in &basis {
                let ov = inner_product(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= ov * y;
                }
            }
        }
        let norm = l2_norm(&w);
        if norm < 1e-10 * l2_norm(v).max(1.0) {
            return Err(Error::Numerical("linearly dependent spanning set".into()));
        }
        for x in &mut w {
            *x /= norm;
        }
        basis.push(w);
    }
    basis.into_iter().map(PureVector::new).collect()
}

/// Haar-random d_E-dimensional subspace: orthonormalized columns of a
/// complex Ginibre matrix. Deterministic for a fixed (seed, stream=0).
pub fn haar_random_subspace(shape: BipartiteShape, d_e: usize, seed: u64) -> Result<Subspace> {
    haar_random_subspace_stream(shape, d_e, seed, 0)
}

/// Same, with an explicit stream index for parallel experiments.
pub fn haar_random_subspace_stream(
    shape: BipartiteShape,
    d_e: usize,
    seed: u64,
    stream: u64,
) -> Result<Subspace> {
    let n = shape.dim();
    if d_e == 0 || d_e > n {
        return Err(Error::SubspaceDimOutOfRange { d_e, max: n });
    }
    let mut rng = seeded_rng(seed, stream);
    let cols: Vec<Vec<Complex64>> = (0..d_e).map(|_| gaussian_vector(&mut rng, n)).collect();
    let basis = orthonormalize(&cols, n)?;
    Subspace::new(shape, basis)
}

/// JSON form shared by subspace files: amplitudes as [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub shape: BipartiteShape,
    /// Basis vectors, each a list of [re, im] pairs of length d_A·d_B.
    pub basis: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl SubspaceJson {
    pub fn from_subspace(s: &Subspace) -> Self {
        Self {
            shape: s.shape(),
            basis: s
                .basis()
                .iter()
                .map(|v| v.amplitudes().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            metadata: serde_json::Map::new(),
        }
    }

    pub fn to_subspace(&self) -> Result<Subspace> {
        let basis = self
            .basis
            .iter()
            .map(|v| {
                PureVector::new(v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Subspace::new(self.shape, basis)
    }

    /// Load the raw vectors (each normalized) without enforcing
    /// orthonormality, so downstream checks can judge a corrupted file
    /// instead of the loader rejecting it.
    pub fn to_basis_lenient(&self) -> Result<Vec<PureVector>> {
        self.basis
            .iter()
            .map(|v| {
                let amps: Vec<Complex64> =
                    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                PureVector::from_unnormalized(&amps)
            })
            .collect()
    }
}
