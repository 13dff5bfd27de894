//! Bipartite index arithmetic: partial traces, partial transpose, the
//! vector/matrix isomorphism and Schmidt decompositions.
//!
//! A composite ket |a⟩_A|b⟩_B lives at flat index a·d_B + b (A-major);
//! every reshape below is fixed by that single convention.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, PureVector, C_ZERO};
use crate::qmath::eig::hermitian_eig;
use crate::{Error, Result};

/// Input and output dimensions (d_A, d_B) of the bipartite space A⊗B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteShape {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteShape {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::InvalidShape(d_a, d_b));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.d_b + b
    }

    fn check_dim(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: m.rows() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Trace out one factor. The result keeps the trace of the input.
pub fn partial_trace(m: &ComplexMatrix, shape: BipartiteShape, over: Subsystem) -> Result<ComplexMatrix> {
    shape.check_dim(m)?;
    let (da, db) = (shape.d_a, shape.d_b);
    match over {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(db, db);
            for b in 0..db {
                for b2 in 0..db {
                    let mut acc = C_ZERO;
                    for a in 0..da {
                        acc += m[(shape.index(a, b), shape.index(a, b2))];
                    }
                    out[(b, b2)] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(da, da);
            for a in 0..da {
                for a2 in 0..da {
                    let mut acc = C_ZERO;
                    for b in 0..db {
                        acc += m[(shape.index(a, b), shape.index(a2, b))];
                    }
                    out[(a, a2)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Transpose on the B factor only.
pub fn partial_transpose(m: &ComplexMatrix, shape: BipartiteShape) -> Result<ComplexMatrix> {
    shape.check_dim(m)?;
    let (da, db) = (shape.d_a, shape.d_b);
    let mut out = ComplexMatrix::zeros(shape.dim(), shape.dim());
    for a in 0..da {
        for a2 in 0..da {
            for b in 0..db {
                for b2 in 0..db {
                    out[(shape.index(a, b), shape.index(a2, b2))] =
                        m[(shape.index(a, b2), shape.index(a2, b))];
                }
            }
        }
    }
    Ok(out)
}

/// Reshape a bipartite vector into the d_B×d_A matrix with entry
/// (b, a) = amplitude of |a⟩_A|b⟩_B. Schmidt rank equals matrix rank.
pub fn vec_to_matrix(v: &[Complex64], shape: BipartiteShape) -> Result<ComplexMatrix> {
    if v.len() != shape.dim() {
        return Err(Error::DimensionMismatch { expected: shape.dim(), got: v.len() });
    }
    Ok(ComplexMatrix::from_fn(shape.d_b, shape.d_a, |b, a| v[shape.index(a, b)]))
}

/// Inverse of [`vec_to_matrix`]; the round trip is bit-exact.
pub fn matrix_to_vec(m: &ComplexMatrix, shape: BipartiteShape) -> Result<Vec<Complex64>> {
    if m.rows() != shape.d_b || m.cols() != shape.d_a {
        return Err(Error::DimensionMismatch { expected: shape.d_b, got: m.rows() });
    }
    let mut v = vec![C_ZERO; shape.dim()];
    for a in 0..shape.d_a {
        for b in 0..shape.d_b {
            v[shape.index(a, b)] = m[(b, a)];
        }
    }
    Ok(v)
}

/// Schmidt form of a bipartite unit vector: positive coefficients in
/// descending order with matching orthonormal local bases.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// √λ_i, descending, only values above the rank cutoff.
    pub coefficients: Vec<f64>,
    /// A-side orthonormal vectors.
    pub left_basis: Vec<PureVector>,
    /// B-side orthonormal vectors.
    pub right_basis: Vec<PureVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Σ c_i |α_i⟩|β_i⟩ in the flat A-major layout.
    pub fn reconstruct(&self, shape: BipartiteShape) -> Vec<Complex64> {
        let mut v = vec![C_ZERO; shape.dim()];
        for ((c, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for a in 0..shape.d_a {
                for b in 0..shape.d_b {
                    v[shape.index(a, b)] += c * l.amplitudes()[a] * r.amplitudes()[b];
                }
            }
        }
        v
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.first().copied().unwrap_or(0.0)
    }
}

// Cutoff on Gram eigenvalues λ = s²; squaring halves the precision, so
// roundoff sits near 1e-16·λ_max and 1e-14 separates it cleanly.
const SCHMIDT_GRAM_CUTOFF: f64 = 1e-14;

/// Schmidt decomposition via the eigendecomposition of the smaller Gram
/// matrix of the reshaped vector.
pub fn schmidt(v: &PureVector, shape: BipartiteShape) -> Result<SchmidtDecomposition> {
    let m = vec_to_matrix(v.amplitudes(), shape)?;
    // m is d_B×d_A with v = Σ_{a,b} m[b][a] |a⟩|b⟩.
    let use_b_side = shape.d_b <= shape.d_a;
    let gram = if use_b_side {
        m.matmul(&m.dagger())
    } else {
        m.dagger().matmul(&m)
    };
    let (eigs, vecs) = hermitian_eig(&gram)?;
    let lambda_max = eigs.last().copied().unwrap_or(0.0).max(0.0);
    let md = m.dagger();
    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for k in (0..eigs.len()).rev() {
        if eigs[k] <= SCHMIDT_GRAM_CUTOFF * lambda_max.max(f64::MIN_POSITIVE) {
            break;
        }
        let s = eigs[k].sqrt();
        let col = vecs.column(k);
        if use_b_side {
            // col is the B-side vector u; A side is conj(M† u)/s.
            let w = md.mul_vec(&col);
            let alpha: Vec<Complex64> = w.iter().map(|z| (z / s).conj()).collect();
            left_basis.push(PureVector::from_unnormalized(&alpha)?);
            right_basis.push(PureVector::new(col).expect("eigenvector normalized"));
        } else {
            // col is w with M = Σ s u w†; A side is conj(w), B side M w / s.
            let u = m.mul_vec(&col);
            let beta: Vec<Complex64> = u.iter().map(|z| z / s).collect();
            let alpha: Vec<Complex64> = col.iter().map(|z| z.conj()).collect();
            left_basis.push(PureVector::new(alpha).expect("eigenvector normalized"));
            right_basis.push(PureVector::from_unnormalized(&beta)?);
        }
        coefficients.push(s);
    }
    Ok(SchmidtDecomposition { coefficients, left_basis, right_basis })
}

/// |Φ_d⟩ = (1/√d) Σ |i⟩|i⟩.
pub fn maximally_entangled(d: usize) -> PureVector {
    assert!(d >= 1);
    let mut v = vec![C_ZERO; d * d];
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    PureVector::new(v).expect("constructed normalized")
}

/// |Γ⟩ = Σ |i⟩|i⟩ = √d · Φ_d, unnormalized.
pub fn gamma_unnormalized(d: usize) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = Complex64::new(1.0, 0.0);
    }
    v
}
