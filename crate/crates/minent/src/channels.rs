//! Quantum channels represented by generalized Choi–Jamiołkowski states.
//!
//! A channel N: B(C^{d_A}) → B(C^{d_B}) is stored as a single bipartite
//! state ρ_AB on A⊗B with full-rank A-marginal. The action is
//!
//!   N(φ) = tr_A[ ρ_AB ( ρ_A^{-1/2} φ̄ ρ_A^{-1/2} ⊗ 1 ) ],
//!
//! with conjugation in the computational basis and the reference-state
//! unitary fixed to the identity, so ρ_AB alone determines the channel.
//! The standard (unnormalized) operator Ω with tr_B Ω = 1 is recovered
//! as Ω = (ρ_A^{-1/2}⊗1) ρ_AB (ρ_A^{-1/2}⊗1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qmath::matrix::C_ZERO;
use crate::qmath::{
    maximally_entangled, partial_trace, BipartiteShape, ComplexMatrix, PureVector, SpectralState,
    Subsystem,
};
use crate::{Error, Result};

/// A channel as a generalized Choi–Jamiołkowski state plus shape.
#[derive(Debug, Clone)]
pub struct Channel {
    shape: BipartiteShape,
    cj: SpectralState,
    a_marginal: SpectralState,
    inv_sqrt_a: ComplexMatrix,
}

impl Channel {
    /// Validate a CJ state and cache the marginal machinery. Errors when
    /// the A-marginal is rank deficient (the channel reconstruction is
    /// undefined there).
    pub fn from_cj(cj: SpectralState, shape: BipartiteShape) -> Result<Self> {
        if cj.dim() != shape.dim() {
            return Err(Error::DimensionMismatch { expected: shape.dim(), got: cj.dim() });
        }
        let marg = partial_trace(cj.matrix(), shape, Subsystem::B)?;
        let a_marginal = SpectralState::new(marg)?;
        let inv_sqrt_a = a_marginal.inv_sqrt()?;
        Ok(Self { shape, cj, a_marginal, inv_sqrt_a })
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn cj(&self) -> &SpectralState {
        &self.cj
    }

    pub fn a_marginal(&self) -> &SpectralState {
        &self.a_marginal
    }

    /// N(φ) for a density operator φ on the input space.
    pub fn apply(&self, phi: &SpectralState) -> Result<SpectralState> {
        if phi.dim() != self.shape.d_a {
            return Err(Error::DimensionMismatch { expected: self.shape.d_a, got: phi.dim() });
        }
        let w = self
            .inv_sqrt_a
            .matmul(&phi.matrix().conj())
            .matmul(&self.inv_sqrt_a);
        SpectralState::new(self.output_from_input_matrix(&w))
    }

    /// N(|v⟩⟨v|) for a pure input.
    pub fn apply_pure(&self, v: &PureVector) -> Result<SpectralState> {
        SpectralState::new(self.output_matrix_pure(v)?)
    }

    /// Output eigenvalues only (ascending); the optimizer hot path.
    pub fn apply_pure_eigenvalues(&self, v: &PureVector) -> Result<Vec<f64>> {
        crate::qmath::hermitian_eigenvalues(&self.output_matrix_pure(v)?)
    }

    fn output_matrix_pure(&self, v: &PureVector) -> Result<ComplexMatrix> {
        if v.dim() != self.shape.d_a {
            return Err(Error::DimensionMismatch { expected: self.shape.d_a, got: v.dim() });
        }
        let conj: Vec<Complex64> = v.amplitudes().iter().map(|z| z.conj()).collect();
        let w = self.inv_sqrt_a.mul_vec(&conj);
        Ok(self.output_from_input_vector(&w))
    }

    /// tr_A[cj (W ⊗ 1)] for Hermitian W.
    fn output_from_input_matrix(&self, w: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = (self.shape.d_a, self.shape.d_b);
        let cj = self.cj.matrix();
        let mut out = ComplexMatrix::zeros(db, db);
        for b in 0..db {
            for b2 in 0..db {
                let mut acc = C_ZERO;
                for a in 0..da {
                    for a2 in 0..da {
                        acc += cj[(self.shape.index(a, b), self.shape.index(a2, b2))] * w[(a2, a)];
                    }
                }
                out[(b, b2)] = acc;
            }
        }
        out.symmetrize()
    }

    /// Rank-1 specialisation: W = |w⟩⟨w|.
    fn output_from_input_vector(&self, w: &[Complex64]) -> ComplexMatrix {
        let (da, db) = (self.shape.d_a, self.shape.d_b);
        let cj = self.cj.matrix();
        let mut out = ComplexMatrix::zeros(db, db);
        for b in 0..db {
            for b2 in 0..db {
                let mut acc = C_ZERO;
                for a in 0..da {
                    let wa = w[a].conj();
                    if wa == C_ZERO {
                        continue;
                    }
                    for a2 in 0..da {
                        acc += wa * w[a2] * cj[(self.shape.index(a, b), self.shape.index(a2, b2))];
                    }
                }
                out[(b, b2)] = acc;
            }
        }
        out.symmetrize()
    }

    /// The standard Choi operator Ω = (ρ_A^{-1/2}⊗1) ρ_AB (ρ_A^{-1/2}⊗1);
    /// Ω is PSD with tr_B Ω = 1 and tr Ω = d_A.
    pub fn standard_cj(&self) -> ComplexMatrix {
        let s = self.inv_sqrt_a.kron(&ComplexMatrix::identity(self.shape.d_b));
        s.matmul(self.cj.matrix()).matmul(&s).symmetrize()
    }
}

/// N(φ) = tr_A[Ω (φ̄ ⊗ 1)]: channel application through the standard
/// Choi operator. Kept separate from [`Channel::apply`] so the two
/// reconstruction routes can be checked against each other.
pub fn apply_standard(
    omega: &ComplexMatrix,
    shape: BipartiteShape,
    phi: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if omega.rows() != shape.dim() {
        return Err(Error::DimensionMismatch { expected: shape.dim(), got: omega.rows() });
    }
    if phi.rows() != shape.d_a {
        return Err(Error::DimensionMismatch { expected: shape.d_a, got: phi.rows() });
    }
    let big = omega.matmul(&phi.conj().kron(&ComplexMatrix::identity(shape.d_b)));
    partial_trace(&big, shape, Subsystem::A)
}

/// Flat-index permutation from (A B)(A′ B′) order (a plain tensor
/// product of two CJ states) to the joint channel order (A A′)(B B′).
pub fn joint_permutation(s1: BipartiteShape, s2: BipartiteShape) -> Vec<usize> {
    let d2 = s2.dim();
    let joint_db = s1.d_b * s2.d_b;
    let total = s1.dim() * d2;
    let mut perm = vec![0usize; total];
    for a in 0..s1.d_a {
        for b in 0..s1.d_b {
            for a2 in 0..s2.d_a {
                for b2 in 0..s2.d_b {
                    let old = s1.index(a, b) * d2 + s2.index(a2, b2);
                    let new = (a * s2.d_a + a2) * joint_db + (b * s2.d_b + b2);
                    perm[old] = new;
                }
            }
        }
    }
    perm
}

/// Two channels viewed jointly; the combined CJ state is stored in
/// (A A′)(B B′) order so the joint is itself a [`Channel`] with shape
/// (d_A·d_A′, d_B·d_B′).
#[derive(Debug, Clone)]
pub struct JointChannel {
    left: Channel,
    right: Channel,
    joint: Channel,
}

impl JointChannel {
    pub fn left(&self) -> &Channel {
        &self.left
    }

    pub fn right(&self) -> &Channel {
        &self.right
    }

    pub fn as_channel(&self) -> &Channel {
        &self.joint
    }

    /// Largest deviation between the stored joint CJ and the reordered
    /// tensor product of the factors.
    pub fn reordering_residual(&self) -> f64 {
        let perm = joint_permutation(self.left.shape(), self.right.shape());
        let prod = self.left.cj().matrix().kron(self.right.cj().matrix());
        let n = prod.rows();
        let joint = self.joint.cj().matrix();
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                dev = dev.max((joint[(perm[r], perm[c])] - prod[(r, c)]).norm());
            }
        }
        dev
    }
}

/// ω = ρ ⊗ σ reordered into (A A′)(B B′). The joint eigendecomposition
/// is assembled from the factor decompositions rather than recomputed.
pub fn tensor_channels(n1: &Channel, n2: &Channel) -> Result<JointChannel> {
    let (s1, s2) = (n1.shape(), n2.shape());
    let joint_shape = BipartiteShape::new(s1.d_a * s2.d_a, s1.d_b * s2.d_b)?;
    let perm = joint_permutation(s1, s2);
    let (d1, d2) = (s1.dim(), s2.dim());
    let n = d1 * d2;

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n);
    for i in 0..d1 {
        for j in 0..d2 {
            pairs.push((n1.cj().eigenvalues()[i] * n2.cj().eigenvalues()[j], i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let v1 = n1.cj().eigenvectors();
    let v2 = n2.cj().eigenvectors();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &(lambda, i, j)) in pairs.iter().enumerate() {
        eigenvalues.push(lambda.max(0.0));
        for r1 in 0..d1 {
            let a = v1[(r1, i)];
            if a == C_ZERO {
                continue;
            }
            for r2 in 0..d2 {
                eigenvectors[(perm[r1 * d2 + r2], col)] = a * v2[(r2, j)];
            }
        }
    }
    let cj = SpectralState::from_decomposition(eigenvalues, eigenvectors)?;
    let joint = Channel::from_cj(cj, joint_shape)?;
    Ok(JointChannel { left: n1.clone(), right: n2.clone(), joint })
}

/// The joint input that deletes an output eigenvalue for orthogonal CJ
/// pairs: the normalized conjugate of (√ρ_A ⊗ √σ_{A′}) |Φ_{AA′}⟩.
/// When both marginals are maximally mixed this is Φ_{AA′} itself.
pub fn special_input(n1: &Channel, n2: &Channel) -> Result<PureVector> {
    let da = n1.shape().d_a;
    if n2.shape().d_a != da {
        return Err(Error::DimensionMismatch { expected: da, got: n2.shape().d_a });
    }
    let phi = maximally_entangled(da);
    let s1 = n1.a_marginal().sqrt();
    let s2 = n2.a_marginal().sqrt();
    let w = s1.kron(&s2).mul_vec(phi.amplitudes());
    let conj: Vec<Complex64> = w.iter().map(|z| z.conj()).collect();
    PureVector::from_unnormalized(&conj)
}

/// Output of N₁⊗N₂ on a pure joint input, computed directly from the
/// factor CJ states without materializing the joint channel. Matches
/// `tensor_channels(n1, n2).as_channel().apply_pure(input)`; used in
/// scan loops where the joint is rebuilt for every weight candidate.
pub fn joint_output_on_pure(
    n1: &Channel,
    n2: &Channel,
    input: &PureVector,
) -> Result<ComplexMatrix> {
    let (s1, s2) = (n1.shape(), n2.shape());
    let da = s1.d_a * s2.d_a;
    if input.dim() != da {
        return Err(Error::DimensionMismatch { expected: da, got: input.dim() });
    }
    let inv = n1.inv_sqrt_a.kron(&n2.inv_sqrt_a);
    let conj: Vec<Complex64> = input.amplitudes().iter().map(|z| z.conj()).collect();
    let w = inv.mul_vec(&conj);

    let (cj1, cj2) = (n1.cj.matrix(), n2.cj.matrix());
    let db = s1.d_b * s2.d_b;
    let mut out = ComplexMatrix::zeros(db, db);
    for b1 in 0..s1.d_b {
        for b2 in 0..s2.d_b {
            let row = b1 * s2.d_b + b2;
            for c1 in 0..s1.d_b {
                for c2 in 0..s2.d_b {
                    let col = c1 * s2.d_b + c2;
                    if col < row {
                        continue;
                    }
                    let mut acc = C_ZERO;
                    for a1 in 0..s1.d_a {
                        for a2 in 0..s2.d_a {
                            let wa = w[a1 * s2.d_a + a2].conj();
                            if wa == C_ZERO {
                                continue;
                            }
                            for x1 in 0..s1.d_a {
                                let k1 = cj1[(s1.index(a1, b1), s1.index(x1, c1))];
                                if k1 == C_ZERO {
                                    continue;
                                }
                                for x2 in 0..s2.d_a {
                                    acc += wa
                                        * w[x1 * s2.d_a + x2]
                                        * k1
                                        * cj2[(s2.index(a2, b2), s2.index(x2, c2))];
                                }
                            }
                        }
                    }
                    out[(row, col)] = acc;
                    if col != row {
                        out[(col, row)] = acc.conj();
                    }
                }
            }
        }
    }
    Ok(out.symmetrize())
}

/// The completely depolarizing channel: every input maps to 1/d_B.
pub fn depolarizing_channel(shape: BipartiteShape) -> Result<Channel> {
    let n = shape.dim();
    let cj =
        SpectralState::new(ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)))?;
    Channel::from_cj(cj, shape)
}

/// The identity channel on d dimensions (CJ state = |Φ_d⟩⟨Φ_d|).
pub fn identity_channel(d: usize) -> Result<Channel> {
    let shape = BipartiteShape::new(d, d)?;
    let cj = SpectralState::new(maximally_entangled(d).density())?;
    Channel::from_cj(cj, shape)
}

/// A CJ state with full support (Gram matrix of a Ginibre sample); the
/// marginal is full rank almost surely. Used for randomized checks.
pub fn random_channel(shape: BipartiteShape, seed: u64) -> Result<Channel> {
    use crate::qmath::rng::{complex_gaussian, seeded_rng};
    let n = shape.dim();
    let mut rng = seeded_rng(seed, 0x43_4a);
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
    let gram = g.matmul(&g.dagger());
    let tr = gram.trace().re;
    let cj = SpectralState::new(gram.scale(Complex64::new(1.0 / tr, 0.0)))?;
    Channel::from_cj(cj, shape)
}

/// JSON document for channel import/export; complex entries are [re, im]
/// pairs in row-major order, round-tripping bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub shape: BipartiteShape,
    pub cj: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl ChannelJson {
    pub fn from_channel(ch: &Channel) -> Self {
        let m = ch.cj().matrix();
        let cj = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        Self { shape: ch.shape(), cj, metadata: serde_json::Map::new() }
    }

    pub fn with_metadata(mut self, label: &str, seed: Option<u64>) -> Self {
        self.metadata
            .insert("label".into(), serde_json::Value::String(label.into()));
        if let Some(s) = seed {
            self.metadata.insert("seed".into(), serde_json::json!(s));
        }
        self
    }

    pub fn to_channel(&self) -> Result<Channel> {
        let n = self.shape.dim();
        if self.cj.len() != n || self.cj.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: self.cj.len() });
        }
        let m = ComplexMatrix::from_fn(n, n, |r, c| {
            Complex64::new(self.cj[r][c][0], self.cj[r][c][1])
        });
        Channel::from_cj(SpectralState::new(m)?, self.shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::rng::{complex_gaussian, gaussian_vector, seeded_rng};
    use crate::qmath::{l2_norm, schmidt};

    fn shape(a: usize, b: usize) -> BipartiteShape {
        BipartiteShape::new(a, b).unwrap()
    }

    fn random_pure(dim: usize, seed: u64, stream: u64) -> PureVector {
        PureVector::from_unnormalized(&gaussian_vector(&mut seeded_rng(seed, stream), dim)).unwrap()
    }

    fn random_state(dim: usize, seed: u64) -> SpectralState {
        let mut rng = seeded_rng(seed, 0);
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(&mut rng));
        let gram = g.matmul(&g.dagger());
        let tr = gram.trace().re;
        SpectralState::new(gram.scale(Complex64::new(1.0 / tr, 0.0))).unwrap()
    }

    #[test]
    fn identity_channel_acts_as_identity() {
        let ch = identity_channel(3).unwrap();
        for s in 0..5 {
            let phi = random_state(3, 100 + s);
            let out = ch.apply(&phi).unwrap();
            assert!(out.matrix().sub(phi.matrix()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn depolarizing_maps_to_maximally_mixed() {
        let ch = depolarizing_channel(shape(4, 3)).unwrap();
        let phi = random_state(4, 7);
        let out = ch.apply(&phi).unwrap();
        let expect = ComplexMatrix::identity(3).scale(Complex64::new(1.0 / 3.0, 0.0));
        assert!(out.matrix().sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn apply_preserves_trace_and_psd() {
        let ch = random_channel(shape(4, 3), 11).unwrap();
        for s in 0..100 {
            let v = random_pure(4, 500, s);
            let out = ch.apply_pure(&v).unwrap();
            let tr: f64 = out.eigenvalues().iter().sum();
            assert!((tr - 1.0).abs() < 1e-10);
            assert!(out.min_eigenvalue() > -1e-12);
        }
    }

    #[test]
    fn rank_deficient_marginal_rejected() {
        // CJ supported only on |0>_A ⊗ B: marginal has rank 1 < 2.
        let sh = shape(2, 2);
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        m[(1, 1)] = Complex64::new(0.5, 0.0);
        let cj = SpectralState::new(m).unwrap();
        assert!(matches!(
            Channel::from_cj(cj, sh),
            Err(Error::RankDeficientMarginal(_))
        ));
    }

    #[test]
    fn standard_cj_of_identity_channel_is_gamma_projector() {
        let d = 3;
        let ch = identity_channel(d).unwrap();
        let omega = ch.standard_cj();
        let gamma = crate::qmath::gamma_unnormalized(d);
        let expect = ComplexMatrix::from_fn(d * d, d * d, |r, c| gamma[r] * gamma[c].conj());
        assert!(omega.sub(&expect).max_abs() < 1e-10);
    }

    #[test]
    fn standard_cj_is_trace_preserving() {
        let sh = shape(4, 3);
        let ch = random_channel(sh, 23).unwrap();
        let omega = ch.standard_cj();
        assert!((omega.trace().re - 4.0).abs() < 1e-9);
        let tb = partial_trace(&omega, sh, Subsystem::B).unwrap();
        assert!(tb.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-9);
    }

    #[test]
    fn generalized_and_standard_application_agree() {
        let sh = shape(4, 3);
        let ch = random_channel(sh, 31).unwrap();
        let omega = ch.standard_cj();
        for s in 0..100 {
            let phi = random_state(4, 9000 + s);
            let via_gen = ch.apply(&phi).unwrap();
            let via_std = apply_standard(&omega, sh, phi.matrix()).unwrap();
            assert!(via_gen.matrix().sub(&via_std).max_abs() < 1e-10);
        }
    }

    #[test]
    fn standard_round_trip_on_uniform_marginal() {
        let sh = shape(3, 2);
        let ch = random_channel(sh, 41).unwrap();
        let omega = ch.standard_cj();
        let cj2 = SpectralState::new(omega.scale(Complex64::new(1.0 / 3.0, 0.0))).unwrap();
        let ch2 = Channel::from_cj(cj2, sh).unwrap();
        let omega2 = ch2.standard_cj();
        assert!(omega2.sub(&omega).max_abs() < 1e-9);
    }

    #[test]
    fn joint_factorizes_on_product_inputs() {
        let sh = shape(3, 2);
        let n1 = random_channel(sh, 51).unwrap();
        let n2 = random_channel(sh, 52).unwrap();
        let joint = tensor_channels(&n1, &n2).unwrap();
        assert!(joint.reordering_residual() < 1e-12);
        for s in 0..10 {
            let phi = random_pure(3, 600, 2 * s);
            let psi = random_pure(3, 600, 2 * s + 1);
            let lhs = joint.as_channel().apply_pure(&phi.tensor(&psi)).unwrap();
            let r1 = n1.apply_pure(&phi).unwrap();
            let r2 = n2.apply_pure(&psi).unwrap();
            let rhs = r1.matrix().kron(r2.matrix());
            assert!(lhs.matrix().sub(&rhs).max_abs() < 1e-10);
        }
    }

    #[test]
    fn joint_of_depolarizing_is_depolarizing() {
        let sh = shape(2, 2);
        let dep = depolarizing_channel(sh).unwrap();
        let joint = tensor_channels(&dep, &dep).unwrap();
        let input = random_pure(4, 61, 0);
        let out = joint.as_channel().apply_pure(&input).unwrap();
        let expect = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        assert!(out.matrix().sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn tensor_associative_up_to_convention() {
        let sh = shape(2, 2);
        let a = random_channel(sh, 71).unwrap();
        let b = random_channel(sh, 72).unwrap();
        let c = random_channel(sh, 73).unwrap();
        let left = tensor_channels(tensor_channels(&a, &b).unwrap().as_channel(), &c).unwrap();
        let right = tensor_channels(&a, tensor_channels(&b, &c).unwrap().as_channel()).unwrap();
        let dev = left
            .as_channel()
            .cj()
            .matrix()
            .sub(right.as_channel().cj().matrix())
            .max_abs();
        assert!(dev < 1e-12, "associativity deviation {dev:e}");
    }

    #[test]
    fn special_input_of_depolarizing_pair_is_maximally_entangled() {
        let sh = shape(4, 3);
        let dep = depolarizing_channel(sh).unwrap();
        let si = special_input(&dep, &dep).unwrap();
        let phi = maximally_entangled(4);
        let fidelity = si.inner(&phi).norm();
        assert!((fidelity - 1.0).abs() < 1e-12);
        assert!((l2_norm(si.amplitudes()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn special_input_full_schmidt_rank() {
        let sh = shape(3, 2);
        let n1 = random_channel(sh, 81).unwrap();
        let n2 = random_channel(sh, 82).unwrap();
        let si = special_input(&n1, &n2).unwrap();
        let dec = schmidt(&si, shape(3, 3)).unwrap();
        assert_eq!(dec.rank(), 3);
        assert!((l2_norm(si.amplitudes()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_output_fast_path_matches_full_joint() {
        let sh = shape(3, 2);
        let n1 = random_channel(sh, 55).unwrap();
        let n2 = random_channel(sh, 56).unwrap();
        let joint = tensor_channels(&n1, &n2).unwrap();
        for s in 0..10 {
            let u = random_pure(9, 700, s);
            let fast = joint_output_on_pure(&n1, &n2, &u).unwrap();
            let full = joint.as_channel().apply_pure(&u).unwrap();
            assert!(fast.sub(full.matrix()).max_abs() < 1e-11);
        }
    }

    #[test]
    fn channel_json_round_trip_bit_exact() {
        let ch = random_channel(shape(4, 3), 91).unwrap();
        let doc = ChannelJson::from_channel(&ch).with_metadata("test", Some(91));
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: ChannelJson = serde_json::from_str(&text).unwrap();
        let ch2 = back.to_channel().unwrap();
        assert_eq!(ch.cj().matrix(), ch2.cj().matrix());
    }
}
