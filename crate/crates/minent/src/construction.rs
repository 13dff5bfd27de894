//! The explicit orthogonal subspace pair of C⁴⊗C³ with no product
//! vectors, random orthogonal pairs, and the numerical product-vector
//! search.
//!
//! Vectors of C⁴⊗C³ are displayed as 3×4 matrices (rows index B,
//! columns index A); a vector is a product state exactly when that
//! matrix has rank 1, i.e. when all of its 2×2 minors vanish. The two
//! explicit spans below are stored unnormalized exactly as displayed
//! and normalized on load.

use num_complex::Complex64;

use crate::channels::Channel;
use crate::optim::{seesaw_product, Extremum};
use crate::qmath::matrix::{C_ONE, C_ZERO};
use crate::qmath::{
    l2_norm, matrix_to_vec, schmidt, vec_to_matrix, BipartiteShape, ComplexMatrix, PureVector,
    SpectralState, Subspace,
};
use crate::tol;
use crate::{Error, Result};

/// ω = e^{2πi/3}.
pub fn omega() -> Complex64 {
    Complex64::new(-0.5, 0.75f64.sqrt())
}

/// ω² = e^{4πi/3}.
pub fn omega2() -> Complex64 {
    Complex64::new(-0.5, -(0.75f64.sqrt()))
}

/// Shape (d_A, d_B) = (4, 3) of the explicit construction.
pub fn explicit_shape() -> BipartiteShape {
    BipartiteShape::new(4, 3).expect("static shape")
}

fn mat3x4(rows: [[Complex64; 4]; 3]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec(), rows[2].to_vec()])
}

/// The six spanning arrays of R, unnormalized.
pub fn subspace_r_raw() -> Vec<ComplexMatrix> {
    let o = omega();
    let o2 = omega2();
    let z = C_ZERO;
    let one = C_ONE;
    let neg = -C_ONE;
    vec![
        mat3x4([[z, z, z, z], [one, z, z, z], [z, one, z, z]]),
        mat3x4([[one, z, z, z], [z, one, z, z], [z, z, one, z]]),
        mat3x4([[one, z, z, z], [z, o, z, z], [z, z, o2, z]]),
        mat3x4([[z, one, z, z], [z, z, o2, z], [z, z, z, o]]),
        mat3x4([[z, z, one, z], [z, z, z, neg], [z, z, z, z]]),
        mat3x4([[z, z, z, one], [z, z, z, z], [neg, z, z, z]]),
    ]
}

/// The six spanning arrays of S, unnormalized.
pub fn subspace_s_raw() -> Vec<ComplexMatrix> {
    let o = omega();
    let o2 = omega2();
    let z = C_ZERO;
    let one = C_ONE;
    let neg = -C_ONE;
    vec![
        mat3x4([[z, z, z, z], [one, z, z, z], [z, neg, z, z]]),
        mat3x4([[one, z, z, z], [z, o2, z, z], [z, z, o, z]]),
        mat3x4([[z, one, z, z], [z, z, one, z], [z, z, z, one]]),
        mat3x4([[z, one, z, z], [z, z, o, z], [z, z, z, o2]]),
        mat3x4([[z, z, one, z], [z, z, z, one], [z, z, z, z]]),
        mat3x4([[z, z, z, one], [z, z, z, z], [one, z, z, z]]),
    ]
}

fn subspace_from_raw(raw: &[ComplexMatrix]) -> Subspace {
    let shape = explicit_shape();
    let basis: Vec<PureVector> = raw
        .iter()
        .map(|m| {
            let v = matrix_to_vec(m, shape).expect("static 3x4 arrays");
            PureVector::from_unnormalized(&v).expect("nonzero arrays")
        })
        .collect();
    Subspace::new(shape, basis).expect("static arrays are orthogonal")
}

/// The 6-dimensional subspace R (normalized basis, display order).
pub fn subspace_r() -> Subspace {
    subspace_from_raw(&subspace_r_raw())
}

/// The 6-dimensional subspace S, orthogonal to R.
pub fn subspace_s() -> Subspace {
    subspace_from_raw(&subspace_s_raw())
}

/// A pair of mutually orthogonal subspaces of the same bipartite space.
#[derive(Debug, Clone)]
pub struct SubspacePair {
    pub r: Subspace,
    pub s: Subspace,
}

impl SubspacePair {
    pub fn new(r: Subspace, s: Subspace) -> Result<Self> {
        if r.shape() != s.shape() {
            return Err(Error::DimensionMismatch {
                expected: r.shape().dim(),
                got: s.shape().dim(),
            });
        }
        if r.dim() + s.dim() > r.shape().dim() {
            return Err(Error::SubspaceDimOutOfRange {
                d_e: r.dim() + s.dim(),
                max: r.shape().dim(),
            });
        }
        for (i, a) in r.basis().iter().enumerate() {
            for (j, b) in s.basis().iter().enumerate() {
                let ov = a.inner(b).norm();
                if ov > tol::ORTHO_TOL {
                    return Err(Error::Numerical(format!(
                        "subspaces not orthogonal: |<r_{i}|s_{j}>| = {ov:e}"
                    )));
                }
            }
        }
        Ok(Self { r, s })
    }

    /// The explicit pair (R, S).
    pub fn explicit() -> Self {
        Self::new(subspace_r(), subspace_s()).expect("static arrays are orthogonal")
    }
}

/// All 2×2 minors in lexicographic (row-pair, column-pair) order;
/// a rank-1 matrix has every minor equal to zero.
pub fn minors_2x2(m: &ComplexMatrix) -> Vec<Complex64> {
    let mut out = Vec::new();
    for r1 in 0..m.rows() {
        for r2 in r1 + 1..m.rows() {
            for c1 in 0..m.cols() {
                for c2 in c1 + 1..m.cols() {
                    out.push(m[(r1, c1)] * m[(r2, c2)] - m[(r1, c2)] * m[(r2, c1)]);
                }
            }
        }
    }
    out
}

pub fn max_minor(m: &ComplexMatrix) -> f64 {
    minors_2x2(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Outcome of the product-overlap see-saw over a subspace projector.
#[derive(Debug, Clone)]
pub struct ProductSearchReport {
    /// Largest ⟨φ_A⊗φ_B|Π|φ_A⊗φ_B⟩ found.
    pub best_overlap: f64,
    /// The product witness attaining `best_overlap`.
    pub witness: (PureVector, PureVector),
    pub restarts: usize,
    pub converged: bool,
}

/// Multi-restart alternating maximization of the product overlap with a
/// subspace projector. The result is a certified lower bound on the true
/// maximum; it is the basis of the product-vector decision below.
pub fn product_overlap_max(
    subspace: &Subspace,
    restarts: usize,
    seed: u64,
) -> Result<ProductSearchReport> {
    if restarts == 0 {
        return Err(Error::NoRestarts);
    }
    let shape = subspace.shape();
    let proj = subspace.projector();
    let out = seesaw_product(&proj, shape.d_a, shape.d_b, Extremum::Max, restarts, seed)?;
    Ok(ProductSearchReport {
        best_overlap: out.value,
        witness: (out.phi, out.psi),
        restarts,
        converged: out.converged,
    })
}

/// Decision record for product-vector membership.
#[derive(Debug, Clone)]
pub struct ProductDecision {
    pub contains_product: bool,
    pub best_overlap: f64,
    /// Product witness (φ_A, φ_B), polished when a product vector was
    /// found so that the projected vector passes the minor test.
    pub witness: Option<(PureVector, PureVector)>,
    /// Largest |2×2 minor| of the projected witness, when found.
    pub witness_max_minor: Option<f64>,
}

const POLISH_AP_ITERS: usize = 60;
const POLISH_GN_ITERS: usize = 30;

/// Polish a near-product see-saw witness into an actual rank-1 vector
/// of the subspace: a few alternating projections (subspace ↔ rank-1
/// Schmidt truncation) to tighten the basin, then Gauss–Newton on the
/// 2×2-minor system, which is bilinear in the subspace coordinates and
/// converges quadratically at a transversal intersection.
fn polish_witness(
    subspace: &Subspace,
    phi: &PureVector,
    psi: &PureVector,
) -> Result<(PureVector, PureVector, f64)> {
    let shape = subspace.shape();
    let mut product = phi.tensor(psi);
    for _ in 0..POLISH_AP_ITERS {
        let projected = subspace.project(product.amplitudes());
        if l2_norm(&projected) < 1e-12 {
            break;
        }
        let v = PureVector::from_unnormalized(&projected)?;
        let dec = schmidt(&v, shape)?;
        let next = dec.left_basis[0].tensor(&dec.right_basis[0]);
        let moved = next
            .amplitudes()
            .iter()
            .zip(product.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        product = next;
        if moved < 1e-9 {
            break;
        }
    }

    // Subspace coordinates of the current candidate.
    let mut coords: Vec<Complex64> = subspace
        .basis()
        .iter()
        .map(|b| {
            crate::qmath::inner_product(b.amplitudes(), product.amplitudes())
        })
        .collect();
    let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 1e-9 {
        coords.iter_mut().for_each(|z| *z /= norm);
        gauss_newton_minors(subspace, &mut coords);
    }

    // Assemble the refined subspace vector and read off its product pair.
    let n = shape.dim();
    let mut v = vec![C_ZERO; n];
    for (c, b) in coords.iter().zip(subspace.basis()) {
        for (x, y) in v.iter_mut().zip(b.amplitudes()) {
            *x += c * y;
        }
    }
    let refined = PureVector::from_unnormalized(&v)?;
    let dec = schmidt(&refined, shape)?;
    let (alpha, beta) = (dec.left_basis[0].clone(), dec.right_basis[0].clone());
    let overlap = l2_norm(&subspace.project(alpha.tensor(&beta).amplitudes())).powi(2);
    Ok((alpha, beta, overlap))
}

/// Gauss–Newton iteration driving all 2×2 minors of Σ x_i·M_i to zero,
/// where M_i are the reshaped basis vectors; x is kept unit-norm. The
/// minors are holomorphic in x, so the complex normal equations apply.
fn gauss_newton_minors(subspace: &Subspace, coords: &mut [Complex64]) {
    let shape = subspace.shape();
    let k = coords.len();
    let basis_mats: Vec<ComplexMatrix> = subspace
        .basis()
        .iter()
        .map(|b| vec_to_matrix(b.amplitudes(), shape).expect("basis has subspace shape"))
        .collect();
    let assemble = |x: &[Complex64]| -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(shape.d_b, shape.d_a);
        for (c, bm) in x.iter().zip(&basis_mats) {
            m = m.add(&bm.scale(*c));
        }
        m
    };
    let mut best = coords.to_vec();
    let mut best_minor = max_minor(&assemble(coords));
    for _ in 0..POLISH_GN_ITERS {
        let m = assemble(coords);
        let minors = minors_2x2(&m);
        // Jacobian of each minor w.r.t. the complex coordinates.
        let mut jac = vec![vec![C_ZERO; k]; minors.len()];
        let mut row = 0;
        for r1 in 0..m.rows() {
            for r2 in r1 + 1..m.rows() {
                for c1 in 0..m.cols() {
                    for c2 in c1 + 1..m.cols() {
                        for (i, bm) in basis_mats.iter().enumerate() {
                            jac[row][i] = bm[(r1, c1)] * m[(r2, c2)]
                                + m[(r1, c1)] * bm[(r2, c2)]
                                - bm[(r1, c2)] * m[(r2, c1)]
                                - m[(r1, c2)] * bm[(r2, c1)];
                        }
                        row += 1;
                    }
                }
            }
        }
        // Normal equations J†J dx = J†m with a small ridge.
        let mut a = ComplexMatrix::zeros(k, k);
        let mut rhs = vec![C_ZERO; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = C_ZERO;
                for (r, jr) in jac.iter().enumerate() {
                    acc += jr[i].conj() * jac[r][j];
                }
                a[(i, j)] = acc;
            }
            let mut acc = C_ZERO;
            for (r, jr) in jac.iter().enumerate() {
                acc += jr[i].conj() * minors[r];
            }
            rhs[i] = acc;
        }
        let ridge = 1e-14 * a.max_abs().max(1e-30);
        for i in 0..k {
            a[(i, i)] += ridge;
        }
        let delta = match solve_hermitian(&a, &rhs) {
            Some(d) => d,
            None => break,
        };
        for (x, d) in coords.iter_mut().zip(&delta) {
            *x -= d;
        }
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            coords.copy_from_slice(&best);
            break;
        }
        coords.iter_mut().for_each(|z| *z /= norm);
        let current = max_minor(&assemble(coords));
        if current < best_minor {
            best_minor = current;
            best.copy_from_slice(coords);
        }
        if current < 1e-14 {
            break;
        }
    }
    coords.copy_from_slice(&best);
}

fn solve_hermitian(a: &ComplexMatrix, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let l = crate::qmath::cholesky(a)?;
    let n = b.len();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            y[i] = y[i] - lik * y[k];
        }
        y[i] /= l[(i, i)].re;
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let lki = l[(k, i)].conj();
            y[i] = y[i] - lki * y[k];
        }
        y[i] /= l[(i, i)].re;
    }
    Some(y)
}

/// True iff the see-saw (after witness polishing) exhibits a product
/// vector with overlap at least 1 − tol.
pub fn contains_product_vector(
    subspace: &Subspace,
    tol_overlap: f64,
    restarts: usize,
    seed: u64,
) -> Result<ProductDecision> {
    let report = product_overlap_max(subspace, restarts, seed)?;
    let mut best_overlap = report.best_overlap;
    // Polishing is cheap; attempt it whenever the see-saw got close
    // enough that a true intersection is plausible.
    if best_overlap >= 1.0 - (100.0 * tol_overlap).min(1e-2) {
        let (phi, psi, polished) =
            polish_witness(subspace, &report.witness.0, &report.witness.1)?;
        if polished > best_overlap {
            best_overlap = polished;
        }
        if best_overlap >= 1.0 - tol_overlap {
            let projected = subspace.project(phi.tensor(&psi).amplitudes());
            let v = PureVector::from_unnormalized(&projected)?;
            let minor = max_minor(&vec_to_matrix(v.amplitudes(), subspace.shape())?);
            return Ok(ProductDecision {
                contains_product: true,
                best_overlap,
                witness: Some((phi, psi)),
                witness_max_minor: Some(minor),
            });
        }
    }
    Ok(ProductDecision {
        contains_product: best_overlap >= 1.0 - tol_overlap,
        best_overlap,
        witness: None,
        witness_max_minor: None,
    })
}

/// Largest subspace dimension (d_A−1)(d_B−1) at which a generic
/// subspace avoids all product vectors.
pub fn generic_threshold(shape: BipartiteShape) -> usize {
    (shape.d_a - 1) * (shape.d_b - 1)
}

/// The dimension-count condition d_A·d_B > d_A + d_B + d_E − 2 under
/// which a random subspace of dimension d_E almost surely contains no
/// product vector.
pub fn lemma1_condition(shape: BipartiteShape, d_e: usize) -> bool {
    shape.d_a * shape.d_b > shape.d_a + shape.d_b + d_e - 2
}

/// Σ w_i |b_i⟩⟨b_i| over the subspace basis; weights must lie on the
/// probability simplex.
pub fn weighted_cj(subspace: &Subspace, weights: &[f64]) -> Result<SpectralState> {
    if weights.len() != subspace.dim() {
        return Err(Error::InvalidWeights(format!(
            "expected {} weights, got {}",
            subspace.dim(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| **w < 0.0) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
    }
    let n = subspace.shape().dim();
    let mut m = ComplexMatrix::zeros(n, n);
    for (w, b) in weights.iter().zip(subspace.basis()) {
        let amps = b.amplitudes();
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] += w * amps[r] * amps[c].conj();
            }
        }
    }
    SpectralState::new(m)
}

pub fn uniform_weights(d_e: usize) -> Vec<f64> {
    vec![1.0 / d_e as f64; d_e]
}

fn renormalized(raw: &[f64]) -> Vec<f64> {
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|w| w / sum).collect()
}

/// The `paper_weights` reference list for the R basis (basis order),
/// renormalized from six significant figures to unit sum.
pub fn paper_weights_r() -> Vec<f64> {
    renormalized(&[0.172776, 0.118738, 0.199229, 0.136705, 0.306899, 0.0656529])
}

/// The `paper_weights` reference list for the S basis.
pub fn paper_weights_s() -> Vec<f64> {
    renormalized(&[0.344911, 0.124908, 0.120721, 0.156968, 0.162754, 0.089738])
}

/// The reference weight lists before renormalization.
pub fn paper_weights_r_raw() -> [f64; 6] {
    [0.172776, 0.118738, 0.199229, 0.136705, 0.306899, 0.0656529]
}

pub fn paper_weights_s_raw() -> [f64; 6] {
    [0.344911, 0.124908, 0.120721, 0.156968, 0.162754, 0.089738]
}

/// Build the channel pair from an orthogonal subspace pair: the first
/// CJ state is supported on R, the second is the transpose of a state
/// supported on S, which enforces tr(ρ σ^T) = 0 exactly.
pub fn channel_pair(
    pair: &SubspacePair,
    weights_r: &[f64],
    weights_s: &[f64],
) -> Result<(Channel, Channel)> {
    let rho = weighted_cj(&pair.r, weights_r)?;
    let sigma_t = weighted_cj(&pair.s, weights_s)?;
    let ch1 = Channel::from_cj(rho, pair.r.shape())?;
    let ch2 = Channel::from_cj(sigma_t.transpose(), pair.s.shape())?;
    Ok((ch1, ch2))
}

/// The explicit channels with projector CJ states (uniform weights).
pub fn explicit_channels_projector() -> Result<(Channel, Channel)> {
    let pair = SubspacePair::explicit();
    channel_pair(&pair, &uniform_weights(6), &uniform_weights(6))
}

/// The explicit channels with the `paper_weights` reference vectors.
pub fn explicit_channels_paper_weights() -> Result<(Channel, Channel)> {
    let pair = SubspacePair::explicit();
    channel_pair(&pair, &paper_weights_r(), &paper_weights_s())
}

/// A random orthogonal CJ pair and the derived channels.
#[derive(Debug, Clone)]
pub struct RandomPair {
    pub pair: SubspacePair,
    pub rho: SpectralState,
    pub sigma: SpectralState,
    pub channels: (Channel, Channel),
    pub seed: u64,
    /// Number of resamples needed before both marginals were full rank.
    pub retries: usize,
}

/// ρ = (2/D)·Π onto a Haar-random D/2-dimensional subspace and
/// σ = (2/D)·(1 − Π^T); tr(ρσ^T) = 0 holds by construction. Resamples
/// (with a retry count) in the measure-zero event of a rank-deficient
/// marginal.
pub fn random_orthogonal_pair(shape: BipartiteShape, seed: u64) -> Result<RandomPair> {
    let total = shape.dim();
    if !total.is_multiple_of(2) {
        return Err(Error::OddTotalDimension(total));
    }
    let d_e = total / 2;
    let mut retries = 0;
    loop {
        let r = crate::qmath::haar_random_subspace_stream(shape, d_e, seed, retries as u64)?;
        let s = r.complement()?;
        let pair = SubspacePair::new(r, s)?;
        let rho = weighted_cj(&pair.r, &uniform_weights(d_e))?;
        let sigma = weighted_cj(&pair.s, &uniform_weights(total - d_e))?.transpose();
        let ch1 = Channel::from_cj(rho.clone(), shape);
        let ch2 = Channel::from_cj(sigma.clone(), shape);
        match (ch1, ch2) {
            (Ok(c1), Ok(c2)) => {
                return Ok(RandomPair {
                    pair,
                    rho,
                    sigma,
                    channels: (c1, c2),
                    seed,
                    retries,
                });
            }
            _ => {
                retries += 1;
                if retries > 32 {
                    return Err(Error::Numerical(
                        "repeated rank-deficient marginals in random pair".into(),
                    ));
                }
            }
        }
    }
}

/// tr(ρ σ^T); zero for every constructed pair.
pub fn pair_orthogonality(rho: &SpectralState, sigma: &SpectralState) -> f64 {
    rho.matrix()
        .matmul(&sigma.matrix().transpose())
        .trace()
        .re
        .abs()
}
