//! Rigorous one-sided bounds on minimum output eigenvalues.
//!
//! For a standard Choi operator Ω the minimum output eigenvalue of the
//! channel equals the minimum of tr[Ω(φ⊗ψ)] over product states, which
//! relaxes to min tr[Ωρ] over PPT states, a semidefinite program.
//! Its dual asks for the largest λ with
//!
//!   Ω − λ·1 = X + Y^{T_B},   X ⪰ 0, Y ⪰ 0,
//!
//! and any feasible (λ, X, Y) certifies the bound regardless of how it
//! was found. The solver below is a dual-side barrier method: maximize
//! t·λ + ln det X + ln det Y over (λ, Y) by Newton steps, pushing t up
//! a fixed schedule. The primal iterate X⁻¹/t is PPT-feasible on the
//! central path, which gives a computable duality gap at every stage.
//! Certificates are re-verified by an independent checker that never
//! trusts the solver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::optim::{seesaw_product, Extremum};
use crate::qmath::eig::pd_inverse_logdet;
use crate::qmath::matrix::C_ZERO;
use crate::qmath::{
    hermitian_eigenvalues, partial_transpose, BipartiteShape, ComplexMatrix,
};
use crate::tol;
use crate::{Error, Result};

/// Sparse Hermitian basis element: at most two (row, col, coeff)
/// entries. The d² elements are orthonormal under tr(A·B).
#[derive(Debug, Clone)]
struct SparseHerm {
    entries: Vec<(usize, usize, Complex64)>,
}

fn hermitian_basis(d: usize) -> Vec<SparseHerm> {
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        basis.push(SparseHerm { entries: vec![(i, i, Complex64::new(1.0, 0.0))] });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            basis.push(SparseHerm {
                entries: vec![
                    (i, j, Complex64::new(inv_sqrt2, 0.0)),
                    (j, i, Complex64::new(inv_sqrt2, 0.0)),
                ],
            });
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            basis.push(SparseHerm {
                entries: vec![
                    (i, j, Complex64::new(0.0, inv_sqrt2)),
                    (j, i, Complex64::new(0.0, -inv_sqrt2)),
                ],
            });
        }
    }
    basis
}

/// Partial transpose acts on basis elements by permuting entry indices.
fn partial_transpose_sparse(e: &SparseHerm, shape: BipartiteShape) -> SparseHerm {
    let db = shape.d_b;
    let entries = e
        .entries
        .iter()
        .map(|&(r, c, w)| {
            let (a, b) = (r / db, r % db);
            let (a2, b2) = (c / db, c % db);
            (a * db + b2, a2 * db + b, w)
        })
        .collect();
    SparseHerm { entries }
}

/// tr(P E) for sparse E: Σ w · P[c][r].
fn trace_with(p: &ComplexMatrix, e: &SparseHerm) -> f64 {
    e.entries
        .iter()
        .map(|&(r, c, w)| (w * p[(c, r)]).re)
        .sum()
}

/// tr(P E P F) = Σ_{(r1,c1,w1)∈E, (r2,c2,w2)∈F} w1 w2 P[c2][r1] P[c1][r2].
fn trace_sandwich(p: &ComplexMatrix, e: &SparseHerm, f: &SparseHerm) -> f64 {
    let mut acc = C_ZERO;
    for &(r1, c1, w1) in &e.entries {
        for &(r2, c2, w2) in &f.entries {
            acc += w1 * w2 * p[(c2, r1)] * p[(c1, r2)];
        }
    }
    acc.re
}

/// A PPT lower-bound certificate. The dual witness (λ, X, Y) is valid
/// independently of solver convergence: whenever X, Y ⪰ 0 and the
/// residual vanishes, every PPT state ρ has tr(Ωρ) ≥ λ.
#[derive(Debug, Clone)]
pub struct SdpCertificate {
    /// tr(Ω ρ̂) at the final primal iterate (PPT-feasible).
    pub primal_value: f64,
    /// The certified lower bound λ.
    pub dual_value: f64,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    /// ‖Ω − λ·1 − X − Y^{T_B}‖_∞ at emission.
    pub residual: f64,
    /// primal − dual at the last centering.
    pub gap: f64,
    pub newton_iterations: usize,
    pub converged: bool,
}

const SDP_NEWTON_CAP: usize = 200;
const SDP_INNER_CAP: usize = 40;
const SDP_T_MULTIPLIER: f64 = 10.0;

struct BarrierWorkspace {
    d: usize,
    omega: ComplexMatrix,
    basis: Vec<SparseHerm>,
    basis_pt: Vec<SparseHerm>,
}

impl BarrierWorkspace {
    fn build_y(&self, y: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.d, self.d);
        for (coef, elem) in y.iter().zip(&self.basis) {
            for &(r, c, w) in &elem.entries {
                m[(r, c)] += coef * w;
            }
        }
        m
    }

    fn build_y_pt(&self, y: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.d, self.d);
        for (coef, elem) in y.iter().zip(&self.basis_pt) {
            for &(r, c, w) in &elem.entries {
                m[(r, c)] += coef * w;
            }
        }
        m
    }

    fn slack(&self, lambda: f64, y: &[f64]) -> ComplexMatrix {
        let mut x = self.omega.clone();
        for i in 0..self.d {
            x[(i, i)] -= lambda;
        }
        x.sub(&self.build_y_pt(y))
    }

    /// Barrier value when (λ, y) is strictly feasible.
    fn barrier(&self, t: f64, lambda: f64, y: &[f64]) -> Option<f64> {
        let ldx = crate::qmath::log_det_pd(&self.slack(lambda, y))?;
        let ldy = crate::qmath::log_det_pd(&self.build_y(y))?;
        Some(t * lambda + ldx + ldy)
    }
}

/// Dense symmetric positive-definite solve (Cholesky); `a` is consumed.
#[allow(clippy::needless_range_loop)]
fn solve_spd(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= a[j][k] * a[j][k];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        a[j][j] = dj;
        for i in j + 1..n {
            let mut acc = a[i][j];
            for k in 0..j {
                acc -= a[i][k] * a[j][k];
            }
            a[i][j] = acc / dj;
        }
    }
    for i in 0..n {
        for k in 0..i {
            b[i] -= a[i][k] * b[k];
        }
        b[i] /= a[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            b[i] -= a[k][i] * b[k];
        }
        b[i] /= a[i][i];
    }
    Some(b)
}

/// min tr(Ωρ) over {ρ ⪰ 0, ρ^{T_B} ⪰ 0, tr ρ = 1}, solved to a target
/// duality gap of 1e-8 with a certified dual witness.
#[allow(clippy::needless_range_loop)]
pub fn ppt_lower_bound(omega: &ComplexMatrix, shape: BipartiteShape) -> Result<SdpCertificate> {
    let d = shape.dim();
    if omega.rows() != d || !omega.is_square() {
        return Err(Error::DimensionMismatch { expected: d, got: omega.rows() });
    }
    let scale = omega.max_abs().max(1.0);
    if omega.hermitian_deviation() > tol::HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(omega.hermitian_deviation()));
    }
    let omega = omega.symmetrize();
    let eig_min = hermitian_eigenvalues(&omega)?[0];

    let basis = hermitian_basis(d);
    let basis_pt: Vec<SparseHerm> = basis
        .iter()
        .map(|e| partial_transpose_sparse(e, shape))
        .collect();
    let ws = BarrierWorkspace { d, omega: omega.clone(), basis, basis_pt };

    let nv = 1 + d * d;
    let mut lambda = eig_min - 1.0;
    let mut y = vec![0.0; d * d];
    for i in 0..d {
        y[i] = 0.5;
    }
    debug_assert!(ws.barrier(1.0, lambda, &y).is_some());

    let mut t = 1.0;
    let mut newton_total = 0usize;
    let mut converged = false;
    let mut primal_value = f64::INFINITY;
    let mut gap = f64::INFINITY;

    'outer: loop {
        // Center at the current t.
        for _ in 0..SDP_INNER_CAP {
            if newton_total >= SDP_NEWTON_CAP {
                break 'outer;
            }
            newton_total += 1;

            let x = ws.slack(lambda, &y);
            let (p, _) = pd_inverse_logdet(&x)
                .ok_or_else(|| Error::Numerical("slack lost definiteness".into()))?;
            let ymat = ws.build_y(&y);
            let (q, _) = pd_inverse_logdet(&ymat)
                .ok_or_else(|| Error::Numerical("Y lost definiteness".into()))?;

            // Gradient of t·λ + ln det X + ln det Y.
            let trace_p: f64 = (0..d).map(|i| p[(i, i)].re).sum();
            let mut g = vec![0.0; nv];
            g[0] = t - trace_p;
            for k in 0..d * d {
                g[k + 1] = -trace_with(&p, &ws.basis_pt[k]) + trace_with(&q, &ws.basis[k]);
            }

            // Negated Hessian (positive definite).
            let p2 = p.matmul(&p);
            let mut h = vec![vec![0.0; nv]; nv];
            h[0][0] = (0..d).map(|i| p2[(i, i)].re).sum();
            for k in 0..d * d {
                let v = trace_with(&p2, &ws.basis_pt[k]);
                h[0][k + 1] = v;
                h[k + 1][0] = v;
            }
            for k in 0..d * d {
                for l in k..d * d {
                    let v = trace_sandwich(&p, &ws.basis_pt[k], &ws.basis_pt[l])
                        + trace_sandwich(&q, &ws.basis[k], &ws.basis[l]);
                    h[k + 1][l + 1] = v;
                    h[l + 1][k + 1] = v;
                }
            }

            // At large t the Hessian conditioning approaches 1/eps;
            // fall back to a ridge-regularized step (still an ascent
            // direction) rather than aborting.
            let max_diag = (0..nv).map(|i| h[i][i]).fold(0.0f64, f64::max);
            let mut step = None;
            let mut ridge = 0.0;
            for _ in 0..5 {
                let mut hr = h.clone();
                if ridge > 0.0 {
                    for (i, row) in hr.iter_mut().enumerate() {
                        row[i] += ridge;
                    }
                }
                if let Some(s) = solve_spd(hr, g.clone()) {
                    step = Some(s);
                    break;
                }
                ridge = if ridge == 0.0 { 1e-12 * max_diag } else { ridge * 1e3 };
            }
            let step = match step {
                Some(s) => s,
                None => break,
            };
            let decrement: f64 = g.iter().zip(&step).map(|(a, b)| a * b).sum();
            if decrement <= 1e-9 {
                break;
            }

            // Backtracking line search keeping (X, Y) strictly PD.
            let f0 = ws
                .barrier(t, lambda, &y)
                .ok_or_else(|| Error::Numerical("infeasible center".into()))?;
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-12 {
                let cand_lambda = lambda + alpha * step[0];
                let cand_y: Vec<f64> = y
                    .iter()
                    .zip(&step[1..])
                    .map(|(v, s)| v + alpha * s)
                    .collect();
                if let Some(f1) = ws.barrier(t, cand_lambda, &cand_y) {
                    if f1 > f0 + 0.01 * alpha * decrement {
                        lambda = cand_lambda;
                        y = cand_y;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }

        // Primal iterate from the centered slack: ρ̂ ∝ X⁻¹.
        let x = ws.slack(lambda, &y);
        if let Some((p, _)) = pd_inverse_logdet(&x) {
            let trace_p: f64 = (0..d).map(|i| p[(i, i)].re).sum();
            let rho = p.scale(Complex64::new(1.0 / trace_p, 0.0));
            primal_value = ws.omega.hs_inner(&rho).re;
            gap = primal_value - lambda;
        }
        if gap.abs() <= tol::SDP_GAP_TOL && 2.0 * d as f64 / t <= 10.0 * tol::SDP_GAP_TOL {
            converged = true;
            break;
        }
        if newton_total >= SDP_NEWTON_CAP || t > 1e13 {
            break;
        }
        t *= SDP_T_MULTIPLIER;
    }

    let x = ws.slack(lambda, &y).symmetrize();
    let ymat = ws.build_y(&y).symmetrize();
    let residual = {
        let mut r = ws.omega.clone();
        for i in 0..d {
            r[(i, i)] -= lambda;
        }
        r.sub(&x).sub(&partial_transpose(&ymat, shape)?).max_abs()
    };
    Ok(SdpCertificate {
        primal_value,
        dual_value: lambda,
        x,
        y: ymat,
        residual,
        gap,
        newton_iterations: newton_total,
        converged,
    })
}

/// Result of the independent certificate check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub residual: f64,
    pub x_min_eigenvalue: f64,
    pub y_min_eigenvalue: f64,
    pub passed: bool,
}

/// Re-verify a dual witness from scratch: reconstruct the residual
/// Ω − λ·1 − X − Y^{T_B} and check PSD-ness of X and Y by
/// eigendecomposition. Does not trust any solver state.
pub fn verify_certificate(
    omega: &ComplexMatrix,
    shape: BipartiteShape,
    cert: &SdpCertificate,
) -> Result<CertificateCheck> {
    let mut r = omega.symmetrize();
    for i in 0..shape.dim() {
        r[(i, i)] -= cert.dual_value;
    }
    let r = r.sub(&cert.x).sub(&partial_transpose(&cert.y, shape)?);
    let residual = r.max_abs();
    let x_min = hermitian_eigenvalues(&cert.x)?[0];
    let y_min = hermitian_eigenvalues(&cert.y)?[0];
    let passed = residual <= tol::CERT_RESIDUAL_TOL
        && x_min >= tol::CERT_PSD_FLOOR
        && y_min >= tol::CERT_PSD_FLOOR;
    Ok(CertificateCheck {
        residual,
        x_min_eigenvalue: x_min,
        y_min_eigenvalue: y_min,
        passed,
    })
}

/// Best product-state value min tr[Ω(φ⊗ψ)] found by the see-saw; an
/// upper bound on the separable minimum, sandwiching the PPT bound.
pub fn seesaw_separable_min(
    omega: &ComplexMatrix,
    shape: BipartiteShape,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    if restarts == 0 {
        return Err(Error::NoRestarts);
    }
    let out = seesaw_product(omega, shape.d_a, shape.d_b, Extremum::Min, restarts, seed)?;
    Ok(out.value)
}

/// Lower bound on S_p (bits) of any d_B-dimensional state whose
/// smallest eigenvalue is at least c: the minimum of Σλ^p over that
/// polytope sits at the vertex with one large eigenvalue.
pub fn entropy_lower_from_eigbound(c: f64, d_b: usize, p: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0 / d_b as f64) {
        return Err(Error::Numerical(format!("eigenvalue bound c = {c} out of (0, 1/d_B]")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidRenyiOrder(p));
    }
    let k = (d_b - 1) as f64;
    let top = 1.0 - k * c;
    let sum = k * c.powf(p) + top.powf(p);
    Ok(sum.log2() / (1.0 - p))
}

/// The coarser closed-form bound (1/(1−p))·log₂(d_B·c^p), every
/// eigenvalue floored at c; at c = 1/(2d_B) it reads
/// log₂ d_B − p/(1−p). The certified threshold chain uses this form,
/// whose p* admits a closed-form cross-check.
pub fn entropy_lower_coarse_bound(c: f64, d_b: usize, p: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0 / d_b as f64) {
        return Err(Error::Numerical(format!("eigenvalue bound c = {c} out of (0, 1/d_B]")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidRenyiOrder(p));
    }
    Ok((d_b as f64 * c.powf(p)).log2() / (1.0 - p))
}

/// Certified additivity-violation interval from single-copy eigenvalue
/// bounds plus a joint output-rank bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub c1: f64,
    pub c2: f64,
    pub d_b: usize,
    pub joint_rank_bound: usize,
    /// Every p ≤ p_star is a certified violation.
    pub p_star: f64,
}

/// Largest p at which the certified single-copy lower bounds still beat
/// the joint rank upper bound log₂(joint_rank_bound); bisection to
/// 1e-6. Absent when the bounds are too weak to show any violation.
pub fn certified_violation_threshold(
    c1: f64,
    c2: f64,
    d_b: usize,
    joint_rank_bound: usize,
) -> Result<Option<ThresholdReport>> {
    let joint = (joint_rank_bound as f64).log2();
    let margin = |p: f64| -> Result<f64> {
        Ok(entropy_lower_coarse_bound(c1, d_b, p)? + entropy_lower_coarse_bound(c2, d_b, p)? - joint)
    };
    if margin(0.0)? <= 0.0 {
        return Ok(None);
    }
    // The per-channel bounds decrease without bound as p → 1.
    let mut lo = 0.0;
    let mut hi = 1.0 - 1e-9;
    if margin(hi)? > 0.0 {
        return Err(Error::Numerical("violation margin does not change sign".into()));
    }
    while hi - lo > tol::THRESHOLD_BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    Ok(Some(ThresholdReport { c1, c2, d_b, joint_rank_bound, p_star }))
}

/// The measure-concentration sufficient threshold 1/(1 + 2·ln2·d_B²).
/// An asymptotic-regime bound: the dimension requirements behind it are
/// not checked here.
pub fn concentration_threshold(d_b: usize) -> f64 {
    assert!(d_b >= 2);
    1.0 / (1.0 + 2.0 * std::f64::consts::LN_2 * (d_b * d_b) as f64)
}

/// Certificate JSON for third-party re-verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub shape: BipartiteShape,
    pub lambda: f64,
    pub primal_value: f64,
    pub residual: f64,
    pub gap: f64,
    pub converged: bool,
    pub x: Vec<Vec<[f64; 2]>>,
    pub y: Vec<Vec<[f64; 2]>>,
}

fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn pairs_to_matrix(p: &[Vec<[f64; 2]>]) -> ComplexMatrix {
    let rows = p.len();
    let cols = if rows == 0 { 0 } else { p[0].len() };
    ComplexMatrix::from_fn(rows, cols, |r, c| Complex64::new(p[r][c][0], p[r][c][1]))
}

impl CertificateJson {
    pub fn from_certificate(shape: BipartiteShape, cert: &SdpCertificate) -> Self {
        Self {
            shape,
            lambda: cert.dual_value,
            primal_value: cert.primal_value,
            residual: cert.residual,
            gap: cert.gap,
            converged: cert.converged,
            x: matrix_to_pairs(&cert.x),
            y: matrix_to_pairs(&cert.y),
        }
    }

    pub fn to_certificate(&self) -> SdpCertificate {
        SdpCertificate {
            primal_value: self.primal_value,
            dual_value: self.lambda,
            x: pairs_to_matrix(&self.x),
            y: pairs_to_matrix(&self.y),
            residual: self.residual,
            gap: self.gap,
            newton_iterations: 0,
            converged: self.converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing_channel, random_channel};
    use crate::qmath::maximally_entangled;

    fn shape(a: usize, b: usize) -> BipartiteShape {
        BipartiteShape::new(a, b).unwrap()
    }

    #[test]
    fn identity_operator_bound_is_one() {
        let sh = shape(2, 2);
        let cert = ppt_lower_bound(&ComplexMatrix::identity(4), sh).unwrap();
        assert!(cert.converged);
        assert!((cert.primal_value - 1.0).abs() < 1e-6, "primal {}", cert.primal_value);
        assert!((cert.dual_value - 1.0).abs() < 1e-6, "dual {}", cert.dual_value);
        assert!(cert.dual_value <= cert.primal_value + 1e-8);
        assert!(verify_certificate(&ComplexMatrix::identity(4), sh, &cert).unwrap().passed);
    }

    #[test]
    fn maximally_entangled_projector_bound_is_zero() {
        // A product state orthogonal to Φ₂ (e.g. |01⟩) is PPT and gives
        // value 0; Ω ⪰ 0 forbids anything lower.
        let sh = shape(2, 2);
        let omega = maximally_entangled(2).density();
        let cert = ppt_lower_bound(&omega, sh).unwrap();
        assert!(cert.primal_value.abs() < 1e-6, "primal {}", cert.primal_value);
        assert!(cert.dual_value <= cert.primal_value + 1e-8);
        assert!(cert.dual_value > -1e-6);
        assert!(verify_certificate(&omega, sh, &cert).unwrap().passed);
    }

    #[test]
    fn depolarizing_certified_at_inverse_dimension() {
        let sh = shape(3, 3);
        let ch = depolarizing_channel(sh).unwrap();
        let omega = ch.standard_cj();
        let cert = ppt_lower_bound(&omega, sh).unwrap();
        assert!((cert.dual_value - 1.0 / 3.0).abs() < 1e-7, "dual {}", cert.dual_value);
        assert!(verify_certificate(&omega, sh, &cert).unwrap().passed);
    }

    #[test]
    fn sandwich_on_random_choi_operators() {
        let sh = shape(3, 2);
        for seed in 0..20 {
            let ch = random_channel(sh, 1000 + seed).unwrap();
            let omega = ch.standard_cj();
            let cert = ppt_lower_bound(&omega, sh).unwrap();
            let sep = seesaw_separable_min(&omega, sh, 24, seed).unwrap();
            assert!(
                cert.dual_value <= cert.primal_value + 1e-8,
                "weak duality failed: {} vs {}",
                cert.dual_value,
                cert.primal_value
            );
            assert!(
                cert.primal_value <= sep + 1e-8,
                "PPT above separable: {} vs {sep}",
                cert.primal_value
            );
            assert!(cert.gap.abs() <= 1e-7, "gap {}", cert.gap);
            let check = verify_certificate(&omega, sh, &cert).unwrap();
            assert!(check.passed, "checker failed: {check:?}");
        }
    }

    #[test]
    fn seesaw_on_product_operator_factorizes() {
        let x = ComplexMatrix::diag(&[0.2, 0.8, 0.5]);
        let y = ComplexMatrix::diag(&[0.6, 0.3]);
        let sep = seesaw_separable_min(&x.kron(&y), shape(3, 2), 8, 3).unwrap();
        assert!((sep - 0.2 * 0.3).abs() < 1e-10);
    }

    #[test]
    fn eigbound_flat_spectrum_saturates() {
        for p in [0.0, 0.05, 0.3, 0.9] {
            let v = entropy_lower_from_eigbound(1.0 / 3.0, 3, p).unwrap();
            assert!((v - 3f64.log2()).abs() < 1e-12, "p={p} v={v}");
        }
    }

    #[test]
    fn eigbound_dominates_coarse_form() {
        for p in [0.01, 0.05, 0.1, 0.5, 0.9] {
            let tight = entropy_lower_from_eigbound(1.0 / 6.0, 3, p).unwrap();
            let weak = entropy_lower_coarse_bound(1.0 / 6.0, 3, p).unwrap();
            let displayed = 3f64.log2() - p / (1.0 - p);
            assert!((weak - displayed).abs() < 1e-12, "p={p}");
            assert!(tight >= weak - 1e-12, "p={p} tight={tight} weak={weak}");
        }
    }

    #[test]
    fn eigbound_matches_simplex_grid_oracle() {
        // Brute-force minimum of Σλ^p over {λ ≥ c, Σλ = 1} on a 1e-3
        // mesh; the minimizing vertex (c, c, 1−2c) lies on the grid.
        let (c, p, d_b) = (0.1, 0.05, 3usize);
        let mesh = 1000;
        let mut min_sum = f64::INFINITY;
        for i in 0..=mesh {
            let l1 = i as f64 / mesh as f64;
            if l1 < c {
                continue;
            }
            for j in 0..=(mesh - i) {
                let l2 = j as f64 / mesh as f64;
                let l3 = 1.0 - l1 - l2;
                if l2 < c || l3 < c - 1e-12 {
                    continue;
                }
                let s = l1.powf(p) + l2.powf(p) + l3.max(0.0).powf(p);
                if s < min_sum {
                    min_sum = s;
                }
            }
        }
        let oracle = min_sum.log2() / (1.0 - p);
        let bound = entropy_lower_from_eigbound(c, d_b, p).unwrap();
        assert!((oracle - bound).abs() < 1e-9, "oracle {oracle} bound {bound}");
    }

    #[test]
    fn eigbound_below_entropy_of_constrained_spectra() {
        use crate::entropy::{renyi_entropy_from_spectrum, RenyiOrder};
        use crate::qmath::rng::seeded_rng;
        use rand::RngExt;
        let (c, d_b) = (0.08, 4usize);
        for stream in 0..1000 {
            let mut rng = seeded_rng(606, stream);
            // λ = c·1 + (1 − d·c)·Dirichlet.
            let mut extra: Vec<f64> = (0..d_b).map(|_| -(rng.random::<f64>().max(1e-12)).ln()).collect();
            let s: f64 = extra.iter().sum();
            let free = 1.0 - d_b as f64 * c;
            extra.iter_mut().for_each(|x| *x = c + free * *x / s);
            let p = 0.999 * rng.random::<f64>();
            let bound = entropy_lower_from_eigbound(c, d_b, p).unwrap();
            let actual = renyi_entropy_from_spectrum(&extra, RenyiOrder::new(p).unwrap(), 1e-12);
            assert!(bound <= actual + 1e-10, "p={p} bound={bound} actual={actual}");
        }
    }

    #[test]
    fn threshold_closed_form_at_half_inverse_dimension() {
        // c = 1/(2d_B), joint bound d_B²−1: p* solves 2p/(1−p) =
        // −log₂(1−1/d_B²), i.e. p* = t/(2+t) with t = log₂(9/8) at d_B=3.
        let d_b = 3;
        let c = 1.0 / (2.0 * d_b as f64);
        let report = certified_violation_threshold(c, c, d_b, d_b * d_b - 1)
            .unwrap()
            .unwrap();
        let t = (9.0f64 / 8.0).log2();
        let expect = t / (2.0 + t);
        assert!(
            (report.p_star - expect).abs() < 1e-6,
            "p_star {} expect {expect}",
            report.p_star
        );
    }

    #[test]
    fn threshold_monotone_in_bounds() {
        let d_b = 3;
        let base = certified_violation_threshold(0.1, 0.1, d_b, 8).unwrap().unwrap();
        let better_c = certified_violation_threshold(0.15, 0.1, d_b, 8).unwrap().unwrap();
        assert!(better_c.p_star > base.p_star);
        let worse_rank = certified_violation_threshold(0.1, 0.1, d_b, 9).unwrap();
        // Joint rank 9 = d_B² gives no violation at all.
        assert!(worse_rank.is_none());
        let rank7 = certified_violation_threshold(0.1, 0.1, d_b, 7).unwrap().unwrap();
        assert!(rank7.p_star > base.p_star);
    }

    #[test]
    fn concentration_formula_values() {
        let v3 = concentration_threshold(3);
        assert!((v3 - 1.0 / (1.0 + 18.0 * std::f64::consts::LN_2)).abs() < 1e-12);
        let v2 = concentration_threshold(2);
        assert!((v2 - 1.0 / (1.0 + 8.0 * std::f64::consts::LN_2)).abs() < 1e-15);
    }

    #[test]
    fn concentration_is_sufficient_for_exact_threshold() {
        // The formula is a relaxation: it must sit below the bisected
        // p* at c = 1/(2d_B) for every d_B.
        for d_b in 2..=10 {
            let c = 1.0 / (2.0 * d_b as f64);
            let exact = certified_violation_threshold(c, c, d_b, d_b * d_b - 1)
                .unwrap()
                .unwrap()
                .p_star;
            let suff = concentration_threshold(d_b);
            assert!(suff <= exact + 1e-9, "d_b={d_b} suff={suff} exact={exact}");
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let sh = shape(2, 2);
        let omega = ComplexMatrix::identity(4);
        let cert = ppt_lower_bound(&omega, sh).unwrap();
        let doc = CertificateJson::from_certificate(sh, &cert);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        let cert2 = back.to_certificate();
        let check = verify_certificate(&omega, sh, &cert2).unwrap();
        assert!(check.passed);
        assert_eq!(cert2.dual_value, cert.dual_value);
    }
}
