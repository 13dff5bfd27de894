//! Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! Jacobi is a good fit here: every matrix in this crate is at most
//! 144×144, the rotations keep the accumulated eigenvector matrix
//! unitary to machine precision, and the code has no special cases for
//! clustered or degenerate spectra.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, C_ZERO};
use crate::tol;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix. The input is symmetrized first; inputs that deviate
/// from Hermitian by more than `tol::HERMITIAN_TOL` (relative to scale)
/// are rejected.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: n, got: m.cols() });
    }
    if !m.is_finite() {
        return Err(Error::Numerical("non-finite matrix entries".into()));
    }
    let scale = m.max_abs().max(1.0);
    let dev = m.hermitian_deviation();
    if dev > tol::HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }

    let mut a = m.symmetrize();
    let mut v = ComplexMatrix::identity(n);
    if n == 1 {
        return Ok((vec![a[(0, 0)].re], v));
    }

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut max_off: f64 = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                max_off = max_off.max(r);
                if r <= 1e-300 {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, r);
            }
        }
        if max_off <= 1e-15 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::EigNonConvergence(MAX_SWEEPS));
    }

    // Diagonal is real by construction; sort ascending.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &v.column(old_col));
    }
    Ok((eigenvalues, vectors))
}

/// One complex Jacobi rotation zeroing A[p][q], accumulating into V.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, r: f64) {
    let n = a.rows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let u = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let su = s * u;
    let su_conj = s * u.conj();

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - su_conj * akq;
        let new_kq = su * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);
    a[(p, q)] = C_ZERO;
    a[(q, p)] = C_ZERO;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - su_conj * vkq;
        v[(k, q)] = su * vkp + c * vkq;
    }
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    // Same sweep without accumulating V; worth it in the optimizer loops.
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: n, got: m.cols() });
    }
    let scale = m.max_abs().max(1.0);
    let mut a = m.symmetrize();
    if n == 1 {
        return Ok(vec![a[(0, 0)].re]);
    }
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut max_off: f64 = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                max_off = max_off.max(r);
                if r <= 1e-300 {
                    continue;
                }
                rotate_values_only(&mut a, p, q, apq, r);
            }
        }
        if max_off <= 1e-15 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::EigNonConvergence(MAX_SWEEPS));
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

fn rotate_values_only(a: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, r: f64) {
    let n = a.rows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let u = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let su = s * u;
    let su_conj = s * u.conj();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - su_conj * akq;
        let new_kq = su * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);
    a[(p, q)] = C_ZERO;
    a[(q, p)] = C_ZERO;
}

/// Count of eigenvalues above `tol`·trace. Errors if any eigenvalue sits
/// below −`tol`·trace, i.e. the matrix was not PSD to within the cutoff.
pub fn rank_eps_from_eigenvalues(eigenvalues: &[f64], tol: f64) -> Result<usize> {
    let trace: f64 = eigenvalues.iter().sum();
    let cutoff = tol * trace.abs().max(f64::MIN_POSITIVE);
    if let Some(&min) = eigenvalues.first() {
        if min < -cutoff {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(eigenvalues.iter().filter(|&&x| x > cutoff).count())
}

/// Numerical rank of a Hermitian PSD matrix.
pub fn rank_eps(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    let eigs = hermitian_eigenvalues(m)?;
    rank_eps_from_eigenvalues(&eigs, tol)
}

/// A density operator with its eigendecomposition cached.
///
/// Invariants enforced at construction: Hermitian, eigenvalues ≥ −1e-10,
/// unit trace within 1e-10.
#[derive(Debug, Clone)]
pub struct SpectralState {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let (eigenvalues, eigenvectors) = hermitian_eig(&matrix)?;
        Self::validated(matrix, eigenvalues, eigenvectors)
    }

    /// Assemble from a known eigendecomposition (used when the
    /// decomposition is available analytically, e.g. tensor products).
    /// Eigenvalues must be ascending; the same state invariants apply.
    #[allow(clippy::needless_range_loop)]
    pub fn from_decomposition(
        eigenvalues: Vec<f64>,
        eigenvectors: ComplexMatrix,
    ) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.rows() != n || eigenvectors.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: eigenvectors.rows() });
        }
        let mut matrix = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            if eigenvalues[k] == 0.0 {
                continue;
            }
            let col = eigenvectors.column(k);
            for r in 0..n {
                for c in 0..n {
                    matrix[(r, c)] += eigenvalues[k] * col[r] * col[c].conj();
                }
            }
        }
        Self::validated(matrix, eigenvalues, eigenvectors)
    }

    fn validated(
        matrix: ComplexMatrix,
        eigenvalues: Vec<f64>,
        eigenvectors: ComplexMatrix,
    ) -> Result<Self> {
        let min = eigenvalues.first().copied().unwrap_or(0.0);
        if min < tol::PSD_FLOOR {
            return Err(Error::NotPsd(min));
        }
        let trace: f64 = eigenvalues.iter().sum();
        if (trace - 1.0).abs() > tol::STRUCT_TOL {
            return Err(Error::TraceNotOne(trace));
        }
        Ok(Self { matrix, eigenvalues, eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns match `eigenvalues()` order.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn rank_eps(&self, tol: f64) -> Result<usize> {
        rank_eps_from_eigenvalues(&self.eigenvalues, tol)
    }

    /// Transpose in the computational basis: same spectrum, conjugated
    /// eigenvectors.
    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors: self.eigenvectors.conj(),
        }
    }

    /// V f(Λ) V† for a real function of the eigenvalues.
    pub fn apply_eigenvalue_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        hermitian_fn(&self.eigenvalues, &self.eigenvectors, f)
    }

    /// Square root of the state.
    pub fn sqrt(&self) -> ComplexMatrix {
        self.apply_eigenvalue_fn(|x| x.max(0.0).sqrt())
    }

    /// Inverse square root with the rank-deficiency guard: eigenvalues
    /// below 1e-8 are a hard error; above that they are floored at 1e-12
    /// (a no-op in practice) before inverting.
    pub fn inv_sqrt(&self) -> Result<ComplexMatrix> {
        if self.min_eigenvalue() < tol::MARGINAL_MIN_EIG {
            return Err(Error::RankDeficientMarginal(self.min_eigenvalue()));
        }
        Ok(self.apply_eigenvalue_fn(|x| 1.0 / x.max(tol::INV_SQRT_FLOOR).sqrt()))
    }
}

/// V f(Λ) V† from a decomposition.
#[allow(clippy::needless_range_loop)]
pub fn hermitian_fn(
    eigenvalues: &[f64],
    eigenvectors: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> ComplexMatrix {
    let n = eigenvalues.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let fv = f(eigenvalues[k]);
        if fv == 0.0 {
            continue;
        }
        let col = eigenvectors.column(k);
        for r in 0..n {
            let fr = fv * col[r];
            for c in 0..n {
                out[(r, c)] += fr * col[c].conj();
            }
        }
    }
    out
}

/// Cholesky factor L with L·L† = m, or None if m is not positive
/// definite (used both as a PD test and for log-determinants).
pub fn cholesky(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.rows();
    if !m.is_square() {
        return None;
    }
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in j + 1..n {
            let mut acc = m[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / dj;
        }
    }
    Some(l)
}

/// ln det of a positive definite Hermitian matrix via Cholesky.
pub fn log_det_pd(m: &ComplexMatrix) -> Option<f64> {
    let l = cholesky(m)?;
    Some(2.0 * (0..m.rows()).map(|i| l[(i, i)].re.ln()).sum::<f64>())
}

/// Inverse and ln det of a positive definite Hermitian matrix, via
/// Cholesky: A⁻¹ = L⁻† L⁻¹. None when the matrix is not PD.
pub fn pd_inverse_logdet(m: &ComplexMatrix) -> Option<(ComplexMatrix, f64)> {
    let n = m.rows();
    let l = cholesky(m)?;
    let logdet = 2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>();
    // Forward-substitute L W = I; W is lower triangular with W = L⁻¹.
    let mut w = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        w[(j, j)] = Complex64::new(1.0 / l[(j, j)].re, 0.0);
        for i in j + 1..n {
            let mut acc = C_ZERO;
            for k in j..i {
                acc -= l[(i, k)] * w[(k, j)];
            }
            w[(i, j)] = acc / l[(i, i)].re;
        }
    }
    let inv = w.dagger().matmul(&w).symmetrize();
    Some((inv, logdet))
}
