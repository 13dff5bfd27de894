//! Internal optimizers: the alternating product-state see-saw and a
//! Nelder–Mead simplex search. Both are deterministic given (seed,
//! restarts); restarts run in parallel and reduce by (value, index).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::qmath::matrix::C_ZERO;
use crate::qmath::rng::{gaussian_vector, seeded_rng};
use crate::qmath::{hermitian_eig, ComplexMatrix, PureVector};
use crate::tol;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

#[derive(Debug, Clone)]
pub struct SeesawOutcome {
    pub value: f64,
    pub phi: PureVector,
    pub psi: PureVector,
    pub converged: bool,
}

/// Contract the B factor of a Hermitian operator on A⊗B with a fixed
/// unit vector ψ, leaving the d_A×d_A operator ⟨ψ|W|ψ⟩_B.
fn contract_b(w: &ComplexMatrix, d_a: usize, d_b: usize, psi: &[Complex64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d_a, d_a);
    for a in 0..d_a {
        for a2 in 0..d_a {
            let mut acc = C_ZERO;
            for b in 0..d_b {
                let pb = psi[b].conj();
                if pb == C_ZERO {
                    continue;
                }
                for b2 in 0..d_b {
                    acc += pb * psi[b2] * w[(a * d_b + b, a2 * d_b + b2)];
                }
            }
            m[(a, a2)] = acc;
        }
    }
    m.symmetrize()
}

fn contract_a(w: &ComplexMatrix, d_a: usize, d_b: usize, phi: &[Complex64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d_b, d_b);
    for b in 0..d_b {
        for b2 in 0..d_b {
            let mut acc = C_ZERO;
            for a in 0..d_a {
                let pa = phi[a].conj();
                if pa == C_ZERO {
                    continue;
                }
                for a2 in 0..d_a {
                    acc += pa * phi[a2] * w[(a * d_b + b, a2 * d_b + b2)];
                }
            }
            m[(b, b2)] = acc;
        }
    }
    m.symmetrize()
}

fn extremal_eigvec(m: &ComplexMatrix, direction: Extremum) -> Result<(f64, Vec<Complex64>)> {
    let (eigs, vecs) = hermitian_eig(m)?;
    let idx = match direction {
        Extremum::Min => 0,
        Extremum::Max => eigs.len() - 1,
    };
    Ok((eigs[idx], vecs.column(idx)))
}

/// One see-saw run from a given product start. Each half-step solves the
/// exact eigenproblem for one factor, so the objective is monotone.
#[allow(clippy::too_many_arguments)]
fn seesaw_single(
    w: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    direction: Extremum,
    mut phi: Vec<Complex64>,
    mut psi: Vec<Complex64>,
    gain_tol: f64,
    max_iters: usize,
) -> Result<SeesawOutcome> {
    let mut value = match direction {
        Extremum::Max => f64::NEG_INFINITY,
        Extremum::Min => f64::INFINITY,
    };
    let mut converged = false;
    for it in 0..max_iters {
        let (_, new_phi) = extremal_eigvec(&contract_b(w, d_a, d_b, &psi), direction)?;
        phi = new_phi;
        let (v2, new_psi) = extremal_eigvec(&contract_a(w, d_a, d_b, &phi), direction)?;
        psi = new_psi;
        let gain = match direction {
            Extremum::Max => v2 - value,
            Extremum::Min => value - v2,
        };
        value = v2;
        if it > 0 && gain.abs() < gain_tol {
            converged = true;
            break;
        }
    }
    Ok(SeesawOutcome {
        value,
        phi: PureVector::new(phi)?,
        psi: PureVector::new(psi)?,
        converged,
    })
}

/// Multi-restart see-saw extremization of ⟨φ⊗ψ|W|φ⊗ψ⟩ over unit
/// vectors φ ∈ C^{d_A}, ψ ∈ C^{d_B}. Ties between restarts break on the
/// restart index so the result is scheduling-independent.
pub fn seesaw_product(
    w: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    direction: Extremum,
    restarts: usize,
    seed: u64,
) -> Result<SeesawOutcome> {
    assert!(restarts >= 1);
    let runs: Vec<(usize, Result<SeesawOutcome>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(seed, r as u64);
            let phi = normalize(gaussian_vector(&mut rng, d_a));
            let psi = normalize(gaussian_vector(&mut rng, d_b));
            let out = seesaw_single(
                w,
                d_a,
                d_b,
                direction,
                phi,
                psi,
                tol::SEESAW_GAIN_TOL,
                tol::SEESAW_MAX_ITERS,
            );
            (r, out)
        })
        .collect();

    let mut best: Option<(usize, SeesawOutcome)> = None;
    for (r, out) in runs {
        let out = out?;
        let better = match &best {
            None => true,
            Some((br, b)) => match direction {
                Extremum::Max => out.value > b.value || (out.value == b.value && r < *br),
                Extremum::Min => out.value < b.value || (out.value == b.value && r < *br),
            },
        };
        if better {
            best = Some((r, out));
        }
    }
    Ok(best.expect("at least one restart").1)
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = crate::qmath::l2_norm(&v);
    for z in &mut v {
        *z /= n;
    }
    v
}

/// Result of a Nelder–Mead run.
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
}

/// Classic Nelder–Mead on R^n, minimizing. Stops when the simplex
/// f-spread falls below `f_tol` or the evaluation budget is exhausted.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    f_tol: f64,
    max_evals: usize,
) -> SimplexResult {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() < f_tol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in simplex.iter().take(n) {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| 2.0 * c - w)
            .collect();
        let fr = eval(&reflect, &mut evals);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| 3.0 * c - 2.0 * w)
                .collect();
            let fe = eval(&expand, &mut evals);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let towards = if fr < worst.1 { &reflect } else { &worst.0 };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(towards)
                .map(|(c, t)| 0.5 * (c + t))
                .collect();
            let fc = eval(&contract, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&entry.0)
                        .map(|(b, x)| 0.5 * (b + x))
                        .collect();
                    let fx = eval(&x, &mut evals);
                    *entry = (x, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    SimplexResult { x: simplex[0].0.clone(), f: simplex[0].1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_quadratic() {
        let mut f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(&mut f, &[0.0, 0.0], 0.5, 1e-13, 4000);
        assert!((r.x[0] - 1.5).abs() < 1e-5, "{:?}", r.x);
        assert!((r.x[1] + 0.5).abs() < 1e-5);
        assert!(r.f < 1e-9);
    }

    #[test]
    fn nelder_mead_rosenbrock_2d() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(&mut f, &[-1.2, 1.0], 0.5, 1e-14, 20000);
        assert!(r.f < 1e-8, "f = {}", r.f);
    }

    #[test]
    fn seesaw_finds_product_extremes_of_product_operator() {
        // W = X ⊗ Y with X, Y diagonal: extremes factorize exactly.
        let x = ComplexMatrix::diag(&[0.1, 0.7, 0.4]);
        let y = ComplexMatrix::diag(&[0.9, 0.2]);
        let w = x.kron(&y);
        let max = seesaw_product(&w, 3, 2, Extremum::Max, 8, 4).unwrap();
        assert!((max.value - 0.7 * 0.9).abs() < 1e-10);
        let min = seesaw_product(&w, 3, 2, Extremum::Min, 8, 4).unwrap();
        assert!((min.value - 0.1 * 0.2).abs() < 1e-10);
    }

    #[test]
    fn seesaw_identity_is_flat() {
        let w = ComplexMatrix::identity(6);
        let out = seesaw_product(&w, 2, 3, Extremum::Min, 3, 9).unwrap();
        assert!((out.value - 1.0).abs() < 1e-12);
    }
}
