//! Rényi entropies and minimum output entropy search.
//!
//! Entropies are in bits throughout. The p → 0, 1, ∞ limits get their
//! own branches; the generic branch excludes eigenvalues at roundoff
//! level for p < 1, where tiny spurious eigenvalues would otherwise
//! contribute λ^p ≈ 1 terms.

use rayon::prelude::*;

use crate::channels::Channel;
use crate::optim::nelder_mead;
use crate::qmath::rng::{gaussian_vector, seeded_rng};
use crate::qmath::{rank_eps_from_eigenvalues, PureVector, SpectralState};
use crate::tol;
use crate::{Error, Result};

/// Rényi order with distinguished limit cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenyiOrder {
    Zero,
    One,
    Infinity,
    /// Finite p > 0 with |p − 1| > 1e-6.
    Finite(f64),
}

impl RenyiOrder {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 0.0 {
            return Err(Error::InvalidRenyiOrder(p));
        }
        Ok(if p == 0.0 {
            RenyiOrder::Zero
        } else if p.is_infinite() {
            RenyiOrder::Infinity
        } else if (p - 1.0).abs() <= 1e-6 {
            RenyiOrder::One
        } else {
            RenyiOrder::Finite(p)
        })
    }

    pub fn value(&self) -> f64 {
        match self {
            RenyiOrder::Zero => 0.0,
            RenyiOrder::One => 1.0,
            RenyiOrder::Infinity => f64::INFINITY,
            RenyiOrder::Finite(p) => *p,
        }
    }
}

/// S_p of a spectrum, in bits. `rank_tol` is relative to the trace.
pub fn renyi_entropy_from_spectrum(eigs: &[f64], order: RenyiOrder, rank_tol: f64) -> f64 {
    let trace: f64 = eigs.iter().sum();
    let cutoff = rank_tol * trace.abs().max(f64::MIN_POSITIVE);
    match order {
        RenyiOrder::Zero => {
            let rank = eigs.iter().filter(|&&x| x > cutoff).count();
            (rank as f64).log2()
        }
        RenyiOrder::One => {
            let mut h = 0.0;
            for &x in eigs {
                if x > 0.0 {
                    h -= x * x.log2();
                }
            }
            h
        }
        RenyiOrder::Infinity => {
            let max = eigs.iter().cloned().fold(f64::MIN, f64::max);
            -max.log2()
        }
        RenyiOrder::Finite(p) => {
            let mut sum = 0.0;
            for &x in eigs {
                if p < 1.0 {
                    if x > cutoff {
                        sum += x.powf(p);
                    }
                } else if x > 0.0 {
                    sum += x.powf(p);
                }
            }
            sum.log2() / (1.0 - p)
        }
    }
}

/// S_p of a state, in bits.
pub fn renyi_entropy(state: &SpectralState, order: RenyiOrder, rank_tol: f64) -> f64 {
    renyi_entropy_from_spectrum(state.eigenvalues(), order, rank_tol)
}

/// Result of a minimum-output-entropy search.
#[derive(Debug, Clone)]
pub struct MinEntropyResult {
    /// Best S_p found, in bits; an upper bound on the true minimum.
    pub value: f64,
    /// The pure input attaining it.
    pub argmin: PureVector,
    pub restarts: usize,
}

const EVALS_PER_DIM: usize = 400;

fn amplitudes_from_params(x: &[f64]) -> Option<Vec<num_complex::Complex64>> {
    let d = x.len() / 2;
    let v: Vec<num_complex::Complex64> = (0..d)
        .map(|i| num_complex::Complex64::new(x[2 * i], x[2 * i + 1]))
        .collect();
    if crate::qmath::l2_norm(&v) < 1e-8 {
        None
    } else {
        Some(v)
    }
}

fn run_restarts<F>(
    channel: &Channel,
    restarts: usize,
    seed: u64,
    extra_starts: &[PureVector],
    objective: F,
) -> Result<Vec<(usize, PureVector, f64)>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if restarts == 0 {
        return Err(Error::NoRestarts);
    }
    let d_a = channel.shape().d_a;
    let n = 2 * d_a;
    let starts: Vec<(usize, Vec<f64>)> = (0..restarts)
        .map(|r| {
            let g = gaussian_vector(&mut seeded_rng(seed, r as u64), d_a);
            let mut x = Vec::with_capacity(n);
            for z in g {
                x.push(z.re);
                x.push(z.im);
            }
            (r, x)
        })
        .chain(extra_starts.iter().enumerate().map(|(i, v)| {
            let mut x = Vec::with_capacity(n);
            for z in v.amplitudes() {
                x.push(z.re);
                x.push(z.im);
            }
            (restarts + i, x)
        }))
        .collect();

    starts
        .into_par_iter()
        .map(|(r, x0)| {
            let mut f = |x: &[f64]| objective(x);
            let res = nelder_mead(&mut f, &x0, 0.35, tol::SIMPLEX_F_TOL, EVALS_PER_DIM * n);
            let amps = amplitudes_from_params(&res.x)
                .ok_or_else(|| Error::Numerical("optimizer collapsed to zero vector".into()))?;
            let v = PureVector::from_unnormalized(&amps)?;
            Ok((r, v, res.f))
        })
        .collect()
}

/// Multi-restart minimization of S_p(N(φ)) over pure inputs φ. The
/// returned value is reproducible for a fixed (seed, restarts) and is
/// an upper bound on the true minimum output entropy.
///
/// Order zero is delegated to [`min_output_rank`]: the rank objective is
/// discontinuous and needs its own surrogate.
pub fn min_output_entropy(
    channel: &Channel,
    order: RenyiOrder,
    restarts: usize,
    seed: u64,
) -> Result<MinEntropyResult> {
    if let RenyiOrder::Zero = order {
        let rank = min_output_rank(channel, restarts, seed, tol::RANK_TOL, &[])?;
        return Ok(MinEntropyResult {
            value: (rank.rank as f64).log2(),
            argmin: rank.witness,
            restarts,
        });
    }
    let objective = |x: &[f64]| -> f64 {
        match amplitudes_from_params(x) {
            None => 1e6,
            Some(amps) => {
                let v = PureVector::from_unnormalized(&amps).expect("nonzero by construction");
                match channel.apply_pure_eigenvalues(&v) {
                    Ok(eigs) => renyi_entropy_from_spectrum(&eigs, order, tol::RANK_TOL),
                    Err(_) => 1e6,
                }
            }
        }
    };
    let runs = run_restarts(channel, restarts, seed, &[], objective)?;
    let best = runs
        .into_iter()
        .min_by(|a, b| (a.2, a.0).partial_cmp(&(b.2, b.0)).unwrap())
        .expect("at least one restart");
    Ok(MinEntropyResult { value: best.2, argmin: best.1, restarts })
}

/// Result of a minimum-output-rank search.
#[derive(Debug, Clone)]
pub struct MinRankResult {
    pub rank: usize,
    /// Input exhibiting the rank (so the rank is an upper bound on the
    /// true minimum output rank).
    pub witness: PureVector,
    /// Output eigenvalues at the witness, ascending.
    pub output_eigenvalues: Vec<f64>,
}

/// Minimum output rank by multi-restart minimization of the surrogate
/// Σ log(λ_i + ε), which drives eigenvalues to zero one by one; the
/// rank is then counted at each restart optimum with `rank_tol`.
/// `extra_starts` lets callers include distinguished inputs (the joint
/// special input, say) among the candidates.
pub fn min_output_rank(
    channel: &Channel,
    restarts: usize,
    seed: u64,
    rank_tol: f64,
    extra_starts: &[PureVector],
) -> Result<MinRankResult> {
    const EIG_FLOOR: f64 = 1e-14;
    let objective = |x: &[f64]| -> f64 {
        match amplitudes_from_params(x) {
            None => 1e6,
            Some(amps) => {
                let v = PureVector::from_unnormalized(&amps).expect("nonzero by construction");
                match channel.apply_pure_eigenvalues(&v) {
                    Ok(eigs) => eigs.iter().map(|x| (x.max(0.0) + EIG_FLOOR).log2()).sum(),
                    Err(_) => 1e6,
                }
            }
        }
    };
    let runs = run_restarts(channel, restarts, seed, extra_starts, objective)?;
    let mut best: Option<MinRankResult> = None;
    for (_, witness, _) in runs {
        let eigs = channel.apply_pure_eigenvalues(&witness)?;
        let rank = rank_eps_from_eigenvalues(&eigs, rank_tol)?;
        let better = match &best {
            None => true,
            Some(b) => rank < b.rank,
        };
        if better {
            best = Some(MinRankResult { rank, witness, output_eigenvalues: eigs });
        }
    }
    Ok(best.expect("at least one restart"))
}
