//! Additivity violation scans.
//!
//! For a channel pair the scan compares, over a grid of p ∈ [0, 1):
//!
//! - red: S_p (or the von Neumann entropy, under the `S1` variant) of
//!   the joint output on the special input, which upper-bounds the
//!   minimum output entropy of the tensor channel;
//! - blue: S_p^min(N₁) + S_p^min(N₂) over product inputs.
//!
//! A grid point is violated when red < blue. The crossing point (where
//! the violation stops) is refined by bisection, re-evaluating both
//! curves at midpoints.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{joint_output_on_pure, special_input, Channel};
use crate::construction::{channel_pair, paper_weights_r, paper_weights_s, SubspacePair};
use crate::entropy::{min_output_entropy, renyi_entropy_from_spectrum, RenyiOrder};
use crate::optim::nelder_mead;
use crate::qmath::hermitian_eigenvalues;
use crate::tol;
use crate::{Error, Result};

/// Which red curve to draw: S_p of the joint output (a rigorous upper
/// bound at each p) or its von Neumann entropy (constant in p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RedVariant {
    Sp,
    S1,
}

impl std::str::FromStr for RedVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(RedVariant::Sp),
            "s1" => Ok(RedVariant::S1),
            other => Err(Error::Numerical(format!("unknown red variant `{other}`"))),
        }
    }
}

/// Scan parameters; the defaults bracket both reference crossings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanOptions {
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_points: usize,
    pub restarts: usize,
    pub seed: u64,
    pub red_variant: RedVariant,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            grid_start: 1e-3,
            grid_stop: 0.3,
            grid_points: 200,
            restarts: 100,
            seed: 1,
            red_variant: RedVariant::Sp,
        }
    }
}

impl ScanOptions {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.grid_points == 0
            || self.grid_start <= 0.0
            || self.grid_stop >= 1.0
            || self.grid_stop <= self.grid_start
        {
            return Err(Error::InvalidGrid);
        }
        let n = self.grid_points;
        Ok((0..n)
            .map(|i| {
                self.grid_start
                    + (self.grid_stop - self.grid_start) * i as f64 / (n - 1).max(1) as f64
            })
            .collect())
    }
}

/// Red and blue curves over the grid plus the refined crossing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationScan {
    pub p_grid: Vec<f64>,
    /// S_p of the joint output on the special input, bits.
    pub red: Vec<f64>,
    /// S_p^min(N₁) + S_p^min(N₂), bits.
    pub blue: Vec<f64>,
    pub violated: Vec<bool>,
    pub crossing: Option<f64>,
    pub options: ScanOptions,
}

/// Evaluates both curves at arbitrary p for one channel pair. The
/// joint output state is fixed, so red needs only its spectrum; blue
/// re-runs the product minimization with seeds derived from p.
pub struct CurveEvaluator<'a> {
    n1: &'a Channel,
    n2: &'a Channel,
    joint_output_eigs: Vec<f64>,
    restarts: usize,
    seed: u64,
    red_variant: RedVariant,
}

impl<'a> CurveEvaluator<'a> {
    pub fn new(
        n1: &'a Channel,
        n2: &'a Channel,
        restarts: usize,
        seed: u64,
        red_variant: RedVariant,
    ) -> Result<Self> {
        let input = special_input(n1, n2)?;
        let out = joint_output_on_pure(n1, n2, &input)?;
        let joint_output_eigs = hermitian_eigenvalues(&out)?;
        Ok(Self { n1, n2, joint_output_eigs, restarts, seed, red_variant })
    }

    pub fn joint_output_eigenvalues(&self) -> &[f64] {
        &self.joint_output_eigs
    }

    pub fn red(&self, p: f64) -> Result<f64> {
        let order = match self.red_variant {
            RedVariant::S1 => RenyiOrder::One,
            RedVariant::Sp => RenyiOrder::new(p)?,
        };
        Ok(renyi_entropy_from_spectrum(
            &self.joint_output_eigs,
            order,
            tol::RANK_TOL,
        ))
    }

    pub fn blue(&self, p: f64) -> Result<f64> {
        let order = RenyiOrder::new(p)?;
        // Seeds depend on p alone, so grid evaluation and bisection
        // refinement see the same curve.
        let s1 = self.seed ^ p.to_bits();
        let s2 = self.seed ^ p.to_bits().rotate_left(17);
        let b1 = min_output_entropy(self.n1, order, self.restarts, s1)?;
        let b2 = min_output_entropy(self.n2, order, self.restarts, s2)?;
        Ok(b1.value + b2.value)
    }

    /// red − blue; negative means the additivity violation is visible.
    pub fn gap(&self, p: f64) -> Result<f64> {
        Ok(self.red(p)? - self.blue(p)?)
    }
}

/// Bisection refinement of a sign change of `gap` on [lo, hi] down to
/// width `width_tol`. Requires gap(lo) < 0 ≤ gap(hi).
pub fn refine_crossing(
    mut lo: f64,
    mut hi: f64,
    width_tol: f64,
    mut gap: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    while hi - lo > width_tol {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan the violation curves for a channel pair.
pub fn violation_scan(n1: &Channel, n2: &Channel, options: &ScanOptions) -> Result<ViolationScan> {
    if options.restarts == 0 {
        return Err(Error::NoRestarts);
    }
    let grid = options.grid()?;
    let eval = CurveEvaluator::new(n1, n2, options.restarts, options.seed, options.red_variant)?;
    let curves: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&p| -> Result<(f64, f64)> { Ok((eval.red(p)?, eval.blue(p)?)) })
        .collect::<Result<_>>()?;
    let red: Vec<f64> = curves.iter().map(|c| c.0).collect();
    let blue: Vec<f64> = curves.iter().map(|c| c.1).collect();
    let violated: Vec<bool> = red
        .iter()
        .zip(&blue)
        .map(|(r, b)| *r < b - tol::VIOLATION_MARGIN)
        .collect();

    let crossing = locate_crossing(&grid, &red, &blue, |p| eval.gap(p))?;
    Ok(ViolationScan {
        p_grid: grid,
        red,
        blue,
        violated,
        crossing,
        options: options.clone(),
    })
}

/// Find the first grid bracket where red − blue changes sign from
/// negative to nonnegative and refine it; absent when no sign change
/// exists on the grid.
pub fn locate_crossing(
    grid: &[f64],
    red: &[f64],
    blue: &[f64],
    gap: impl FnMut(f64) -> Result<f64>,
) -> Result<Option<f64>> {
    let g: Vec<f64> = red.iter().zip(blue).map(|(r, b)| r - b).collect();
    let bracket = g.windows(2).position(|w| w[0] < 0.0 && w[1] >= 0.0);
    match bracket {
        None => Ok(None),
        Some(i) => Ok(Some(refine_crossing(
            grid[i],
            grid[i + 1],
            tol::CROSSING_REFINE_TOL,
            gap,
        )?)),
    }
}

/// CSV rows `p,red_bits,blue_bits,violated` with 12 significant digits.
pub fn scan_to_csv(scan: &ViolationScan) -> String {
    let mut out = String::from("p,red_bits,blue_bits,violated\n");
    for i in 0..scan.p_grid.len() {
        out.push_str(&format!(
            "{:.11e},{:.11e},{:.11e},{}\n",
            scan.p_grid[i],
            scan.red[i],
            scan.blue[i],
            u8::from(scan.violated[i]),
        ));
    }
    out
}

/// Weight-vector initialization for the crossing maximization.
#[derive(Debug, Clone)]
pub enum WeightInit {
    Uniform,
    Paper,
    Custom(Vec<f64>, Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct WeightSearchOptions {
    pub seed: u64,
    /// Total crossing evaluations allowed.
    pub budget: usize,
    /// Restarts used inside the search objective.
    pub inner_restarts: usize,
    /// Restarts used for the final re-evaluation of the best weights.
    pub final_restarts: usize,
    pub red_variant: RedVariant,
    pub init: WeightInit,
}

impl Default for WeightSearchOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            budget: 2000,
            inner_restarts: 12,
            final_restarts: 64,
            red_variant: RedVariant::Sp,
            init: WeightInit::Uniform,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSearchResult {
    pub weights_r: Vec<f64>,
    pub weights_s: Vec<f64>,
    /// Crossing of the best weights, re-evaluated at `final_restarts`.
    pub achieved_crossing: f64,
    /// Best crossing value seen during the search itself.
    pub best_search_value: f64,
    pub evaluations: usize,
}

const WEIGHT_SEARCH_LO: f64 = 1e-3;
const WEIGHT_SEARCH_HI: f64 = 0.3;

fn softmax_pair(theta: &[f64], d_e: usize) -> (Vec<f64>, Vec<f64>) {
    let softmax = |t: &[f64]| -> Vec<f64> {
        let mut w: Vec<f64> = std::iter::once(0.0)
            .chain(t.iter().copied())
            .map(f64::exp)
            .collect();
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= sum);
        w
    };
    let k = d_e - 1;
    (softmax(&theta[..k]), softmax(&theta[k..]))
}

fn theta_from_weights(wr: &[f64], ws: &[f64]) -> Vec<f64> {
    let logits = |w: &[f64]| -> Vec<f64> {
        let base = w[0].max(1e-12).ln();
        w[1..].iter().map(|x| x.max(1e-12).ln() - base).collect()
    };
    let mut theta = logits(wr);
    theta.extend(logits(ws));
    theta
}

/// Crossing point of the pair built from (w_R, w_S); 0 when no
/// violation is visible at the bottom of the p range, capped at the
/// top of the range.
fn crossing_for_weights(
    pair: &SubspacePair,
    wr: &[f64],
    ws: &[f64],
    restarts: usize,
    seed: u64,
    red_variant: RedVariant,
) -> Result<f64> {
    let (n1, n2) = channel_pair(pair, wr, ws)?;
    let eval = CurveEvaluator::new(&n1, &n2, restarts, seed, red_variant)?;
    let g_lo = eval.gap(WEIGHT_SEARCH_LO)?;
    if g_lo >= 0.0 {
        return Ok(0.0);
    }
    let g_hi = eval.gap(WEIGHT_SEARCH_HI)?;
    if g_hi < 0.0 {
        return Ok(WEIGHT_SEARCH_HI);
    }
    refine_crossing(WEIGHT_SEARCH_LO, WEIGHT_SEARCH_HI, tol::CROSSING_REFINE_TOL, |p| {
        eval.gap(p)
    })
}

fn theta_digest(theta: &[f64], seed: u64) -> u64 {
    let mut h = seed ^ 0x517c_c1b7_2722_0a95;
    for t in theta {
        h = h.rotate_left(13) ^ t.to_bits();
        h = h.wrapping_mul(0x2545_f491_4f6c_dd1d);
    }
    h
}

/// Derivative-free maximization of the crossing point over the two
/// weight simplices (softmax parameterization, Nelder–Mead, random
/// restarts until the budget runs out). Including the start point in
/// the candidate set keeps the result at least as good as its baseline.
pub fn optimize_weights(
    pair: &SubspacePair,
    options: &WeightSearchOptions,
) -> Result<WeightSearchResult> {
    if options.budget == 0 {
        return Err(Error::NoRestarts);
    }
    let d_e = pair.r.dim();
    // Uniform weights are softmax(0), so the Uniform arm is the origin.
    let theta0 = match &options.init {
        WeightInit::Uniform => vec![0.0; 2 * (d_e - 1)],
        WeightInit::Paper => theta_from_weights(&paper_weights_r(), &paper_weights_s()),
        WeightInit::Custom(wr, ws) => theta_from_weights(wr, ws),
    };

    let evaluations = std::cell::Cell::new(0usize);
    let failure = std::cell::RefCell::new(None::<Error>);
    let objective = |theta: &[f64]| -> f64 {
        if failure.borrow().is_some() || evaluations.get() >= options.budget {
            return 1e3;
        }
        evaluations.set(evaluations.get() + 1);
        let (wr, ws) = softmax_pair(theta, d_e);
        match crossing_for_weights(
            pair,
            &wr,
            &ws,
            options.inner_restarts,
            theta_digest(theta, options.seed),
            options.red_variant,
        ) {
            Ok(c) => -c,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                1e3
            }
        }
    };

    let mut best_theta = theta0.clone();
    let mut best_value = -objective(&theta0);
    let mut round = 0u64;
    while evaluations.get() < options.budget {
        let start = if round == 0 {
            theta0.clone()
        } else {
            // Seeded perturbation of the best point found so far.
            let mut rng = crate::qmath::rng::seeded_rng(options.seed, 0xbeef ^ round);
            best_theta
                .iter()
                .map(|t| {
                    t + 0.6 * crate::qmath::rng::complex_gaussian(&mut rng).re
                })
                .collect()
        };
        let remaining = options.budget - evaluations.get();
        if remaining < 2 * theta0.len() {
            break;
        }
        let mut f = |x: &[f64]| objective(x);
        let res = nelder_mead(&mut f, &start, 0.35, 1e-6, remaining);
        if -res.f > best_value {
            best_value = -res.f;
            best_theta = res.x;
        }
        round += 1;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }

    let (wr, ws) = softmax_pair(&best_theta, d_e);
    let achieved = crossing_for_weights(
        pair,
        &wr,
        &ws,
        options.final_restarts,
        options.seed ^ 0xf17a_u64,
        options.red_variant,
    )?;
    Ok(WeightSearchResult {
        weights_r: wr,
        weights_s: ws,
        achieved_crossing: achieved,
        best_search_value: best_value,
        evaluations: evaluations.get(),
    })
}

/// Sidecar metadata written next to scan CSVs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSidecar {
    pub tool_version: String,
    pub cj_variant: String,
    pub options: ScanOptions,
    pub crossing: Option<f64>,
    pub violated_points: usize,
}

impl ScanSidecar {
    pub fn new(scan: &ViolationScan, cj_variant: &str) -> Self {
        Self {
            tool_version: crate::TOOL_VERSION.to_string(),
            cj_variant: cj_variant.to_string(),
            options: scan.options.clone(),
            crossing: scan.crossing,
            violated_points: scan.violated.iter().filter(|v| **v).count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing_channel;
    use crate::qmath::BipartiteShape;

    #[test]
    fn refine_crossing_synthetic_linear() {
        // red = p, blue = 0.05 constant: crossing at 0.05.
        let c = refine_crossing(1e-3, 0.3, 1e-4, |p| Ok(p - 0.05)).unwrap();
        assert!((c - 0.05).abs() <= 1e-4);
    }

    #[test]
    fn locate_crossing_absent_without_sign_change() {
        let grid = vec![0.1, 0.2, 0.3];
        let red = vec![1.0, 1.0, 1.0];
        let blue = vec![0.5, 0.4, 0.3];
        let c = locate_crossing(&grid, &red, &blue, |_| Ok(1.0)).unwrap();
        assert!(c.is_none());
    }

    #[test]
    fn depolarizing_pair_shows_no_violation() {
        let sh = BipartiteShape::new(2, 2).unwrap();
        let dep = depolarizing_channel(sh).unwrap();
        let opts = ScanOptions {
            grid_points: 5,
            restarts: 2,
            ..ScanOptions::default()
        };
        let scan = violation_scan(&dep, &dep, &opts).unwrap();
        for (r, b) in scan.red.iter().zip(&scan.blue) {
            assert!((r - 2.0).abs() < 1e-9);
            assert!((b - 2.0).abs() < 1e-7);
        }
        assert!(scan.crossing.is_none());
        assert!(!scan.violated.iter().any(|v| *v));
    }

    #[test]
    fn csv_shape() {
        let scan = ViolationScan {
            p_grid: vec![0.1, 0.2],
            red: vec![1.0, 2.0],
            blue: vec![1.5, 1.5],
            violated: vec![true, false],
            crossing: Some(0.15),
            options: ScanOptions::default(),
        };
        let csv = scan_to_csv(&scan);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "p,red_bits,blue_bits,violated");
        assert!(lines[1].ends_with(",1"));
        assert!(lines[2].ends_with(",0"));
    }

    #[test]
    fn softmax_round_trip() {
        let wr = paper_weights_r();
        let ws = paper_weights_s();
        let theta = theta_from_weights(&wr, &ws);
        let (wr2, ws2) = softmax_pair(&theta, 6);
        for (a, b) in wr.iter().zip(&wr2) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in ws.iter().zip(&ws2) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
