//! Wavelet-leader machinery: the leader pyramid, pointwise exponent
//! estimates, the scaling function and its Legendre spectrum.
//!
//! Leaders are computed from the constructed coefficients, not re-estimated
//! from samples; this keeps estimator error separate from synthesis error.
//! The liminf in the definitions is replaced by a least-squares slope over a
//! scale window, with the regression diagnostics reported alongside.

use crate::error::{Error, Result};
use crate::stats::{concavify, fit_line, fit_line_weighted, LineFit};
use crate::synthesis::CoefficientTree;
use crate::thermo::curve::{legendre, CurveKind, SpectrumCurve};
use serde::{Deserialize, Serialize};

/// Threshold above which the concavification correction is flagged.
pub const CONCAVIFY_FLAG: f64 = 0.05;

/// Default regression window for scaling estimates on a depth-`J` pyramid.
///
/// The deepest two levels are left out: a leader there is the max over very
/// few perturbation draws, which biases the last regression points. The low
/// end starts a little below `J/2` to keep the window wide.
pub fn default_scale_window(max_depth: usize) -> (usize, usize) {
    let hi = max_depth.saturating_sub(2).max(4);
    let lo = (max_depth / 2).saturating_sub(3).max(3).min(hi - 2);
    (lo, hi)
}

/// Per-interval suprema of coefficient magnitudes over dyadic subtrees.
#[derive(Debug, Clone)]
pub struct LeaderPyramid {
    max_depth: usize,
    /// `leaders[j][k] = max over the subtree rooted at (j, k)`.
    leaders: Vec<Vec<f64>>,
    perturbed: bool,
}

/// Bottom-up max recursion: `L_{j,k} = max(|d_{j,k}|, L_{j+1,2k}, L_{j+1,2k+1})`.
pub fn leader_pyramid(tree: &CoefficientTree, use_perturbed: bool) -> LeaderPyramid {
    let j_max = tree.max_depth();
    let mut leaders: Vec<Vec<f64>> = Vec::with_capacity(j_max + 1);
    let bottom: Vec<f64> = (0..(1u64 << j_max))
        .map(|k| tree.abs_coefficient(j_max, k, use_perturbed))
        .collect();
    leaders.push(bottom);
    for lvl in (0..j_max).rev() {
        let child = &leaders[leaders.len() - 1];
        let row: Vec<f64> = (0..(1u64 << lvl))
            .map(|k| {
                tree.abs_coefficient(lvl, k, use_perturbed)
                    .max(child[(2 * k) as usize])
                    .max(child[(2 * k + 1) as usize])
            })
            .collect();
        leaders.push(row);
    }
    leaders.reverse();
    LeaderPyramid { max_depth: j_max, leaders, perturbed: use_perturbed }
}

impl LeaderPyramid {
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn is_perturbed(&self) -> bool {
        self.perturbed
    }

    pub fn leader(&self, j: usize, k: u64) -> f64 {
        self.leaders[j][k as usize]
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.leaders[j]
    }

    /// `L_j(x0)`: the max over the up-to-three leaders whose widened interval
    /// `[(k-1) 2^{-j}, (k+2) 2^{-j})` contains `x0`.
    pub fn leader_at_point(&self, j: usize, x0: f64) -> f64 {
        let cells = 1u64 << j;
        let kc = ((x0 * cells as f64).floor() as i64).clamp(0, cells as i64 - 1);
        let mut best = 0.0f64;
        for k in kc - 1..=kc + 1 {
            if k >= 0 && (k as u64) < cells {
                best = best.max(self.leaders[j][k as usize]);
            }
        }
        best
    }
}

/// Regression-based exponent with its diagnostics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub stderr: f64,
    pub r2: f64,
    pub levels_used: usize,
}

impl From<LineFit> for ExponentFit {
    fn from(f: LineFit) -> Self {
        ExponentFit { slope: f.slope, stderr: f.stderr, r2: f.r2, levels_used: f.points }
    }
}

/// Pointwise exponent at `x0`: the least-squares slope of `-log2 L_j(x0)`
/// against `j` over `j_range` (inclusive), skipping vanished leaders.
pub fn pointwise_exponent(
    p: &LeaderPyramid,
    x0: f64,
    j_range: (usize, usize),
) -> Result<ExponentFit> {
    let (lo, hi) = j_range;
    if hi > p.max_depth() || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "level window {lo}..={hi} outside pyramid depth {}",
            p.max_depth()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in lo..=hi {
        let l = p.leader_at_point(j, x0);
        if l > 0.0 {
            xs.push(j as f64);
            ys.push(-l.log2());
        }
    }
    if xs.len() < 2 {
        return Err(Error::UndefinedExponent);
    }
    Ok(fit_line(&xs, &ys).into())
}

/// Scaling-function estimate on a grid of moments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingEstimate {
    pub q_grid: Vec<f64>,
    pub xi_hat: Vec<f64>,
    pub stderr: Vec<f64>,
    pub r2: Vec<f64>,
    pub j_range: (usize, usize),
}

impl ScalingEstimate {
    /// CSV with header `q,xi_hat,stderr,r2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,xi_hat,stderr,r2\n");
        for i in 0..self.q_grid.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.q_grid[i], self.xi_hat[i], self.stderr[i], self.r2[i]
            ));
        }
        out
    }

    pub fn to_curve(&self) -> Result<SpectrumCurve> {
        SpectrumCurve::new(self.q_grid.clone(), self.xi_hat.clone(), CurveKind::Xi)
    }
}

/// Estimate the scaling function: for each `q` the weighted least-squares
/// slope of `-log2 sum_k L_{j,k}^q` against `j`, weighted by the per-level
/// count of nonzero leaders.
pub fn scaling_function(
    p: &LeaderPyramid,
    q_grid: &[f64],
    j_range: (usize, usize),
) -> Result<ScalingEstimate> {
    let (lo, hi) = j_range;
    if lo < 1 || hi > p.max_depth() || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "level window {lo}..={hi} invalid for pyramid depth {}",
            p.max_depth()
        )));
    }
    // Structure-function logs per usable level.
    let mut levels: Vec<(f64, f64)> = Vec::new(); // (j, count)
    let mut logs: Vec<Vec<f64>> = vec![Vec::new(); q_grid.len()];
    for j in lo..=hi {
        let nonzero: Vec<f64> = p.level(j).iter().copied().filter(|&l| l > 0.0).collect();
        if nonzero.is_empty() {
            continue;
        }
        let max = nonzero.iter().cloned().fold(f64::MIN, f64::max);
        let min = nonzero.iter().cloned().fold(f64::MAX, f64::min);
        for (qi, &q) in q_grid.iter().enumerate() {
            // Factor out the dominant term to keep the sum well-scaled.
            let anchor = if q >= 0.0 { max } else { min };
            let sum: f64 = nonzero.iter().map(|&l| (q * (l.ln() - anchor.ln())).exp()).sum();
            logs[qi].push(-(q * anchor.log2() + sum.log2()));
        }
        levels.push((j as f64, nonzero.len() as f64));
    }
    if levels.len() < 3 {
        return Err(Error::TooFewScales { need: 3, got: levels.len() });
    }
    let xs: Vec<f64> = levels.iter().map(|(j, _)| *j).collect();
    let ws: Vec<f64> = levels.iter().map(|(_, c)| *c).collect();
    let mut xi_hat = Vec::with_capacity(q_grid.len());
    let mut stderr = Vec::with_capacity(q_grid.len());
    let mut r2 = Vec::with_capacity(q_grid.len());
    for qi in 0..q_grid.len() {
        let fit = fit_line_weighted(&xs, &logs[qi], &ws);
        xi_hat.push(fit.slope);
        stderr.push(fit.stderr);
        r2.push(fit.r2);
    }
    Ok(ScalingEstimate { q_grid: q_grid.to_vec(), xi_hat, stderr, r2, j_range })
}

/// Legendre spectrum of a scaling estimate: concavify (flagging a large
/// correction), then transform. Negative values signal empty level sets.
pub fn legendre_spectrum(est: &ScalingEstimate, h_grid: &[f64]) -> Result<SpectrumCurve> {
    let (values, correction) = concavify(&est.q_grid, &est.xi_hat);
    if correction > CONCAVIFY_FLAG {
        log::warn!(
            "concavification moved xi_hat by {correction:.3}: the raw estimate is far from concave"
        );
    }
    let curve = SpectrumCurve::new(est.q_grid.clone(), values, CurveKind::Xi)?;
    legendre(&curve, h_grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::full_shift;
    use crate::synthesis::coeffs::{build_coefficients, SignRule};
    use crate::thermo::{GibbsModel, Potential};

    /// A pyramid with hand-set magnitudes, bypassing the Gibbs layer.
    fn pyramid_from_levels(levels: Vec<Vec<f64>>) -> LeaderPyramid {
        let max_depth = levels.len() - 1;
        let mut leaders = levels;
        for j in (0..max_depth).rev() {
            for k in 0..(1usize << j) {
                let own = leaders[j][k];
                let c = leaders[j + 1][2 * k].max(leaders[j + 1][2 * k + 1]);
                leaders[j][k] = own.max(c);
            }
        }
        LeaderPyramid { max_depth, leaders, perturbed: false }
    }

    #[test]
    fn hand_computed_subtree_maxima() {
        let p = pyramid_from_levels(vec![
            vec![1.0],
            vec![0.5, 0.25],
            vec![0.3, 0.1, 0.2, 0.05],
        ]);
        assert_eq!(p.leader(1, 0), 0.5);
        assert_eq!(p.leader(1, 1), 0.25);
        assert_eq!(p.leader(2, 0), 0.3);
        assert_eq!(p.leader(0, 0), 1.0);
    }

    #[test]
    fn recursion_invariant_on_a_gibbs_tree() {
        let sft = full_shift(2).unwrap();
        let gm = GibbsModel::new(&sft, &Potential::bernoulli(0.25).unwrap(), 1.0).unwrap();
        let tree = build_coefficients(&gm, 0.6, 2.0, 9, SignRule::RademacherFromSeed, 4).unwrap();
        let p = leader_pyramid(&tree, false);
        for j in 0..9usize {
            for k in 0..(1u64 << j) {
                let expect = tree
                    .abs_coefficient(j, k, false)
                    .max(p.leader(j + 1, 2 * k))
                    .max(p.leader(j + 1, 2 * k + 1));
                assert_eq!(p.leader(j, k), expect);
            }
        }
    }

    #[test]
    fn geometric_decay_gives_exact_exponent() {
        let h = 0.7;
        let levels: Vec<Vec<f64>> = (0..=10usize)
            .map(|j| vec![(-(j as f64) * h).exp2(); 1 << j])
            .collect();
        let p = pyramid_from_levels(levels);
        for x0 in [0.0, 0.31, 0.77, 1.0] {
            let fit = pointwise_exponent(&p, x0, (2, 10)).unwrap();
            assert!((fit.slope - h).abs() < 1e-12, "x0 = {x0}");
        }
        let est = scaling_function(&p, &[-1.0, 0.0, 1.0, 2.0], (3, 10)).unwrap();
        for (q, xi) in est.q_grid.iter().zip(&est.xi_hat) {
            assert!((xi - (q * h - 1.0)).abs() < 1e-10, "q = {q}");
        }
    }

    #[test]
    fn single_spike_chain() {
        let mut levels: Vec<Vec<f64>> = (0..=8usize).map(|j| vec![0.0; 1 << j]).collect();
        levels[8][37] = 1.0;
        let p = pyramid_from_levels(levels);
        let x0 = 37.5 / 256.0;
        let fit = pointwise_exponent(&p, x0, (1, 8)).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        // Away from the spike every leader is zero.
        assert!(matches!(
            pointwise_exponent(&p, 0.9, (1, 5)),
            Err(Error::UndefinedExponent)
        ));
    }

    #[test]
    fn too_few_levels_rejected() {
        let levels: Vec<Vec<f64>> = (0..=3usize).map(|j| vec![0.5; 1 << j]).collect();
        let p = pyramid_from_levels(levels);
        assert!(matches!(
            scaling_function(&p, &[1.0], (2, 3)),
            Err(Error::TooFewScales { .. })
        ));
    }

    #[test]
    fn legendre_spectrum_of_monofractal_estimate() {
        let est = ScalingEstimate {
            q_grid: (-8..=8).map(|i| i as f64 * 0.5).collect(),
            xi_hat: (-8..=8).map(|i| 0.5 * (i as f64 * 0.5) - 1.0).collect(),
            stderr: vec![0.0; 17],
            r2: vec![1.0; 17],
            j_range: (3, 10),
        };
        let star = legendre_spectrum(&est, &[0.3, 0.5, 0.7]).unwrap();
        assert_eq!(star.values[0], f64::NEG_INFINITY);
        assert!((star.values[1] - 1.0).abs() < 1e-12);
        assert_eq!(star.values[2], f64::NEG_INFINITY);
    }
}
