//! The dyadic tree of wavelet coefficients built from a Gibbs measure.
//!
//! For an admissible word `w` at level `j`, the coefficient magnitude is
//! `|d_w| = 2^{-j (s0 - 1/p0)} mu([w])^{1/p0}`; inadmissible words carry 0.
//! Signs and the optional multiplicative perturbation `pi_w` are pure
//! functions of `(seed, level, word)`, so construction order is irrelevant.

use crate::error::{Error, Result};
use crate::rng::{gaussian, node_hash, unit_f64, STREAM_PERTURB, STREAM_SIGN};
use crate::thermo::curve::validate_s0_p0;
use crate::thermo::GibbsModel;
use serde::{Deserialize, Serialize};

/// Sign rule for the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SignRule {
    AllPlus,
    RademacherFromSeed,
}

/// Perturbation law for `pi_w`. Both laws have bounded densities and finite
/// moments of every order, and keep `pi_w` strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "law")]
pub enum PerturbLaw {
    /// Uniform on `[1/2, 3/2]` (the default).
    UniformHalfToThreeHalves,
    /// `exp(sigma Z)` clipped into `[1/clip, clip]`.
    LogNormalClipped { sigma: f64, clip: f64 },
}

impl PerturbLaw {
    fn sample(&self, seed: u64, level: u32, index: u64) -> f64 {
        match self {
            PerturbLaw::UniformHalfToThreeHalves => {
                0.5 + unit_f64(node_hash(seed, STREAM_PERTURB, level, index, 0))
            }
            PerturbLaw::LogNormalClipped { sigma, clip } => {
                let z = gaussian(
                    node_hash(seed, STREAM_PERTURB, level, index, 0),
                    node_hash(seed, STREAM_PERTURB, level, index, 1),
                );
                (sigma * z).exp().clamp(1.0 / clip, *clip)
            }
        }
    }
}

/// Wavelet coefficients `d_w` (and optionally `pi_w`) for all `|w| <= J`.
#[derive(Debug, Clone)]
pub struct CoefficientTree {
    max_depth: usize,
    s0: f64,
    p0: f64,
    seed: u64,
    /// `magnitudes[j][k] = |d_{j,k}|`.
    magnitudes: Vec<Vec<f64>>,
    /// Signs as +-1.
    signs: Vec<Vec<i8>>,
    perturbations: Option<Vec<Vec<f64>>>,
    perturb_law: Option<PerturbLaw>,
}

/// Build the coefficient tree of the Gibbs measure `gm`.
pub fn build_coefficients(
    gm: &GibbsModel,
    s0: f64,
    p0: f64,
    max_depth: usize,
    sign_rule: SignRule,
    seed: u64,
) -> Result<CoefficientTree> {
    validate_s0_p0(s0, p0)?;
    if max_depth == 0 || max_depth > 26 {
        return Err(Error::InvalidParameter(format!("tree depth {max_depth} out of 1..=26")));
    }
    // Cylinder masses level by level; marginals handle words shorter than the
    // lifted state depth.
    let mut masses: Vec<Vec<f64>> = Vec::with_capacity(max_depth + 1);
    for j in 0..=max_depth {
        let mut level = vec![0.0; 1 << j];
        gm.sft().for_each_admissible(j, |w| {
            level[w.value() as usize] = gm.marginal(w);
        });
        masses.push(level);
    }

    let mut magnitudes = Vec::with_capacity(max_depth + 1);
    let mut signs = Vec::with_capacity(max_depth + 1);
    let exponent = s0 - 1.0 / p0;
    for (j, level) in masses.iter().enumerate() {
        let scale = (-(j as f64) * exponent).exp2();
        let mags: Vec<f64> = level
            .iter()
            .map(|&mu| if mu > 0.0 { scale * mu.powf(1.0 / p0) } else { 0.0 })
            .collect();
        let sgn: Vec<i8> = (0..level.len() as u64)
            .map(|k| match sign_rule {
                SignRule::AllPlus => 1,
                SignRule::RademacherFromSeed => {
                    if node_hash(seed, STREAM_SIGN, j as u32, k, 0) & 1 == 0 {
                        1
                    } else {
                        -1
                    }
                }
            })
            .collect();
        magnitudes.push(mags);
        signs.push(sgn);
    }

    Ok(CoefficientTree {
        max_depth,
        s0,
        p0,
        seed,
        magnitudes,
        signs,
        perturbations: None,
        perturb_law: None,
    })
}

impl CoefficientTree {
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn perturb_law(&self) -> Option<PerturbLaw> {
        self.perturb_law
    }

    pub fn magnitude(&self, j: usize, k: u64) -> f64 {
        self.magnitudes[j][k as usize]
    }

    pub fn sign(&self, j: usize, k: u64) -> f64 {
        self.signs[j][k as usize] as f64
    }

    pub fn perturbation(&self, j: usize, k: u64) -> f64 {
        match &self.perturbations {
            Some(p) => p[j][k as usize],
            None => 1.0,
        }
    }

    pub fn is_perturbed(&self) -> bool {
        self.perturbations.is_some()
    }

    /// Signed coefficient `d_{j,k}` without perturbation.
    pub fn coefficient(&self, j: usize, k: u64) -> f64 {
        self.sign(j, k) * self.magnitude(j, k)
    }

    /// Signed, perturbed coefficient `pi_{j,k} d_{j,k}`.
    pub fn perturbed_coefficient(&self, j: usize, k: u64) -> f64 {
        self.perturbation(j, k) * self.coefficient(j, k)
    }

    /// Absolute coefficient used by the leader pyramid.
    pub fn abs_coefficient(&self, j: usize, k: u64, perturbed: bool) -> f64 {
        let base = self.magnitude(j, k);
        if perturbed {
            self.perturbation(j, k) * base
        } else {
            base
        }
    }
}

#[cfg(test)]
impl CoefficientTree {
    /// Coefficient-wise linear combination `a * t1 + t2`, used by the
    /// synthesis linearity tests. Perturbations are folded into the
    /// coefficients first.
    pub(crate) fn linear_combine(a: f64, t1: &CoefficientTree, t2: &CoefficientTree) -> Self {
        assert_eq!(t1.max_depth, t2.max_depth);
        let mut magnitudes = Vec::new();
        let mut signs = Vec::new();
        for j in 0..=t1.max_depth {
            let mut mags = Vec::with_capacity(1 << j);
            let mut sgns = Vec::with_capacity(1 << j);
            for k in 0..(1u64 << j) {
                let c = a * t1.perturbed_coefficient(j, k) + t2.perturbed_coefficient(j, k);
                mags.push(c.abs());
                sgns.push(if c >= 0.0 { 1i8 } else { -1 });
            }
            magnitudes.push(mags);
            signs.push(sgns);
        }
        CoefficientTree {
            max_depth: t1.max_depth,
            s0: t1.s0.min(t2.s0),
            p0: t1.p0,
            seed: t1.seed,
            magnitudes,
            signs,
            perturbations: None,
            perturb_law: None,
        }
    }
}

/// Attach a perturbation stream to the tree. The draw for a word depends only
/// on `(seed, level, word bits)`; the tree data is copied, magnitudes are
/// never multiplied in place.
pub fn perturb(tree: &CoefficientTree, law: PerturbLaw, seed: u64) -> CoefficientTree {
    let mut out = tree.clone();
    let mut per = Vec::with_capacity(tree.max_depth + 1);
    for j in 0..=tree.max_depth {
        let row: Vec<f64> = (0..(1u64 << j))
            .map(|k| law.sample(seed, j as u32, k))
            .collect();
        per.push(row);
    }
    out.perturbations = Some(per);
    out.perturb_law = Some(law);
    out
}
