//! Dyadic covers selected by exponent and measure windows.

use crate::error::{Error, Result};
use crate::leaders::{pointwise_exponent, LeaderPyramid};
use crate::symbolic::{neighbors, Word};
use crate::synthesis::{CoefficientTree, SampledSeries};
use crate::thermo::{GibbsModel, RestrictedExponents};

/// A set of same-length words selecting dyadic intervals.
#[derive(Debug, Clone)]
pub struct DyadicCover {
    pub level: usize,
    pub words: Vec<Word>,
    pub provenance: String,
}

impl DyadicCover {
    /// The full cover: every word at the level.
    pub fn full(level: usize) -> Self {
        let words = (0..(1u64 << level))
            .map(|v| Word::from_value(v, level).unwrap())
            .collect();
        DyadicCover { level, words, provenance: "full".into() }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }
}

/// Words at level `n` whose leader-regression exponent over the subtree
/// window `[n, max_depth]` lands in `[h - tol, h + tol]`. An empty cover is a
/// valid result.
pub fn iso_holder_cover(
    p: &LeaderPyramid,
    h: f64,
    tol: f64,
    n: usize,
) -> Result<DyadicCover> {
    if n + 2 > p.max_depth() {
        return Err(Error::InvalidParameter(format!(
            "cover level {n} too deep for pyramid depth {} (need n <= depth - 2)",
            p.max_depth()
        )));
    }
    let mut words = Vec::new();
    for k in 0..(1u64 << n) {
        let x = (k as f64 + 0.5) / (1u64 << n) as f64;
        match pointwise_exponent(p, x, (n, p.max_depth())) {
            Ok(fit) if (fit.slope - h).abs() <= tol => {
                words.push(Word::from_value(k, n)?);
            }
            _ => {}
        }
    }
    Ok(DyadicCover { level: n, words, provenance: format!("iso-holder h={h} tol={tol}") })
}

/// Carrier cover with its captured restricted-measure mass.
#[derive(Debug, Clone)]
pub struct CarrierCover {
    pub cover: DyadicCover,
    /// Total `mu_q^(k)` mass of the selected words.
    pub captured_mass: f64,
}

/// Words at level `n` passing the three carrier windows around the restricted
/// exponents `(h, D)`: coefficient size, restricted cylinder mass, and the
/// oscillation of the sampled series over the neighbor-union.
pub fn carrier_cover(
    gm_restricted: &GibbsModel,
    tree: &CoefficientTree,
    series: &SampledSeries,
    re: &RestrictedExponents,
    eps: f64,
    n: usize,
) -> Result<CarrierCover> {
    if eps < 0.0 {
        return Err(Error::InvalidParameter("eps must be nonnegative".into()));
    }
    if n > tree.max_depth() {
        return Err(Error::InvalidParameter(format!(
            "cover level {n} beyond tree depth {}",
            tree.max_depth()
        )));
    }
    let h = re.h_k;
    let d = re.d_k;
    let nf = n as f64;
    let coeff_lo = (-nf * (h + eps)).exp2();
    let coeff_hi = (-nf * (h - eps)).exp2();
    let mass_lo = (-nf * (d + eps)).exp2();
    let mass_hi = (-nf * (d - eps)).exp2();
    let osc_cap = (-nf * (h - eps)).exp2();

    let mut words = Vec::new();
    let mut captured = 0.0;
    for k in 0..(1u64 << n) {
        let w = Word::from_value(k, n)?;
        let coeff = tree.magnitude(n, k);
        if !(coeff_lo <= coeff && coeff <= coeff_hi) {
            continue;
        }
        let mass = gm_restricted.marginal(&w);
        if !(mass_lo <= mass && mass <= mass_hi) {
            continue;
        }
        // Oscillation over the union of neighbor cylinders.
        let mut lo_x = f64::INFINITY;
        let mut hi_x = f64::NEG_INFINITY;
        for u in neighbors(&w)? {
            lo_x = lo_x.min(u.lambda());
            hi_x = hi_x.max(u.lambda() + u.interval_len());
        }
        if series.oscillation(lo_x, hi_x) > osc_cap {
            continue;
        }
        captured += mass;
        words.push(w);
    }
    Ok(CarrierCover {
        cover: DyadicCover {
            level: n,
            words,
            provenance: format!("carrier q={} eps={eps}", re.q),
        },
        captured_mass: captured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaders::leader_pyramid;
    use crate::symbolic::full_shift;
    use crate::synthesis::{build_coefficients, synthesize, MotherWavelet, SignRule, WaveletKind};
    use crate::thermo::{GibbsModel, Potential};

    #[test]
    fn monofractal_cover_is_everything_at_its_exponent() {
        let sft = full_shift(2).unwrap();
        let gm = GibbsModel::new(&sft, &Potential::constant(0.0), 1.0).unwrap();
        let tree = build_coefficients(&gm, 0.5, 4.0, 12, SignRule::AllPlus, 1).unwrap();
        let p = leader_pyramid(&tree, false);
        let cover = iso_holder_cover(&p, 0.5, 0.1, 8).unwrap();
        assert!(cover.len() as f64 >= 0.9 * 256.0, "cover size {}", cover.len());
        let empty = iso_holder_cover(&p, 0.9, 0.05, 8).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn cover_nesting_in_tolerance() {
        let sft = full_shift(2).unwrap();
        let gm = GibbsModel::new(&sft, &Potential::bernoulli(0.25).unwrap(), 1.0).unwrap();
        let tree = build_coefficients(&gm, 0.6, 2.0, 12, SignRule::AllPlus, 1).unwrap();
        let p = leader_pyramid(&tree, false);
        let tight = iso_holder_cover(&p, 0.55, 0.05, 7).unwrap();
        let loose = iso_holder_cover(&p, 0.55, 0.15, 7).unwrap();
        for w in &tight.words {
            assert!(loose.words.contains(w));
        }
    }

    #[test]
    fn carrier_mass_monotone_in_eps() {
        let sft = full_shift(2).unwrap();
        let phi = Potential::constant(0.0);
        let gm = GibbsModel::new(&sft, &phi, 1.0).unwrap();
        let tree = build_coefficients(&gm, 0.5, 4.0, 10, SignRule::RademacherFromSeed, 3).unwrap();
        let psi = MotherWavelet::builtin(WaveletKind::Gauss2).unwrap();
        let series = synthesize(&tree, &psi, 10, "t").unwrap();
        let re = crate::thermo::restricted_exponents(&sft, &sft, &phi, 0.0, 0.5, 4.0).unwrap();
        let gm0 = GibbsModel::new(&sft, &phi, 0.0).unwrap();
        let mut prev = -1.0;
        for eps in [0.05, 0.1, 0.2, 0.4] {
            let cc = carrier_cover(&gm0, &tree, &series, &re, eps, 6).unwrap();
            assert!(cc.captured_mass >= prev);
            prev = cc.captured_mass;
        }
        // eps = 0 windows have measure zero for generic series.
        let cc = carrier_cover(&gm0, &tree, &series, &re, 0.0, 6).unwrap();
        let _ = cc;
    }
}
