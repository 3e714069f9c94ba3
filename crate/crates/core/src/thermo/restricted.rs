//! Exponents of Gibbs measures restricted to zero-avoiding subshifts, and the
//! graph/range dimension formulas they feed.

use crate::error::{Error, Result};
use crate::symbolic::Sft;
use crate::thermo::curve::validate_s0_p0;
use crate::thermo::gibbs::GibbsModel;
use crate::thermo::potential::Potential;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Local exponents of the restricted equilibrium state `mu_q^{(k)}`.
///
/// `gamma_g`/`gamma_r` are populated only when `0 < h_k < 1`; outside the
/// theorem hypotheses they stay `None` rather than erroring.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RestrictedExponents {
    pub q: f64,
    /// Almost-sure local dimension of the unrestricted measure along the
    /// restricted one.
    pub alpha_k: f64,
    /// Almost-sure local dimension of the restricted measure itself.
    pub d_k: f64,
    /// Holder exponent carried by the restricted measure on the series.
    pub h_k: f64,
    pub gamma_g: Option<f64>,
    pub gamma_r: Option<f64>,
}

/// Compute the restricted exponents for the potential `q phi` on `avoid`
/// inside the ambient shift `full`.
///
/// All derivatives in the difference formulas are exact Gibbs expectations on
/// the respective subshifts; no finite differences enter.
pub fn restricted_exponents(
    full: &Sft,
    avoid: &Sft,
    phi: &Potential,
    q: f64,
    s0: f64,
    p0: f64,
) -> Result<RestrictedExponents> {
    validate_s0_p0(s0, p0)?;
    let gm_full_1 = GibbsModel::new(full, phi, 1.0)?;
    let gm_full_q = GibbsModel::new(full, phi, q)?;
    let gm_avoid_q = GibbsModel::new(avoid, phi, q)?;

    let p1 = gm_full_1.pressure();
    let e_full = gm_full_q.expectation_phi();
    let e_avoid = gm_avoid_q.expectation_phi();
    let p_full = gm_full_q.pressure();
    let p_avoid = gm_avoid_q.pressure();

    let tau_prime = (p1 - e_full) / LN_2;
    let tau_full = (q * p1 - p_full) / LN_2;
    // Duality: tau*(tau'(q)) = q tau'(q) - tau(q), exact for analytic tau.
    let tau_star = q * tau_prime - tau_full;

    let d_delta = (e_full - e_avoid) / LN_2;
    let delta = (p_full - p_avoid) / LN_2;

    let alpha_k = tau_prime + d_delta;
    let d_k = tau_star - (-q * d_delta + delta);
    let h_k = s0 - 1.0 / p0 + alpha_k / p0;

    let (gamma_g, gamma_r) = if 0.0 < h_k && h_k < 1.0 {
        (
            Some((d_k / h_k).min(1.0 - h_k + d_k)),
            Some((d_k / h_k).min(1.0)),
        )
    } else {
        (None, None)
    };

    Ok(RestrictedExponents { q, alpha_k, d_k, h_k, gamma_g, gamma_r })
}

/// The almost-sure graph and range dimensions at exponent `h` with spectrum
/// value `xi_star = xi*(h)`:
/// `d_G = min(xi*/h, xi* + 1 - h)` and `d_R = min(xi*/h, 1)`.
pub fn theorem_spectra(h: f64, xi_star_at_h: f64) -> Result<(f64, f64)> {
    if !(0.0 < h && h < 1.0) {
        return Err(Error::OutsideTheoremHypotheses(format!("h = {h} outside (0, 1)")));
    }
    if !(xi_star_at_h > 0.0) {
        return Err(Error::OutsideTheoremHypotheses(format!(
            "xi*(h) = {xi_star_at_h} not positive"
        )));
    }
    let d_g = (xi_star_at_h / h).min(xi_star_at_h + 1.0 - h);
    let d_r = (xi_star_at_h / h).min(1.0);
    Ok((d_g, d_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{build_sft, full_shift, Word};
    use std::collections::BTreeSet;

    #[test]
    fn avoid_equals_full_cancels_corrections() {
        let full = full_shift(2).unwrap();
        let bern = Potential::bernoulli(0.25).unwrap();
        for q in [-1.5, 0.0, 1.0, 2.0] {
            let re = restricted_exponents(&full, &full, &bern, q, 0.6, 2.0).unwrap();
            let tp = crate::thermo::curve::tau_prime(&full, &bern, q).unwrap();
            let tv = crate::thermo::curve::tau_at(&full, &bern, q).unwrap();
            assert!((re.alpha_k - tp).abs() < 1e-12);
            assert!((re.d_k - (q * tp - tv)).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_mean_avoidance_at_q0() {
        let full = full_shift(2).unwrap();
        let mut f = BTreeSet::new();
        f.insert(Word::parse("11").unwrap());
        let gm = build_sft(&f, 2).unwrap();
        let zero = Potential::constant(0.0);
        let re = restricted_exponents(&full, &gm, &zero, 0.0, 0.5, 4.0).unwrap();
        let phi_g = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((re.d_k - phi_g.log2()).abs() < 1e-10);
    }

    #[test]
    fn theorem_formulas() {
        let (g, r) = theorem_spectra(0.5, 1.0).unwrap();
        assert_eq!((g, r), (1.5, 1.0));
        let (g, r) = theorem_spectra(0.6, 1.0).unwrap();
        assert!((g - 1.4).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let (g, r) = theorem_spectra(0.8, 0.3).unwrap();
        assert!((g - 0.375).abs() < 1e-12 && (r - 0.375).abs() < 1e-12);
        assert!(theorem_spectra(1.2, 0.4).is_err());
        assert!(theorem_spectra(0.5, 0.0).is_err());
    }

    #[test]
    fn gamma_markers_outside_hypotheses() {
        // s0 = 1.6, p0 = 2: h = 1.1 + alpha/2 lands above 1 for alpha >= 0.
        let full = full_shift(2).unwrap();
        let zero = Potential::constant(0.0);
        let re = restricted_exponents(&full, &full, &zero, 0.0, 1.6, 2.0).unwrap();
        assert!(re.h_k >= 1.0);
        assert!(re.gamma_g.is_none() && re.gamma_r.is_none());
    }
}
