//! Oscillation-based pointwise exponents on sampled series.

use crate::error::{Error, Result};
use crate::leaders::ExponentFit;
use crate::stats::fit_line;
use crate::synthesis::SampledSeries;

/// Slope of `log osc(B(x0, r))` against `log r` over the given radii: the
/// finite-scale surrogate of the pointwise Holder exponent.
pub fn oscillation_exponent(
    series: &SampledSeries,
    x0: f64,
    radii: &[f64],
) -> Result<ExponentFit> {
    if radii.len() < 2 {
        return Err(Error::TooFewScales { need: 2, got: radii.len() });
    }
    let step = 1.0 / (1u64 << series.grid_depth) as f64;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &r in radii {
        if r < step {
            return Err(Error::InvalidParameter(format!(
                "radius {r} below the grid resolution {step}"
            )));
        }
        let osc = series.oscillation(x0 - r, x0 + r);
        if osc > 0.0 {
            xs.push(r.ln());
            ys.push(osc.ln());
        }
    }
    if xs.is_empty() {
        return Err(Error::LocallyConstant);
    }
    if xs.len() < 2 {
        return Err(Error::TooFewScales { need: 2, got: xs.len() });
    }
    Ok(fit_line(&xs, &ys).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_from_fn(g: u32, f: impl Fn(f64) -> f64) -> SampledSeries {
        let n = (1usize << g) + 1;
        let samples: Vec<f64> = (0..n).map(|i| f(i as f64 / (n - 1) as f64)).collect();
        SampledSeries {
            grid_depth: g,
            truncation_depth: g,
            seed: 0,
            samples,
            tail_bound: 0.0,
            wavelet: "test".into(),
            fixture: "test".into(),
        }
    }

    fn dyadic_radii(lo_pow: i32, hi_pow: i32) -> Vec<f64> {
        (lo_pow..=hi_pow).map(|p| 0.5f64.powi(p)).rev().collect()
    }

    #[test]
    fn linear_function_has_exponent_one() {
        let s = series_from_fn(14, |x| x);
        let fit = oscillation_exponent(&s, 0.4, &dyadic_radii(3, 9)).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn sqrt_cusp_has_exponent_half() {
        let s = series_from_fn(16, |x| x.sqrt());
        let fit = oscillation_exponent(&s, 0.0, &dyadic_radii(3, 11)).unwrap();
        assert!((fit.slope - 0.5).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn constant_is_flagged() {
        let s = series_from_fn(10, |_| 1.0);
        assert!(matches!(
            oscillation_exponent(&s, 0.5, &dyadic_radii(2, 6)),
            Err(Error::LocallyConstant)
        ));
    }
}
