//! `mwl pressure`: exact pressure and tau curves for the full shift and the
//! zero-avoiding subshifts, plus the convergence table of the avoidance
//! sweep.

use crate::config::RunConfig;
use crate::out::OutDir;
use anyhow::{Context, Result};
use mwl_core::symbolic::{build_sft, forbidden_words, Sft};
use mwl_core::thermo::{
    pressure, restricted_exponents, tau, CurveKind, SpectrumCurve,
};

pub fn run(cfg: &RunConfig, out: &OutDir) -> Result<()> {
    let fx = cfg.fixture()?;
    let qs = cfg.q_grid.values()?;

    let tau_full = tau(&fx.sft, &fx.potential, &qs)?;
    out.write_csv("tau_full.csv", &tau_full.to_csv())?;
    let p_full: Vec<f64> = qs
        .iter()
        .map(|&q| pressure(&fx.sft, &fx.potential, q))
        .collect::<mwl_core::Result<_>>()?;
    let p_curve = SpectrumCurve::new(qs.clone(), p_full.clone(), CurveKind::Pressure)?;
    out.write_csv("pressure_full.csv", &p_curve.to_csv())?;

    // Avoidance sweep: best transitive component per depth.
    let zeros = cfg.zero_set()?;
    let (k_lo, k_hi) = cfg.k_sweep;
    let mut table = String::from("k,q,pressure_full,pressure_avoid,gap,d0\n");
    for k in k_lo..=k_hi {
        let xk = build_sft(&forbidden_words(&zeros, k)?, k)?;
        let comp: Sft = match xk.transitive_components().into_iter().next() {
            Some(c) => c,
            None => {
                log::warn!("avoidance depth {k}: empty subshift, skipped");
                continue;
            }
        };
        let tau_k = tau(&comp, &fx.potential, &qs)?;
        out.write_csv(&format!("tau_x{k}.csv"), &tau_k.to_csv())?;
        let p_k: Vec<f64> = qs
            .iter()
            .map(|&q| pressure(&comp, &fx.potential, q))
            .collect::<mwl_core::Result<_>>()?;
        let pk_curve = SpectrumCurve::new(qs.clone(), p_k.clone(), CurveKind::Pressure)?;
        out.write_csv(&format!("pressure_x{k}.csv"), &pk_curve.to_csv())?;

        let d0 = restricted_exponents(&fx.sft, &comp, &fx.potential, 0.0, fx.s0, fx.p0)
            .context("restricted exponents at q = 0")?
            .d_k;
        for (i, &q) in qs.iter().enumerate() {
            table.push_str(&format!(
                "{k},{q},{},{},{},{d0}\n",
                p_full[i],
                p_k[i],
                p_full[i] - p_k[i]
            ));
        }
    }
    out.write_csv("convergence.csv", &table)?;
    println!("pressure: wrote tau/pressure curves and convergence table to {:?}", out.path(""));
    Ok(())
}
