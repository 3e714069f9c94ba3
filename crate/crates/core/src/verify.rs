//! End-to-end verification: synthesize a fixture, estimate its spectra and
//! geometry, and compare against the exact thermodynamic predictions.

use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::geometry::{
    energy_scan, graph_box_count, graph_box_dimension, range_box_count,
    range_box_dimension, DyadicCover,
};
use crate::leaders::{leader_pyramid, pointwise_exponent, LeaderPyramid};
use crate::stats::fit_line;
use crate::symbolic::{build_sft, forbidden_words, Sft};
use crate::synthesis::{
    build_coefficients, perturb, synthesize, zero_clearance, MotherWavelet, PerturbLaw,
    SampledSeries,
};
use crate::thermo::{restricted_exponents, tau_at, tau_prime, theorem_spectra, GibbsModel};
use serde::{Deserialize, Serialize};

/// Tolerances the gap check is held to.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GapTolerances {
    pub h: f64,
    pub xi_star: f64,
    pub dim_graph: f64,
    pub dim_range: f64,
}

impl Default for GapTolerances {
    fn default() -> Self {
        GapTolerances { h: 0.1, xi_star: 0.15, dim_graph: 0.15, dim_range: 0.1 }
    }
}

/// Settings of a verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifySettings {
    pub q_list: Vec<f64>,
    /// Depth of the zero-avoiding subshift.
    pub avoidance_depth: usize,
    pub tree_depth: usize,
    pub grid_depth: u32,
    pub seed: u64,
    /// Width of the iso-Holder window.
    pub tol: f64,
    /// Level of the per-q covers.
    pub cover_level: usize,
    /// Box-count scales.
    pub scales: Vec<usize>,
    /// Budget factor for the energy scans, relative to the energy at the low
    /// end of the scan range.
    pub energy_budget_factor: f64,
    /// Cover level used by the energy scans.
    pub energy_cover_level: usize,
    pub tolerances: GapTolerances,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            q_list: vec![0.0, 1.0],
            avoidance_depth: 6,
            tree_depth: 14,
            grid_depth: 14,
            seed: 7,
            tol: 0.1,
            cover_level: 8,
            scales: (4..=10).collect(),
            energy_budget_factor: 3.0,
            energy_cover_level: 10,
            tolerances: GapTolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Predicted {
    pub h: f64,
    pub xi_star: f64,
    pub dim_graph: f64,
    pub dim_range: f64,
    /// Restricted-subshift values backing the prediction.
    pub h_restricted: f64,
    pub d_restricted: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Estimated {
    pub h_median: f64,
    pub cover_growth: f64,
    pub dim_graph: f64,
    pub dim_range: f64,
    pub cover_size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gaps {
    pub h: f64,
    pub xi_star: f64,
    pub dim_graph: f64,
    pub dim_range: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QRecord {
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<Predicted>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimated: Option<Estimated>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Gaps>,
}

/// Estimates on the full cover, where the graph dimension takes its
/// theorem value `min(xi*/h, xi* + 1 - h)` at the spectrum maximum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FullCoverRecord {
    pub dim_graph: f64,
    pub dim_range: f64,
    /// Threshold of the graph-kernel energy scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_graph: Option<f64>,
    /// Threshold of the range-kernel energy scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_range: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremAAudit {
    /// Largest excess of an estimated dimension over its upper bound.
    pub max_graph_excess: f64,
    pub max_range_excess: f64,
    pub covers_checked: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub fixture: String,
    pub settings: VerifySettings,
    /// Measured clearance of the zero-avoiding subshift.
    pub zero_clearance: f64,
    pub per_q: Vec<QRecord>,
    pub full_cover: FullCoverRecord,
    pub theorem_a: TheoremAAudit,
    pub all_within_tolerance: bool,
}

impl VerifyReport {
    /// Flat CSV table, one row per q.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "q,skipped,pred_h,pred_xi_star,pred_dim_graph,pred_dim_range,\
             est_h_median,est_cover_growth,est_dim_graph,est_dim_range,\
             gap_h,gap_xi_star,gap_dim_graph,gap_dim_range,within_tolerance\n",
        );
        for r in &self.per_q {
            let skip = r.skipped.clone().unwrap_or_default();
            let p = r.predicted.as_ref();
            let e = r.estimated.as_ref();
            let g = r.gaps.as_ref();
            let f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.q,
                skip,
                f(p.map(|p| p.h)),
                f(p.map(|p| p.xi_star)),
                f(p.map(|p| p.dim_graph)),
                f(p.map(|p| p.dim_range)),
                f(e.map(|e| e.h_median)),
                f(e.map(|e| e.cover_growth)),
                f(e.map(|e| e.dim_graph)),
                f(e.map(|e| e.dim_range)),
                f(g.map(|g| g.h)),
                f(g.map(|g| g.xi_star)),
                f(g.map(|g| g.dim_graph)),
                f(g.map(|g| g.dim_range)),
                g.map(|g| g.within_tolerance.to_string()).unwrap_or_default(),
            ));
        }
        out
    }
}

/// Pieces of the pipeline shared by the verification and the CLI drivers.
pub struct Pipeline {
    pub fixture: Fixture,
    pub series: SampledSeries,
    pub pyramid: LeaderPyramid,
    pub avoid: Sft,
    pub clearance: f64,
}

/// Build the synthesis side of a fixture: coefficients, perturbation, series,
/// perturbed leader pyramid, and the zero-avoiding component.
pub fn build_pipeline(fixture: &Fixture, settings: &VerifySettings) -> Result<Pipeline> {
    let psi = MotherWavelet::builtin(fixture.wavelet)?;
    let gm1 = GibbsModel::new(&fixture.sft, &fixture.potential, 1.0)?;
    let tree = build_coefficients(
        &gm1,
        fixture.s0,
        fixture.p0,
        settings.tree_depth,
        fixture.sign_rule,
        settings.seed,
    )?;
    let tree = perturb(&tree, PerturbLaw::UniformHalfToThreeHalves, settings.seed);
    let series = synthesize(&tree, &psi, settings.grid_depth, &fixture.id)?;
    let pyramid = leader_pyramid(&tree, true);

    let zeros = psi.zeros_on_unit()?;
    let k = settings.avoidance_depth;
    let forb = forbidden_words(&zeros, k)?;
    let xk = build_sft(&forb, k)?;
    let avoid = xk
        .transitive_components()
        .into_iter()
        .next()
        .ok_or(Error::EmptySubshift)?;
    let clearance = zero_clearance(&psi, &avoid, k, (k + 4).min(14))?;
    Ok(Pipeline { fixture: fixture.clone(), series, pyramid, avoid, clearance })
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// A fixed fine-level approximation of an iso-Holder set, aggregated into
/// dyadic covers at coarser levels.
///
/// Exponents are estimated once per fine word with one uniform regression
/// window, so the selection quality does not drift with the cover level; the
/// coarser covers are plain dyadic projections of the same set.
struct IsoAggregation {
    fine_level: usize,
    /// Sorted fine-word indices in the window `[h - tol, h + tol]`.
    selected: Vec<u64>,
    /// Exponent estimates of the selected words.
    exponents: Vec<f64>,
}

/// Pointwise exponents of every fine-level midpoint, shared across windows.
fn fine_exponents(p: &LeaderPyramid, fine_level: usize) -> Vec<Option<f64>> {
    let window = crate::leaders::default_scale_window(p.max_depth());
    let cells = 1u64 << fine_level;
    (0..cells)
        .map(|k| {
            let x = (k as f64 + 0.5) / cells as f64;
            pointwise_exponent(p, x, window).ok().map(|f| f.slope)
        })
        .collect()
}

impl IsoAggregation {
    fn select(exponents: &[Option<f64>], fine_level: usize, h: f64, tol: f64) -> Self {
        let mut selected = Vec::new();
        let mut kept = Vec::new();
        for (k, e) in exponents.iter().enumerate() {
            if let Some(e) = e {
                if (e - h).abs() <= tol {
                    selected.push(k as u64);
                    kept.push(*e);
                }
            }
        }
        IsoAggregation { fine_level, selected, exponents: kept }
    }

    /// Dyadic ancestors of the selected words at level `n <= fine_level`.
    fn cover_at(&self, n: usize) -> DyadicCover {
        let shift = self.fine_level - n;
        let mut vals: Vec<u64> = self.selected.iter().map(|k| k >> shift).collect();
        vals.dedup();
        let words = vals
            .into_iter()
            .map(|v| crate::symbolic::Word::from_value(v, n).unwrap())
            .collect();
        DyadicCover { level: n, words, provenance: format!("iso-aggregated level {n}") }
    }

    /// Slope of a per-level log2 count over the aggregated covers.
    fn slope(
        &self,
        levels: std::ops::RangeInclusive<usize>,
        mut count: impl FnMut(&DyadicCover, usize) -> Result<u64>,
    ) -> Result<f64> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for n in levels {
            let cover = self.cover_at(n);
            if cover.is_empty() {
                continue;
            }
            let c = count(&cover, n)?;
            if c > 0 {
                xs.push(n as f64);
                ys.push((c as f64).log2());
            }
        }
        if xs.len() < 3 {
            return Err(Error::TooFewScales { need: 3, got: xs.len() });
        }
        Ok(fit_line(&xs, &ys).slope)
    }
}

/// Run the full verification for a fixture.
pub fn verify_theorem(fixture: &Fixture, settings: &VerifySettings) -> Result<VerifyReport> {
    let pipe = build_pipeline(fixture, settings)?;
    let series = &pipe.series;
    let pyramid = &pipe.pyramid;
    let full = &fixture.sft;
    let phi = &fixture.potential;
    let (s0, p0) = (fixture.s0, fixture.p0);

    let mut per_q = Vec::new();
    let mut all_ok = true;
    // Theorem A audit entries: (graph bound, range bound, graph est, range est).
    let mut audits: Vec<(f64, f64, f64, f64)> = Vec::new();
    // Fine selection level and the window of aggregated cover levels.
    let fine_level = (pyramid.max_depth() - 2).min(settings.grid_depth as usize - 2);
    let refine_lo = 5.min(fine_level - 3);
    let refine_hi = fine_level - 1;
    let exponents = fine_exponents(pyramid, fine_level);

    for &q in &settings.q_list {
        let re = restricted_exponents(full, &pipe.avoid, phi, q, s0, p0)?;
        let h_q = s0 - 1.0 / p0 + tau_prime(full, phi, q)? / p0;
        let xi_star = q * tau_prime(full, phi, q)? - tau_at(full, phi, q)?;
        let spectra = theorem_spectra(h_q, xi_star);
        let (dg, dr) = match spectra {
            Ok(v) => v,
            Err(e) => {
                per_q.push(QRecord {
                    q,
                    skipped: Some(format!("outside theorem hypotheses: {e}")),
                    predicted: None,
                    estimated: None,
                    gaps: None,
                });
                continue;
            }
        };
        let predicted = Predicted {
            h: h_q,
            xi_star,
            dim_graph: dg,
            dim_range: dr,
            h_restricted: re.h_k,
            d_restricted: re.d_k,
        };

        let iso = IsoAggregation::select(&exponents, fine_level, h_q, settings.tol);
        if iso.selected.len() < 4 {
            per_q.push(QRecord {
                q,
                skipped: Some("iso-holder selection too sparse".into()),
                predicted: Some(predicted),
                estimated: None,
                gaps: None,
            });
            all_ok = false;
            continue;
        }
        let h_median = median(iso.exponents.clone());
        let growth = iso.slope(refine_lo..=refine_hi, |c, _| Ok(c.len() as u64))?;
        let dim_g =
            iso.slope(refine_lo..=refine_hi, |c, n| graph_box_count(series, Some(c), n))?;
        let dim_r =
            iso.slope(refine_lo..=refine_hi, |c, n| range_box_count(series, Some(c), n))?;

        let gaps = Gaps {
            h: (h_median - h_q).abs(),
            xi_star: (growth - xi_star).abs(),
            dim_graph: (dim_g - dg).abs(),
            dim_range: (dim_r - dr).abs(),
            within_tolerance: (h_median - h_q).abs() <= settings.tolerances.h
                && (growth - xi_star).abs() <= settings.tolerances.xi_star
                && (dim_g - dg).abs() <= settings.tolerances.dim_graph
                && (dim_r - dr).abs() <= settings.tolerances.dim_range,
        };
        all_ok &= gaps.within_tolerance;
        // Theorem A on an iso-Holder cover, with the exact thermodynamic
        // values for dim E and inf h: the bounds reduce to the predicted
        // graph/range dimensions.
        audits.push((
            (xi_star / h_q).min(xi_star + 1.0 - h_q).max(xi_star),
            (xi_star / h_q).min(1.0),
            dim_g,
            dim_r,
        ));
        per_q.push(QRecord {
            q,
            skipped: None,
            predicted: Some(predicted),
            estimated: Some(Estimated {
                h_median,
                cover_growth: growth,
                dim_graph: dim_g,
                dim_range: dim_r,
                cover_size: iso.cover_at(settings.cover_level).len(),
            }),
            gaps: Some(gaps),
        });
    }

    // Full-cover estimates and energy thresholds with restricted weights.
    let fg = graph_box_dimension(series, None, &settings.scales)?;
    let fr = range_box_dimension(series, None, &settings.scales)?;
    let gm_k0 = GibbsModel::new(&pipe.avoid, phi, 0.0)?;
    let energy_cover = DyadicCover::full(settings.energy_cover_level);
    let weights: Vec<f64> =
        energy_cover.words.iter().map(|w| gm_k0.marginal(w)).collect();
    let graph_scan = energy_scan(
        series,
        &energy_cover,
        &weights,
        (1.05, 2.0),
        budget_for(series, &energy_cover, &weights, 1.05, settings.energy_budget_factor)?,
    )?;
    let range_scan = energy_scan(
        series,
        &energy_cover,
        &weights,
        (0.05, 0.95),
        budget_for(series, &energy_cover, &weights, 0.05, settings.energy_budget_factor)?,
    )?;

    // Audit the full cover with the minimum estimated exponent: the graph of
    // the series must stay within [1, 2 - h_min] and the range within [0, 1].
    {
        let mut exps = Vec::new();
        for k in 0..(1u64 << settings.cover_level) {
            let x = (k as f64 + 0.5) / (1u64 << settings.cover_level) as f64;
            if let Ok(fit) =
                pointwise_exponent(pyramid, x, (settings.cover_level, pyramid.max_depth()))
            {
                exps.push(fit.slope);
            }
        }
        let h_inf = exps.iter().cloned().fold(f64::INFINITY, f64::min).clamp(1e-6, 1.0);
        audits.push(((1.0f64 / h_inf).min(2.0 - h_inf).max(1.0), 1.0, fg.value, fr.value));
    }

    let mut max_graph_excess = f64::NEG_INFINITY;
    let mut max_range_excess = f64::NEG_INFINITY;
    for &(graph_bound, range_bound, graph, range) in &audits {
        max_graph_excess = max_graph_excess.max(graph - graph_bound);
        max_range_excess = max_range_excess.max(range - range_bound);
    }

    Ok(VerifyReport {
        schema: 1,
        fixture: fixture.id.clone(),
        settings: settings.clone(),
        zero_clearance: pipe.clearance,
        per_q,
        full_cover: FullCoverRecord {
            dim_graph: fg.value,
            dim_range: fr.value,
            gamma_graph: graph_scan.threshold,
            gamma_range: range_scan.threshold,
        },
        theorem_a: TheoremAAudit {
            max_graph_excess,
            max_range_excess,
            covers_checked: audits.len(),
        },
        all_within_tolerance: all_ok,
    })
}

/// Budget for an energy scan: a fixed multiple of the energy at the low end
/// of the range, where the double sum is safely summable.
pub fn budget_for(
    series: &SampledSeries,
    cover: &DyadicCover,
    weights: &[f64],
    gamma_lo: f64,
    factor: f64,
) -> Result<f64> {
    let base = crate::geometry::riesz_energy(series, cover, weights, gamma_lo)?;
    if !base.finite {
        return Err(Error::InvalidParameter(
            "baseline energy already infinite; cover points coincide".into(),
        ));
    }
    Ok(base.energy * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;

    #[test]
    fn pipeline_builds_on_a_small_setting() {
        let fixture = Fixture::builtin("monofractal").unwrap();
        let settings = VerifySettings {
            tree_depth: 10,
            grid_depth: 10,
            cover_level: 6,
            scales: (4..=8).collect(),
            avoidance_depth: 4,
            ..Default::default()
        };
        let pipe = build_pipeline(&fixture, &settings).unwrap();
        assert!(pipe.clearance > 0.0);
        assert_eq!(pipe.series.samples.len(), (1 << 10) + 1);
    }
}
