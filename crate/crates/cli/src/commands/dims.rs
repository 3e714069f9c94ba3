//! `mwl dims`: box-counting and energy estimators on the synthesized series.

use crate::config::RunConfig;
use crate::out::OutDir;
use anyhow::Result;
use mwl_core::geometry::{
    energy_scan, graph_box_dimension, range_box_dimension, riesz_energy, DyadicCover,
};
use mwl_core::symbolic::{build_sft, forbidden_words};
use mwl_core::synthesis::{build_coefficients, perturb, synthesize};
use mwl_core::thermo::GibbsModel;
use serde::Serialize;

#[derive(Serialize)]
struct DimsReport {
    schema: u32,
    fixture: String,
    graph_dim: f64,
    graph_stderr: f64,
    range_dim: f64,
    range_stderr: f64,
    gamma_graph: Option<f64>,
    gamma_range: Option<f64>,
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> Result<()> {
    let fx = cfg.fixture()?;
    let psi = cfg.wavelet()?;
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0)?;
    let tree = build_coefficients(&gm, fx.s0, fx.p0, cfg.tree_depth, fx.sign_rule, cfg.seed)?;
    let tree = perturb(&tree, cfg.perturb_law(), cfg.seed);
    let series = synthesize(&tree, &psi, cfg.grid_depth, &fx.id)?;

    let scales: Vec<usize> = (cfg.scales.0..=cfg.scales.1).collect();
    let g = graph_box_dimension(&series, None, &scales)?;
    let r = range_box_dimension(&series, None, &scales)?;

    let mut counts = String::from("scale,graph_count,range_count\n");
    for (i, &(j, gc)) in g.counts.iter().enumerate() {
        counts.push_str(&format!("{j},{gc},{}\n", r.counts[i].1));
    }
    out.write_csv("box_counts.csv", &counts)?;

    // Energy scans weighted by the restricted measure at q = 0.
    let zeros = cfg.zero_set()?;
    let k = cfg.avoidance_depth;
    let xk = build_sft(&forbidden_words(&zeros, k)?, k)?;
    let (gamma_graph, gamma_range, curve) = match xk.transitive_components().into_iter().next() {
        Some(comp) => {
            let gm0 = GibbsModel::new(&comp, &fx.potential, 0.0)?;
            let cover = DyadicCover::full(cfg.energy_cover_level);
            let weights: Vec<f64> = cover.words.iter().map(|w| gm0.marginal(w)).collect();
            let base_g = riesz_energy(&series, &cover, &weights, 1.05)?.energy;
            let scan_g = energy_scan(
                &series,
                &cover,
                &weights,
                (1.05, 2.0),
                cfg.energy_budget_factor * base_g,
            )?;
            let base_r = riesz_energy(&series, &cover, &weights, 0.05)?.energy;
            let scan_r = energy_scan(
                &series,
                &cover,
                &weights,
                (0.05, 0.95),
                cfg.energy_budget_factor * base_r,
            )?;
            let mut curve = String::from("gamma,energy,kernel\n");
            for (gm_, e) in &scan_r.samples {
                curve.push_str(&format!("{gm_},{e},range\n"));
            }
            for (gm_, e) in &scan_g.samples {
                curve.push_str(&format!("{gm_},{e},graph\n"));
            }
            (scan_g.threshold, scan_r.threshold, curve)
        }
        None => (None, None, String::from("gamma,energy,kernel\n")),
    };
    out.write_csv("energy_scan.csv", &curve)?;

    out.write_json(
        "dims.json",
        &DimsReport {
            schema: 1,
            fixture: fx.id.clone(),
            graph_dim: g.value,
            graph_stderr: g.stderr,
            range_dim: r.value,
            range_stderr: r.stderr,
            gamma_graph,
            gamma_range,
        },
    )?;
    println!(
        "dims: graph {:.3} range {:.3}, energy thresholds graph {:?} range {:?}",
        g.value, r.value, gamma_graph, gamma_range
    );
    Ok(())
}
