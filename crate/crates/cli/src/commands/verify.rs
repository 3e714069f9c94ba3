//! `mwl verify`: the end-to-end theorem check. Exit status 0 exactly when
//! every per-q gap is within the configured tolerances.

use crate::config::RunConfig;
use crate::out::OutDir;
use anyhow::Result;
use mwl_core::verify::verify_theorem;

pub fn run(cfg: &RunConfig, out: &OutDir) -> Result<bool> {
    let fx = cfg.fixture()?;
    let settings = cfg.verify_settings();
    let report = verify_theorem(&fx, &settings)?;
    out.write_json("verify_report.json", &report)?;
    out.write_csv("verify_report.csv", &report.to_csv())?;

    for r in &report.per_q {
        match (&r.skipped, &r.gaps) {
            (Some(note), _) => println!("q = {}: skipped: {note}", r.q),
            (None, Some(g)) => {
                let verdict = if g.within_tolerance { "ok" } else { "OUT OF TOLERANCE" };
                println!(
                    "q = {}: gaps h {:.3} xi* {:.3} dG {:.3} dR {:.3} [{verdict}]",
                    r.q, g.h, g.xi_star, g.dim_graph, g.dim_range
                );
            }
            _ => {}
        }
    }
    println!(
        "theorem A audit: graph excess {:.3}, range excess {:.3} over {} covers",
        report.theorem_a.max_graph_excess,
        report.theorem_a.max_range_excess,
        report.theorem_a.covers_checked
    );
    println!(
        "verify: {}",
        if report.all_within_tolerance { "all gaps within tolerance" } else { "FAILED" }
    );
    Ok(report.all_within_tolerance)
}
