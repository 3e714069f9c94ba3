//! Development scratch.
use mwl_core::fixtures::Fixture;
use mwl_core::verify::{verify_theorem, VerifySettings};

fn main() {
    for (id, qs) in [("monofractal", vec![0.0, 1.0]), ("bernoulli", vec![0.0, 1.0, 2.0])] {
        let fx = Fixture::builtin(id).unwrap();
        let settings = VerifySettings { q_list: qs, seed: 7, ..Default::default() };
        let rep = verify_theorem(&fx, &settings).unwrap();
        println!("== {id}");
        for r in &rep.per_q {
            if let Some(s) = &r.skipped {
                println!("  q={}: skipped: {s}", r.q);
                continue;
            }
            let p = r.predicted.as_ref().unwrap();
            let e = r.estimated.as_ref().unwrap();
            println!(
                "  q={}: pred h={:.3} xi*={:.3} dG={:.3} dR={:.3} | est h={:.3} growth={:.3} dG={:.3} dR={:.3} (cover {})",
                r.q, p.h, p.xi_star, p.dim_graph, p.dim_range,
                e.h_median, e.cover_growth, e.dim_graph, e.dim_range, e.cover_size
            );
        }
        println!(
            "  full: dG={:.3} dR={:.3} gammaG={:?} gammaR={:?}",
            rep.full_cover.dim_graph, rep.full_cover.dim_range,
            rep.full_cover.gamma_graph, rep.full_cover.gamma_range
        );
        println!(
            "  audit: graph excess {:.3} range excess {:.3} over {} covers",
            rep.theorem_a.max_graph_excess, rep.theorem_a.max_range_excess,
            rep.theorem_a.covers_checked
        );
    }
}
