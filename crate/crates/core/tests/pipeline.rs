//! Cross-module integration: the zero-avoidance pipeline, spectrum recovery
//! invariants and the artifact formats.

use mwl_core::fixtures::Fixture;
use mwl_core::geometry::{carrier_cover, oscillation_exponent};
use mwl_core::leaders::{
    default_scale_window, leader_pyramid, legendre_spectrum, pointwise_exponent, scaling_function,
};
use mwl_core::symbolic::{build_sft, forbidden_words};
use mwl_core::synthesis::{
    build_coefficients, perturb, synthesize, MotherWavelet, PerturbLaw, SampledSeries, SignRule,
};
use mwl_core::thermo::{restricted_exponents, tau_at, tau_prime, GibbsModel};
use mwl_core::verify::{build_pipeline, VerifySettings};

fn monofractal_series(depth: usize, seed: u64) -> (Fixture, SampledSeries) {
    let fx = Fixture::builtin("monofractal").unwrap();
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0).unwrap();
    let tree = build_coefficients(&gm, fx.s0, fx.p0, depth, fx.sign_rule, seed).unwrap();
    let tree = perturb(&tree, PerturbLaw::UniformHalfToThreeHalves, seed);
    let psi = MotherWavelet::builtin(fx.wavelet).unwrap();
    let series = synthesize(&tree, &psi, depth as u32, &fx.id).unwrap();
    (fx, series)
}

#[test]
fn monofractal_pointwise_exponents_concentrate_at_half() {
    let fx = Fixture::builtin("monofractal").unwrap();
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0).unwrap();
    let tree = build_coefficients(&gm, 0.5, 4.0, 14, fx.sign_rule, 7).unwrap();
    let tree = perturb(&tree, PerturbLaw::UniformHalfToThreeHalves, 7);
    let pyr = leader_pyramid(&tree, true);
    let mut exps = Vec::new();
    for i in 0..1000 {
        let x = (i as f64 + 0.5) / 1000.0;
        if let Ok(fit) = pointwise_exponent(&pyr, x, default_scale_window(14)) {
            exps.push(fit.slope);
        }
    }
    exps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = exps[exps.len() / 2];
    assert!((0.45..=0.55).contains(&median), "median exponent {median}");
}

#[test]
fn oscillation_exponent_on_synthesized_series() {
    let (_fx, series) = monofractal_series(14, 7);
    let radii: Vec<f64> = (4..=10).map(|p| 0.5f64.powi(p)).rev().collect();
    let mut slopes = Vec::new();
    for i in 0..100 {
        let x = (i as f64 + 0.5) / 100.0;
        if let Ok(fit) = oscillation_exponent(&series, x, &radii) {
            slopes.push(fit.slope);
        }
    }
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = slopes[slopes.len() / 2];
    assert!((median - 0.5).abs() <= 0.1, "median oscillation exponent {median}");
}

#[test]
fn perturbation_leaves_the_scaling_function_alone() {
    let fx = Fixture::builtin("monofractal").unwrap();
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0).unwrap();
    let tree = build_coefficients(&gm, 0.5, 4.0, 14, fx.sign_rule, 7).unwrap();
    let tree = perturb(&tree, PerturbLaw::UniformHalfToThreeHalves, 7);
    let qs: Vec<f64> = (-30..=40).map(|i| i as f64 * 0.1).collect();
    let w = default_scale_window(14);
    let with = scaling_function(&leader_pyramid(&tree, true), &qs, w).unwrap();
    let without = scaling_function(&leader_pyramid(&tree, false), &qs, w).unwrap();
    let gap = with
        .xi_hat
        .iter()
        .zip(&without.xi_hat)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(gap <= 0.05, "perturbed/unperturbed scaling gap {gap}");
}

#[test]
fn scaling_zero_moment_counts_support() {
    // xi_hat(0) is the negative growth rate of the nonzero-leader count:
    // -1 for full-support measures.
    let fx = Fixture::builtin("bernoulli").unwrap();
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0).unwrap();
    let tree = build_coefficients(&gm, fx.s0, fx.p0, 12, fx.sign_rule, 3).unwrap();
    let pyr = leader_pyramid(&tree, false);
    let est = scaling_function(&pyr, &[0.0], default_scale_window(12)).unwrap();
    assert!((est.xi_hat[0] + 1.0).abs() <= 0.05, "xi_hat(0) = {}", est.xi_hat[0]);
}

#[test]
fn legendre_spectrum_peaks_at_dimension_one() {
    let fx = Fixture::builtin("bernoulli").unwrap();
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0).unwrap();
    let tree = build_coefficients(&gm, fx.s0, fx.p0, 14, fx.sign_rule, 7).unwrap();
    let tree = perturb(&tree, PerturbLaw::UniformHalfToThreeHalves, 7);
    let pyr = leader_pyramid(&tree, true);
    let qs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.1).collect();
    let est = scaling_function(&pyr, &qs, default_scale_window(14)).unwrap();
    let hs: Vec<f64> = (10..=120).map(|i| i as f64 * 0.01).collect();
    let star = legendre_spectrum(&est, &hs).unwrap();
    let peak = star.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!((peak - 1.0).abs() <= 0.05, "spectrum peak {peak}");

    // The spectrum at h(q=1) is close to the exact tau*(tau'(1)).
    let tp = tau_prime(&fx.sft, &fx.potential, 1.0).unwrap();
    let h1 = fx.s0 - 1.0 / fx.p0 + tp / fx.p0;
    let expect = 1.0 * tp - tau_at(&fx.sft, &fx.potential, 1.0).unwrap();
    let idx = hs
        .iter()
        .position(|&h| (h - h1).abs() < 0.005)
        .expect("h grid covers h(q=1)");
    assert!(
        (star.values[idx] - expect).abs() <= 0.1,
        "xi*({h1:.3}) = {} vs {expect}",
        star.values[idx]
    );
}

#[test]
fn carrier_cover_captures_mass_at_moderate_eps() {
    let fx = Fixture::builtin("monofractal").unwrap();
    let gm = GibbsModel::new(&fx.sft, &fx.potential, 1.0).unwrap();
    let tree = build_coefficients(&gm, fx.s0, fx.p0, 14, fx.sign_rule, 7).unwrap();
    let tree = perturb(&tree, PerturbLaw::UniformHalfToThreeHalves, 7);
    let psi = MotherWavelet::builtin(fx.wavelet).unwrap();
    let series = synthesize(&tree, &psi, 14, &fx.id).unwrap();
    let zeros = psi.zeros_on_unit().unwrap();
    let xk = build_sft(&forbidden_words(&zeros, 6).unwrap(), 6).unwrap();
    let comp = xk.transitive_components().into_iter().next().unwrap();
    let re = restricted_exponents(&fx.sft, &comp, &fx.potential, 0.0, fx.s0, fx.p0).unwrap();
    let gm0 = GibbsModel::new(&comp, &fx.potential, 0.0).unwrap();

    // At a moderate window the carrier already captures most of the measure.
    let cc = carrier_cover(&gm0, &tree, &series, &re, 0.45, 8).unwrap();
    assert!(cc.captured_mass >= 0.5, "captured {}", cc.captured_mass);

    // Finite-scale carrier-mass growth in n, past a burn-in level.
    let mut last = 0.0;
    for n in [8usize, 10, 12] {
        let cc = carrier_cover(&gm0, &tree, &series, &re, 0.3, n).unwrap();
        assert!(cc.captured_mass >= last - 1e-12, "mass dropped at n = {n}");
        last = cc.captured_mass;
    }
    assert!(last >= 0.9, "mass at n = 12: {last}");
}

#[test]
fn pipeline_csv_artifacts_have_headers() {
    let fx = Fixture::builtin("monofractal").unwrap();
    let settings = VerifySettings {
        tree_depth: 10,
        grid_depth: 10,
        cover_level: 6,
        scales: (4..=8).collect(),
        energy_cover_level: 8,
        avoidance_depth: 4,
        ..Default::default()
    };
    let pipe = build_pipeline(&fx, &settings).unwrap();
    assert!(pipe.series.to_csv().starts_with("x,value\n"));
    let pyr = &pipe.pyramid;
    let est = scaling_function(pyr, &[-1.0, 0.0, 1.0], (3, 8)).unwrap();
    assert!(est.to_csv().starts_with("q,xi_hat,stderr,r2\n"));
    let curve = est.to_curve().unwrap();
    assert!(curve.to_csv().starts_with("grid,value,kind\n"));
}
