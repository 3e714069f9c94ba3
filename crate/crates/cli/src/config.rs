//! Run configuration: a single JSON file with documented defaults, echoed
//! verbatim into every artifact the commands produce.

use anyhow::{bail, Context, Result};
use mwl_core::fixtures::Fixture;
use mwl_core::symbolic::ZeroSet;
use mwl_core::synthesis::{MotherWavelet, PerturbLaw, SignRule, WaveletKind};
use mwl_core::thermo::Potential;
use mwl_core::verify::{GapTolerances, VerifySettings};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn default_fixture() -> String {
    "monofractal".into()
}
fn default_avoidance_depth() -> usize {
    6
}
fn default_tree_depth() -> usize {
    14
}
fn default_grid_depth() -> u32 {
    14
}
fn default_seed() -> u64 {
    7
}
fn default_q_grid() -> GridSpec {
    GridSpec { lo: -2.0, hi: 4.0, step: 0.1 }
}
fn default_q_list() -> Vec<f64> {
    vec![0.0, 1.0]
}
fn default_eps() -> f64 {
    0.3
}
fn default_tol() -> f64 {
    0.1
}
fn default_cover_level() -> usize {
    8
}
fn default_scales() -> (usize, usize) {
    (4, 10)
}
fn default_energy_budget_factor() -> f64 {
    3.0
}
fn default_energy_cover_level() -> usize {
    10
}
fn default_k_sweep() -> (usize, usize) {
    (3, 8)
}
fn default_out_dir() -> String {
    "out".into()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.hi > self.lo) {
            bail!("bad grid spec: lo {} hi {} step {}", self.lo, self.hi, self.step);
        }
        let n = ((self.hi - self.lo) / self.step).round() as usize;
        Ok((0..=n).map(|i| self.lo + i as f64 * self.step).collect())
    }
}

/// Optional potential override.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialSpec {
    Bernoulli { family: String, p: f64 },
    Table { range: usize, values: Vec<f64> },
}

/// Tolerances block mirrored from the verification settings.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub h: f64,
    pub xi_star: f64,
    pub dim_graph: f64,
    pub dim_range: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        let g = GapTolerances::default();
        ToleranceSpec { h: g.h, xi_star: g.xi_star, dim_graph: g.dim_graph, dim_range: g.dim_range }
    }
}

/// The experiment configuration. Every field has a default; the effective
/// (fully resolved) struct is what gets echoed into artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_fixture")]
    pub fixture: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    /// Wavelet kind override: gauss2, sinBump, cascadeDbN.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    /// Zero set override for the avoidance sweep (defaults to the wavelet's
    /// zeros on the unit interval).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<f64>>,
    #[serde(default = "default_avoidance_depth")]
    pub avoidance_depth: usize,
    #[serde(default = "default_tree_depth")]
    pub tree_depth: usize,
    #[serde(default = "default_grid_depth")]
    pub grid_depth: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_q_grid")]
    pub q_grid: GridSpec,
    #[serde(default = "default_q_list")]
    pub q_list: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_cover_level")]
    pub cover_level: usize,
    #[serde(default = "default_scales")]
    pub scales: (usize, usize),
    #[serde(default = "default_energy_budget_factor")]
    pub energy_budget_factor: f64,
    #[serde(default = "default_energy_cover_level")]
    pub energy_cover_level: usize,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    /// Range of avoidance depths for the pressure convergence table.
    #[serde(default = "default_k_sweep")]
    pub k_sweep: (usize, usize),
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults are total")
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (s0, p0) = self.shape_params()?;
        if !(s0 - 1.0 / p0 > 0.0) {
            bail!("config requires s0 - 1/p0 > 0, got s0 = {s0}, p0 = {p0}");
        }
        if self.tree_depth as u32 > self.grid_depth {
            bail!(
                "tree depth {} exceeds grid depth {}",
                self.tree_depth,
                self.grid_depth
            );
        }
        if self.avoidance_depth < 2 {
            bail!("avoidance depth must be at least 2");
        }
        if self.q_list.is_empty() {
            bail!("q_list must not be empty");
        }
        self.q_grid.values()?;
        if self.k_sweep.0 < 2 || self.k_sweep.0 > self.k_sweep.1 {
            bail!("bad k_sweep {:?}", self.k_sweep);
        }
        Ok(())
    }

    fn shape_params(&self) -> Result<(f64, f64)> {
        let base = Fixture::builtin(&self.fixture)
            .map_err(|e| anyhow::anyhow!("{e} (known: {:?})", Fixture::builtin_ids()))?;
        Ok((self.s0.unwrap_or(base.s0), self.p0.unwrap_or(base.p0)))
    }

    /// Resolve the fixture with all overrides applied.
    pub fn fixture(&self) -> Result<Fixture> {
        let mut fx = Fixture::builtin(&self.fixture)
            .map_err(|e| anyhow::anyhow!("{e} (known: {:?})", Fixture::builtin_ids()))?;
        if let Some(spec) = &self.potential {
            fx.potential = match spec {
                PotentialSpec::Bernoulli { family, p } => {
                    if family != "bernoulli" {
                        bail!("unknown potential family `{family}`");
                    }
                    Potential::bernoulli(*p)?
                }
                PotentialSpec::Table { range, values } => {
                    Potential::from_table(*range, values.clone())?
                }
            };
        }
        if let Some(name) = &self.wavelet {
            fx.wavelet = WaveletKind::parse(name, self.grid_depth)?;
        }
        if let Some(s0) = self.s0 {
            fx.s0 = s0;
        }
        if let Some(p0) = self.p0 {
            fx.p0 = p0;
        }
        fx.sign_rule = SignRule::RademacherFromSeed;
        Ok(fx)
    }

    pub fn wavelet(&self) -> Result<MotherWavelet> {
        Ok(MotherWavelet::builtin(self.fixture()?.wavelet)?)
    }

    /// Zero set driving the avoidance subshifts: explicit override or the
    /// wavelet's own zeros.
    pub fn zero_set(&self) -> Result<ZeroSet> {
        match &self.zeros {
            Some(z) => Ok(ZeroSet::new(z.clone(), 1e-12)?),
            None => Ok(self.wavelet()?.zeros_on_unit()?),
        }
    }

    pub fn perturb_law(&self) -> PerturbLaw {
        PerturbLaw::UniformHalfToThreeHalves
    }

    pub fn verify_settings(&self) -> VerifySettings {
        VerifySettings {
            q_list: self.q_list.clone(),
            avoidance_depth: self.avoidance_depth,
            tree_depth: self.tree_depth,
            grid_depth: self.grid_depth,
            seed: self.seed,
            tol: self.tol,
            cover_level: self.cover_level,
            scales: (self.scales.0..=self.scales.1).collect(),
            energy_budget_factor: self.energy_budget_factor,
            energy_cover_level: self.energy_cover_level,
            tolerances: GapTolerances {
                h: self.tolerances.h,
                xi_star: self.tolerances.xi_star,
                dim_graph: self.tolerances.dim_graph,
                dim_range: self.tolerances.dim_range,
            },
        }
    }

    /// The resolved config as a single JSON line, for artifact echoes.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.fixture, "monofractal");
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn overrides_apply() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"fixture":"bernoulli","s0":0.7,"wavelet":"sinBump","seed":42}"#,
        )
        .unwrap();
        let fx = cfg.fixture().unwrap();
        assert_eq!(fx.s0, 0.7);
        assert_eq!(fx.wavelet, WaveletKind::SinBump);
    }

    #[test]
    fn bad_shape_rejected() {
        let cfg: RunConfig = serde_json::from_str(r#"{"s0":0.2,"p0":4.0}"#).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"fixtur":"x"}"#).is_err());
    }
}
