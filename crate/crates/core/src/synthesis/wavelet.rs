//! Built-in mother wavelets.
//!
//! Three shapes cover the needs of the synthesizer:
//!
//! * `gauss2` — the second Hermite function `(1 - x^2) exp(-x^2 / 2)`,
//!   smooth with Gaussian decay, a single zero on `[0, 1]` (at 1);
//! * `sinBump` — `sin(2 pi x)` times a smooth bump supported on `[0, 1]`,
//!   compact support, zeros at `{0, 1/2, 1}`;
//! * `cascadeDbN` — a Daubechies wavelet with `N` vanishing moments,
//!   tabulated on a dyadic grid by the cascade algorithm and evaluable only
//!   there. It restores orthogonality at the price of grid-only evaluation.
//!
//! None of the closed-form kinds generates an orthogonal basis; the analysis
//! layer never consumes orthogonality, so this is a deliberate gap.

use crate::error::{Error, Result};
use crate::symbolic::zeros::{isolate_zeros, ZeroSet, ROOT_GRID_POW, ROOT_TOL};
use crate::symbolic::Sft;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Identifier of a built-in mother wavelet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum WaveletKind {
    Gauss2,
    SinBump,
    CascadeDb { vanishing_moments: u32, grid_depth: u32 },
}

impl WaveletKind {
    pub fn parse(name: &str, grid_depth: u32) -> Result<WaveletKind> {
        match name {
            "gauss2" => Ok(WaveletKind::Gauss2),
            "sinBump" => Ok(WaveletKind::SinBump),
            _ => {
                if let Some(n) = name.strip_prefix("cascadeDb") {
                    let vm: u32 = n
                        .parse()
                        .map_err(|_| Error::UnknownWaveletKind(name.to_string()))?;
                    Ok(WaveletKind::CascadeDb { vanishing_moments: vm, grid_depth })
                } else {
                    Err(Error::UnknownWaveletKind(name.to_string()))
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            WaveletKind::Gauss2 => "gauss2".into(),
            WaveletKind::SinBump => "sinBump".into(),
            WaveletKind::CascadeDb { vanishing_moments, .. } => {
                format!("cascadeDb{vanishing_moments}")
            }
        }
    }
}

/// A pointwise-evaluable mother wavelet with its derivative and decay data.
#[derive(Debug, Clone)]
pub struct MotherWavelet {
    kind: WaveletKind,
    /// Guaranteed smoothness order (derivative count); the closed-form kinds
    /// are infinitely smooth and report a nominal cap.
    smoothness: u32,
    /// Effective support: `|psi| < 1e-30` outside `[lo, hi]`.
    support: (f64, f64),
    sup_abs: f64,
    /// Lipschitz constant on the effective support.
    lipschitz: f64,
    /// Tabulated values for the cascade kind.
    table: Option<Vec<f64>>,
}

fn gauss2(x: f64) -> f64 {
    (1.0 - x * x) * (-0.5 * x * x).exp()
}

fn gauss2_d(x: f64) -> f64 {
    (x * x * x - 3.0 * x) * (-0.5 * x * x).exp()
}

fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (4.0 * x * (1.0 - x))).exp()
    }
}

fn sin_bump(x: f64) -> f64 {
    (2.0 * PI * x).sin() * bump(x)
}

fn sin_bump_d(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let u = 4.0 * x * (1.0 - x);
    let du = 4.0 - 8.0 * x;
    let b = bump(x);
    2.0 * PI * (2.0 * PI * x).cos() * b + (2.0 * PI * x).sin() * b * du / (u * u)
}

/// Daubechies lowpass filters (orthonormal, `sum h = sqrt 2`).
fn db_filter(n: u32) -> Result<Vec<f64>> {
    let s2 = std::f64::consts::SQRT_2;
    let f: Vec<f64> = match n {
        2 => {
            let s3 = 3f64.sqrt();
            vec![
                (1.0 + s3) / (4.0 * s2),
                (3.0 + s3) / (4.0 * s2),
                (3.0 - s3) / (4.0 * s2),
                (1.0 - s3) / (4.0 * s2),
            ]
        }
        3 => vec![
            0.332670552950957,
            0.806891509313339,
            0.459877502119331,
            -0.135011020010391,
            -0.085441273882241,
            0.035226291882101,
        ],
        4 => vec![
            0.230377813308855,
            0.714846570552542,
            0.630880767929590,
            -0.027983769416984,
            -0.187034811718881,
            0.030841381835987,
            0.032883011666983,
            -0.010597401784997,
        ],
        _ => {
            return Err(Error::UnknownWaveletKind(format!(
                "cascadeDb{n} (supported: 2, 3, 4)"
            )))
        }
    };
    Ok(f)
}

/// Cascade iteration: tabulate the scaling function on `[0, 2N-1]` at
/// resolution `2^-g`, then assemble the wavelet from the highpass filter.
fn cascade_table(n: u32, g: u32) -> Result<Vec<f64>> {
    let h = db_filter(n)?;
    let len = h.len(); // 2N taps, support [0, 2N-1]
    let width = len - 1;
    let s2 = std::f64::consts::SQRT_2;

    // phi on integer grid first: eigenvector of the integer refinement matrix,
    // obtained by iterating from a box profile (simple and robust here).
    let cells = |depth: u32| width * (1usize << depth);
    let mut depth = 0u32;
    let mut phi: Vec<f64> = vec![0.0; cells(0) + 1];
    for (i, v) in phi.iter_mut().enumerate() {
        // Start from a hat profile over the support.
        let x = i as f64 / cells(0) as f64;
        *v = 1.0 - (2.0 * x - 1.0).abs();
    }
    // Refine up to the requested depth, applying the two-scale relation and
    // doubling the grid each round; extra smoothing sweeps at the final depth
    // let the fixed point settle.
    while depth < g {
        let fine = cells(depth + 1);
        let mut next = vec![0.0; fine + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let x = i as f64 * width as f64 / fine as f64;
            let mut acc = 0.0;
            for (t, &hk) in h.iter().enumerate() {
                let arg = 2.0 * x - t as f64;
                if (0.0..=width as f64).contains(&arg) {
                    let pos = arg / width as f64 * cells(depth) as f64;
                    let lo = pos.floor() as usize;
                    let frac = pos - lo as f64;
                    let v = if lo + 1 <= cells(depth) {
                        phi[lo] * (1.0 - frac) + phi[lo + 1] * frac
                    } else {
                        phi[lo]
                    };
                    acc += s2 * hk * v;
                }
            }
            *slot = acc;
        }
        phi = next;
        depth += 1;
    }
    for _ in 0..30 {
        let fine = cells(depth);
        let mut next = vec![0.0; fine + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let x = i as f64 * width as f64 / fine as f64;
            let mut acc = 0.0;
            for (t, &hk) in h.iter().enumerate() {
                let arg = 2.0 * x - t as f64;
                if (0.0..=width as f64).contains(&arg) {
                    let pos = arg / width as f64 * fine as f64;
                    let lo = pos.floor() as usize;
                    let frac = pos - lo as f64;
                    let v = if lo + 1 <= fine {
                        phi[lo] * (1.0 - frac) + phi[lo + 1] * frac
                    } else {
                        phi[lo]
                    };
                    acc += s2 * hk * v;
                }
            }
            *slot = acc;
        }
        phi = next;
    }

    // Wavelet: psi(x) = sqrt2 sum_k g_k phi(2x - k), g_k = (-1)^k h_{len-1-k}.
    let fine = cells(g);
    let mut psi = vec![0.0; fine + 1];
    for (i, slot) in psi.iter_mut().enumerate() {
        let x = i as f64 * width as f64 / fine as f64;
        let mut acc = 0.0;
        for k in 0..len {
            let gk = if k % 2 == 0 { 1.0 } else { -1.0 } * h[len - 1 - k];
            let arg = 2.0 * x - k as f64;
            if (0.0..=width as f64).contains(&arg) {
                let pos = arg / width as f64 * fine as f64;
                let lo = pos.floor() as usize;
                let frac = pos - lo as f64;
                let v = if lo + 1 <= fine {
                    phi[lo] * (1.0 - frac) + phi[lo + 1] * frac
                } else {
                    phi[lo]
                };
                acc += s2 * gk * v;
            }
        }
        *slot = acc;
    }
    Ok(psi)
}

impl MotherWavelet {
    /// Construct a built-in wavelet.
    pub fn builtin(kind: WaveletKind) -> Result<Self> {
        match kind {
            WaveletKind::Gauss2 => {
                let (sup, lip) = scan_sup_lip(gauss2, gauss2_d, -12.0, 12.0);
                Ok(MotherWavelet {
                    kind,
                    smoothness: 16,
                    support: (-12.0, 12.0),
                    sup_abs: sup,
                    lipschitz: lip,
                    table: None,
                })
            }
            WaveletKind::SinBump => {
                let (sup, lip) = scan_sup_lip(sin_bump, sin_bump_d, 0.0, 1.0);
                Ok(MotherWavelet {
                    kind,
                    smoothness: 16,
                    support: (0.0, 1.0),
                    sup_abs: sup,
                    lipschitz: lip,
                    table: None,
                })
            }
            WaveletKind::CascadeDb { vanishing_moments, grid_depth } => {
                if grid_depth == 0 || grid_depth > 24 {
                    return Err(Error::InvalidParameter(format!(
                        "cascade grid depth {grid_depth} out of 1..=24"
                    )));
                }
                let table = cascade_table(vanishing_moments, grid_depth)?;
                let width = (2 * vanishing_moments - 1) as f64;
                let sup = table.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let step = width / (table.len() - 1) as f64;
                let lip = table
                    .windows(2)
                    .map(|w| (w[1] - w[0]).abs() / step)
                    .fold(0.0f64, f64::max);
                Ok(MotherWavelet {
                    kind,
                    smoothness: if vanishing_moments >= 3 { 1 } else { 0 },
                    support: (0.0, width),
                    sup_abs: sup,
                    lipschitz: lip,
                    table: Some(table),
                })
            }
        }
    }

    pub fn by_name(name: &str, grid_depth: u32) -> Result<Self> {
        Self::builtin(WaveletKind::parse(name, grid_depth)?)
    }

    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn sup_abs(&self) -> f64 {
        self.sup_abs
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Number of translates `psi(2^j x - k)`, `k` integer, that can be nonzero
    /// at a fixed `x`.
    pub fn overlap_count(&self) -> usize {
        (self.support.1 - self.support.0).ceil() as usize + 1
    }

    /// Pointwise value. Tabulated kinds reject off-grid arguments.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.kind {
            WaveletKind::Gauss2 => Ok(gauss2(x)),
            WaveletKind::SinBump => Ok(sin_bump(x)),
            WaveletKind::CascadeDb { vanishing_moments, grid_depth } => {
                let table = self.table.as_ref().unwrap();
                let width = (2 * vanishing_moments - 1) as f64;
                if !(self.support.0..=self.support.1).contains(&x) {
                    return Ok(0.0);
                }
                let pos = x / width * (table.len() - 1) as f64;
                let idx = pos.round();
                if (pos - idx).abs() > 1e-9 {
                    return Err(Error::OffGridEvaluation(x));
                }
                let _ = grid_depth;
                Ok(table[idx as usize])
            }
        }
    }

    /// Pointwise derivative; central difference on the grid for tabulated
    /// kinds.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        match self.kind {
            WaveletKind::Gauss2 => Ok(gauss2_d(x)),
            WaveletKind::SinBump => Ok(sin_bump_d(x)),
            WaveletKind::CascadeDb { vanishing_moments, .. } => {
                let table = self.table.as_ref().unwrap();
                let width = (2 * vanishing_moments - 1) as f64;
                if !(self.support.0..=self.support.1).contains(&x) {
                    return Ok(0.0);
                }
                let step = width / (table.len() - 1) as f64;
                let pos = x / step;
                let idx = pos.round();
                if (pos - idx).abs() > 1e-9 {
                    return Err(Error::OffGridEvaluation(x));
                }
                let i = idx as usize;
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(table.len() - 1);
                Ok((table[hi] - table[lo]) / ((hi - lo) as f64 * step))
            }
        }
    }

    /// Upper bound on `|psi|` at distance `r` from the support centre.
    pub fn decay_bound(&self, r: f64) -> f64 {
        match self.kind {
            WaveletKind::Gauss2 => (1.0 + r * r) * (-0.5 * r * r).exp(),
            _ => {
                let half = 0.5 * (self.support.1 - self.support.0);
                if r > half {
                    0.0
                } else {
                    self.sup_abs
                }
            }
        }
    }

    /// Zeros on `[0, 1]` by root isolation (grid points for tabulated kinds).
    pub fn zeros_on_unit(&self) -> Result<ZeroSet> {
        match self.kind {
            WaveletKind::Gauss2 => isolate_zeros(gauss2, ROOT_GRID_POW, ROOT_TOL),
            WaveletKind::SinBump => isolate_zeros(sin_bump, ROOT_GRID_POW, ROOT_TOL),
            WaveletKind::CascadeDb { vanishing_moments, .. } => {
                let table = self.table.as_ref().unwrap();
                let width = (2 * vanishing_moments - 1) as f64;
                let m = table.len() - 1;
                let mut roots = Vec::new();
                let upto = ((m as f64) / width).floor() as usize; // x <= 1
                let val = |i: usize| table[i];
                if val(0).abs() <= 1e-9 {
                    roots.push(0.0);
                }
                for i in 1..=upto {
                    let x = i as f64 * width / m as f64;
                    if val(i).abs() <= 1e-9 {
                        roots.push(x.min(1.0));
                    } else if val(i - 1).signum() != val(i).signum() && val(i - 1).abs() > 1e-9 {
                        let x0 = (i - 1) as f64 * width / m as f64;
                        let t = val(i - 1).abs() / (val(i - 1).abs() + val(i).abs());
                        roots.push((x0 + t * (x - x0)).min(1.0));
                    }
                }
                ZeroSet::new(roots, 1e-9)
            }
        }
    }
}

fn scan_sup_lip(f: fn(f64) -> f64, df: fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let n = 20_000;
    let mut sup = 0.0f64;
    let mut lip = 0.0f64;
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        sup = sup.max(f(x).abs());
        lip = lip.max(df(x).abs());
    }
    (sup, lip)
}

/// Measured clearance constant: the minimum of `|psi(lambda(w))|` over the
/// admissible words of the zero-avoiding subshift at levels `k ..= n_max`.
/// Strictly positive when the subshift actually clears the zero set; zero or
/// negative clearance is the error path (depth too small, or the subshift was
/// built for a different zero set).
pub fn zero_clearance(psi: &MotherWavelet, avoid: &Sft, k: usize, n_max: usize) -> Result<f64> {
    if n_max < k {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} below k = {k}")));
    }
    if avoid.is_empty() {
        return Err(Error::EmptySubshift);
    }
    let mut min_abs = f64::INFINITY;
    let mut min_word = None;
    for n in k..=n_max {
        let mut err = None;
        avoid.for_each_admissible(n, |w| {
            if err.is_some() {
                return;
            }
            match psi.eval(w.lambda()) {
                Ok(v) => {
                    if v.abs() < min_abs {
                        min_abs = v.abs();
                        min_word = Some(*w);
                    }
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    if min_abs <= 0.0 {
        return Err(Error::ZeroClearanceFailed {
            word: min_word.map(|w| w.to_string()).unwrap_or_default(),
            value: min_abs,
        });
    }
    Ok(min_abs)
}
