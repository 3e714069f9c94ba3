//! Box-counting dimension estimates for graphs and ranges of sampled series.
//!
//! Box counts are upper-box surrogates: the slope of `log2 N_j` against `j`
//! over a scale window. Counts are exact on the sample set, so they are
//! monotone in `j` by construction.

use crate::error::{Error, Result};
use crate::geometry::cover::DyadicCover;
use crate::stats::fit_line;
use crate::synthesis::SampledSeries;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DimMethod {
    BoxGraph,
    BoxRange,
    EnergyScan,
}

/// A slope-fit dimension estimate with its per-scale counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimEstimate {
    pub value: f64,
    pub stderr: f64,
    pub scale_range: (usize, usize),
    pub counts: Vec<(usize, u64)>,
    pub method: DimMethod,
}

fn validate_scales(series: &SampledSeries, scales: &[usize]) -> Result<()> {
    if scales.len() < 4 {
        return Err(Error::TooFewScales { need: 4, got: scales.len() });
    }
    let g = series.grid_depth as usize;
    for &j in scales {
        if j < 4 || j + 2 > g {
            return Err(Error::InvalidParameter(format!(
                "scale {j} outside [4, {}]",
                g - 2
            )));
        }
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("scales must be strictly increasing".into()));
    }
    Ok(())
}

/// Sample-index ranges covered by the cover's intervals (whole grid when no
/// cover is given).
fn index_ranges(series: &SampledSeries, cover: Option<&DyadicCover>) -> Result<Vec<(usize, usize)>> {
    let n = (1u64 << series.grid_depth) as usize;
    match cover {
        None => Ok(vec![(0, n)]),
        Some(c) => {
            if c.is_empty() {
                return Err(Error::EmptyCover);
            }
            if c.level > series.grid_depth as usize {
                return Err(Error::InvalidParameter(format!(
                    "cover level {} finer than the grid depth {}",
                    c.level, series.grid_depth
                )));
            }
            let span = 1usize << (series.grid_depth as usize - c.level);
            Ok(c.words
                .iter()
                .map(|w| {
                    let lo = w.value() as usize * span;
                    (lo, lo + span)
                })
                .collect())
        }
    }
}

/// Number of `2^{-j} x 2^{-j}` boxes meeting the graph `{(x, f(x))}` over the
/// cover at a single scale `j`. The scale must not be coarser than the cover.
pub fn graph_box_count(
    series: &SampledSeries,
    cover: Option<&DyadicCover>,
    j: usize,
) -> Result<u64> {
    if let Some(c) = cover {
        if j < c.level {
            return Err(Error::InvalidParameter(format!(
                "scale {j} coarser than the cover level {}",
                c.level
            )));
        }
    }
    let ranges = index_ranges(series, cover)?;
    let g = series.grid_depth as usize;
    let cell = (1u64 << j) as f64;
    let per_col = 1usize << (g - j); // samples per column
    let mut total: u64 = 0;
    for &(lo, hi) in &ranges {
        let mut col_start = lo;
        while col_start < hi {
            let col_end = (col_start + per_col).min(hi);
            let mut mn = f64::INFINITY;
            let mut mx = f64::NEG_INFINITY;
            for s in &series.samples[col_start..=col_end.min(series.samples.len() - 1)] {
                mn = mn.min(*s);
                mx = mx.max(*s);
            }
            let lo_cell = (mn * cell).floor() as i64;
            let hi_cell = (mx * cell).floor() as i64;
            total += (hi_cell - lo_cell + 1) as u64;
            col_start = col_end;
        }
    }
    Ok(total)
}

/// Count `2^{-j} x 2^{-j}` boxes meeting the graph `{(x, f(x))}` over the
/// cover, then fit `log2 N_j` against `j`.
pub fn graph_box_dimension(
    series: &SampledSeries,
    cover: Option<&DyadicCover>,
    scales: &[usize],
) -> Result<DimEstimate> {
    validate_scales(series, scales)?;
    let mut counts = Vec::with_capacity(scales.len());
    for &j in scales {
        counts.push((j, graph_box_count(series, cover, j)?));
    }
    fit_counts(counts, scales, DimMethod::BoxGraph)
}

/// Number of length-`2^{-j}` intervals meeting the range `{f(x)}` over the
/// cover at a single scale. The series is continuous, so between adjacent
/// samples it passes through every intermediate value; counting the spanned
/// cell intervals avoids the saturation a bare point count hits once cells
/// shrink below the sample increments.
pub fn range_box_count(
    series: &SampledSeries,
    cover: Option<&DyadicCover>,
    j: usize,
) -> Result<u64> {
    let ranges = index_ranges(series, cover)?;
    let cell = (1u64 << j) as f64;
    let mut spans: Vec<(i64, i64)> = Vec::new();
    for &(lo, hi) in &ranges {
        let hi = hi.min(series.samples.len() - 2);
        for i in lo..=hi {
            let a = series.samples[i];
            let b = series.samples[i + 1];
            let (mn, mx) = if a <= b { (a, b) } else { (b, a) };
            spans.push(((mn * cell).floor() as i64, (mx * cell).floor() as i64));
        }
    }
    spans.sort_unstable();
    let mut total: u64 = 0;
    let mut covered_to = i64::MIN;
    for (lo_c, hi_c) in spans {
        let lo_c = lo_c.max(covered_to + 1);
        if hi_c >= lo_c {
            total += (hi_c - lo_c + 1) as u64;
            covered_to = hi_c;
        }
    }
    Ok(total)
}

/// Count length-`2^{-j}` intervals meeting the range `{f(x)}` over the cover.
pub fn range_box_dimension(
    series: &SampledSeries,
    cover: Option<&DyadicCover>,
    scales: &[usize],
) -> Result<DimEstimate> {
    validate_scales(series, scales)?;
    let mut counts = Vec::with_capacity(scales.len());
    for &j in scales {
        counts.push((j, range_box_count(series, cover, j)?));
    }
    fit_counts(counts, scales, DimMethod::BoxRange)
}

fn fit_counts(
    counts: Vec<(usize, u64)>,
    scales: &[usize],
    method: DimMethod,
) -> Result<DimEstimate> {
    let xs: Vec<f64> = counts.iter().map(|(j, _)| *j as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|(_, c)| (*c as f64).log2()).collect();
    let fit = fit_line(&xs, &ys);
    Ok(DimEstimate {
        value: fit.slope,
        stderr: fit.stderr,
        scale_range: (scales[0], *scales.last().unwrap()),
        counts,
        method,
    })
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

    #[test]
    fn smooth_graph_has_dimension_one() {
        let s = series_from_fn(12, |x| x);
        let scales: Vec<usize> = (5..=10).collect();
        let d = graph_box_dimension(&s, None, &scales).unwrap();
        assert!((d.value - 1.0).abs() < 0.05, "graph dim {}", d.value);
        let r = range_box_dimension(&s, None, &scales).unwrap();
        assert!((r.value - 1.0).abs() < 0.05, "range dim {}", r.value);
    }

    #[test]
    fn constant_series_dimensions() {
        let s = series_from_fn(12, |_| 0.37);
        let scales: Vec<usize> = (5..=10).collect();
        let d = graph_box_dimension(&s, None, &scales).unwrap();
        assert!((d.value - 1.0).abs() < 0.02, "graph dim {}", d.value);
        let r = range_box_dimension(&s, None, &scales).unwrap();
        assert!(r.value.abs() < 0.02, "range dim {}", r.value);
    }

    #[test]
    fn box_counts_monotone_in_scale() {
        let s = series_from_fn(12, |x| (23.0 * x).sin() * 0.4 + 0.5 * x);
        let scales: Vec<usize> = (5..=10).collect();
        let d = graph_box_dimension(&s, None, &scales).unwrap();
        for w in d.counts.windows(2) {
            assert!(w[1].1 >= w[0].1);
        }
    }

    #[test]
    fn empty_cover_is_an_error() {
        let s = series_from_fn(10, |x| x);
        let cover = DyadicCover { level: 4, words: vec![], provenance: "t".into() };
        assert!(matches!(
            graph_box_dimension(&s, Some(&cover), &[5, 6, 7, 8]),
            Err(Error::EmptyCover)
        ));
    }

    #[test]
    fn half_cover_of_identity_keeps_range_full() {
        let s = series_from_fn(12, |x| x);
        let words = (0..8u64)
            .map(|v| crate::symbolic::Word::from_value(v, 4).unwrap())
            .collect();
        let cover = DyadicCover { level: 4, words, provenance: "half".into() };
        let scales: Vec<usize> = (5..=10).collect();
        let r = range_box_dimension(&s, Some(&cover), &scales).unwrap();
        assert!((r.value - 1.0).abs() < 0.05, "range dim {}", r.value);
    }
}
