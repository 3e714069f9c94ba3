//! Zero sets of mother wavelets on `[0, 1]` and their root isolation.

use crate::error::{Error, Result};
use crate::symbolic::word::{dyadic_rank, DYADIC_RANK_MAX};

/// Default sampling grid for root isolation: `2^16` points.
pub const ROOT_GRID_POW: u32 = 16;
/// Default residual tolerance for accepting a root.
pub const ROOT_TOL: f64 = 1e-12;

/// A finite set of zeros in `[0, 1]`, strictly increasing.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    zeros: Vec<f64>,
    tolerance: f64,
}

impl ZeroSet {
    /// Build from explicit points. Sorts, deduplicates (within `tolerance`)
    /// and snaps near-dyadic entries onto the dyadic grid so that the
    /// forbidden-word construction sees exact grid points.
    pub fn new(mut zeros: Vec<f64>, tolerance: f64) -> Result<Self> {
        if tolerance <= 0.0 {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        for z in &zeros {
            if !(0.0..=1.0).contains(z) {
                return Err(Error::InvalidParameter(format!("zero {z} outside [0, 1]")));
            }
        }
        zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
        zeros.dedup_by(|a, b| (*a - *b).abs() <= tolerance);
        let snapped = zeros.iter().map(|&z| snap_to_dyadic(z, tolerance)).collect();
        Ok(ZeroSet { zeros: snapped, tolerance })
    }

    pub fn empty() -> Self {
        ZeroSet { zeros: Vec::new(), tolerance: ROOT_TOL }
    }

    pub fn points(&self) -> &[f64] {
        &self.zeros
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// Snap `x` to the coarsest dyadic grid point within `10 * tol`; bisection
/// tends to land on exact dyadics already, this cleans up the rest.
fn snap_to_dyadic(x: f64, tol: f64) -> f64 {
    let radius = (tol * 10.0).max(1e-11);
    for j in 0..=DYADIC_RANK_MAX {
        let cells = (1u64 << j) as f64;
        let snapped = (x * cells).round() / cells;
        if (snapped - x).abs() <= radius && (0.0..=1.0).contains(&snapped) {
            return snapped;
        }
    }
    x
}

/// Isolate the zeros of `f` on `[0, 1]` by sign-change bisection on a grid of
/// `2^grid_pow` cells, accepting points with `|f| <= tol`.
///
/// Runs of consecutive sub-tolerance grid points are one zero, not many:
/// compactly supported shapes underflow to 0 on a whole neighbourhood of their
/// support edges. A run touching an endpoint is attributed to that endpoint,
/// an interior run to its midpoint.
pub fn isolate_zeros<F: Fn(f64) -> f64>(f: F, grid_pow: u32, tol: f64) -> Result<ZeroSet> {
    let n = 1usize << grid_pow;
    let mut roots: Vec<f64> = Vec::new();
    let mut run_start: Option<usize> = None;
    let mut prev_v = 0.0f64;
    for i in 0..=n {
        let x = i as f64 / n as f64;
        let v = f(x);
        if v.abs() <= tol {
            if run_start.is_none() {
                run_start = Some(i);
            }
        } else {
            if let Some(s) = run_start.take() {
                roots.push(run_representative(s, i - 1, n));
            }
            if i > 0 && prev_v != 0.0 && prev_v.abs() > tol && prev_v.signum() != v.signum() {
                let lo = (i - 1) as f64 / n as f64;
                roots.push(bisect(&f, lo, x, tol));
            }
        }
        prev_v = v;
    }
    if let Some(s) = run_start.take() {
        roots.push(run_representative(s, n, n));
    }
    ZeroSet::new(roots, tol)
}

fn run_representative(start: usize, end: usize, n: usize) -> f64 {
    if start == 0 {
        0.0
    } else if end == n {
        1.0
    } else {
        (start + end) as f64 / (2 * n) as f64
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= tol || (hi - lo) < f64::EPSILON {
            return mid;
        }
        if flo.signum() != fm.signum() {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// True when `x` lies in `lambda(Sigma_*)`, i.e. is dyadic of recognised rank
/// and strictly below 1 (no finite word maps to 1).
pub fn is_dyadic_image(x: f64) -> bool {
    dyadic_rank(x).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_zeros_found_and_snapped() {
        let zs = isolate_zeros(|x| (2.0 * std::f64::consts::PI * x).sin(), 16, ROOT_TOL).unwrap();
        assert_eq!(zs.points().len(), 3);
        assert_eq!(zs.points()[0], 0.0);
        assert_eq!(zs.points()[1], 0.5);
        assert_eq!(zs.points()[2], 1.0);
    }

    #[test]
    fn non_dyadic_root_is_not_snapped() {
        let zs = isolate_zeros(|x| x - 1.0 / 3.0, 16, ROOT_TOL).unwrap();
        assert_eq!(zs.points().len(), 1);
        let r = zs.points()[0];
        assert!((r - 1.0 / 3.0).abs() < 1e-10);
        assert!(!is_dyadic_image(r));
    }

    #[test]
    fn zero_set_validation() {
        assert!(ZeroSet::new(vec![1.5], 1e-12).is_err());
        let zs = ZeroSet::new(vec![0.75, 0.25, 0.25], 1e-12).unwrap();
        assert_eq!(zs.points(), &[0.25, 0.75]);
    }
}
