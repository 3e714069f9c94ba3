//! Small least-squares helpers shared by the estimators.

/// Result of a straight-line fit `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (residual based; 0 when fewer than 3 points).
    pub stderr: f64,
    /// Coefficient of determination; 1 for a perfect fit, 1 when y is constant.
    pub r2: f64,
    pub points: usize,
}

/// Ordinary least squares over `(x, y)` pairs. Panics on fewer than 2 points.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let w: Vec<f64> = vec![1.0; xs.len()];
    fit_line_weighted(xs, ys, &w)
}

/// Weighted least squares; weights must be positive.
pub fn fit_line_weighted(xs: &[f64], ys: &[f64], ws: &[f64]) -> LineFit {
    assert!(xs.len() == ys.len() && xs.len() == ws.len());
    assert!(xs.len() >= 2, "need at least two points for a line fit");
    let wsum: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / wsum;
    let ybar = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / wsum;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..xs.len() {
        let dx = xs[i] - xbar;
        let dy = ys[i] - ybar;
        sxx += ws[i] * dx * dx;
        sxy += ws[i] * dx * dy;
        syy += ws[i] * dy * dy;
    }
    assert!(sxx > 0.0, "degenerate abscissa in line fit");
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res = (syy - slope * sxy).max(0.0);
    let n = xs.len();
    let stderr = if n > 2 {
        (ss_res / ((n - 2) as f64) / sxx).sqrt()
    } else {
        0.0
    };
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LineFit { slope, intercept, stderr, r2, points: n }
}

/// Largest-magnitude violation of concavity in a sampled curve, measured as the
/// increase between consecutive chord slopes. Returns `(index, excess)` for the
/// worst offender or `None` when the grid has fewer than 3 points.
pub fn concavity_excess(grid: &[f64], values: &[f64]) -> Option<(usize, f64)> {
    if grid.len() < 3 {
        return None;
    }
    let mut worst: Option<(usize, f64)> = None;
    let mut prev = (values[1] - values[0]) / (grid[1] - grid[0]);
    for i in 1..grid.len() - 1 {
        let next = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
        let excess = next - prev;
        if worst.map_or(true, |(_, w)| excess > w) {
            worst = Some((i, excess));
        }
        prev = next;
    }
    worst
}

/// Pool-adjacent-violators projection of chord slopes, producing the closest
/// nonincreasing slope sequence in the chord-length metric. Returns the
/// concavified values (anchored at `values[0]`) and the largest pointwise
/// correction applied.
pub fn concavify(grid: &[f64], values: &[f64]) -> (Vec<f64>, f64) {
    let n = grid.len();
    if n < 3 {
        return (values.to_vec(), 0.0);
    }
    // Blocks of pooled slopes: (weight, mean, count).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let w = grid[i + 1] - grid[i];
        let s = (values[i + 1] - values[i]) / w;
        blocks.push((w, s, 1));
        // Enforce nonincreasing means: merge while the tail increases.
        while blocks.len() >= 2 {
            let (w2, s2, c2) = blocks[blocks.len() - 1];
            let (w1, s1, c1) = blocks[blocks.len() - 2];
            if s2 <= s1 {
                break;
            }
            let w = w1 + w2;
            let s = (w1 * s1 + w2 * s2) / w;
            blocks.truncate(blocks.len() - 2);
            blocks.push((w, s, c1 + c2));
        }
    }
    let mut out = Vec::with_capacity(n);
    out.push(values[0]);
    let mut idx = 0;
    for &(_, s, count) in &blocks {
        for _ in 0..count {
            let w = grid[idx + 1] - grid[idx];
            let last = *out.last().unwrap();
            out.push(last + s * w);
            idx += 1;
        }
    }
    let correction = out
        .iter()
        .zip(values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    (out, correction)
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let fit = fit_line(&xs, &ys);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!(fit.r2 > 1.0 - 1e-12);
    }

    #[test]
    fn concavify_fixes_a_bump() {
        let grid: Vec<f64> = (0..5).map(|i| i as f64).collect();
        // Slopes 1, 2, -1, 0 -> the 1,2 pair violates concavity.
        let values = vec![0.0, 1.0, 3.0, 2.0, 2.0];
        let (fixed, corr) = concavify(&grid, &values);
        assert!(corr > 0.0);
        let worst = concavity_excess(&grid, &fixed).map(|(_, e)| e).unwrap();
        assert!(worst <= 1e-12);
    }

    #[test]
    fn kahan_handles_cancellation() {
        let mut acc = Kahan::default();
        acc.add(1e16);
        acc.add(1.0);
        acc.add(-1e16);
        assert_eq!(acc.value(), 1.0);
    }
}
