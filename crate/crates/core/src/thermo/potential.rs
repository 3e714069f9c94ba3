//! Locally constant potentials of finite range.
//!
//! A range-`m` potential depends on the first `m` symbols of a sequence only.
//! This is the subclass of Holder potentials for which pressure, Gibbs
//! cylinder masses and their derivatives all reduce to exact finite linear
//! algebra; nothing here approximates.

use crate::error::{Error, Result};
use crate::symbolic::Word;

#[derive(Debug, Clone)]
pub struct Potential {
    range: usize,
    values: Vec<f64>,
    /// `exp(values)`, anchored exactly where the constructor knows the exact
    /// exponential (Bernoulli weights). Transfer matrices weight by
    /// `weights^q` rather than `exp(q values)` so that product measures come
    /// out bit-exact.
    weights: Vec<f64>,
}

impl Potential {
    /// Table of `2^range` values indexed by the leading window, MSB first.
    pub fn from_table(range: usize, values: Vec<f64>) -> Result<Self> {
        if range == 0 || range > 16 {
            return Err(Error::InvalidParameter(format!("potential range {range} out of 1..=16")));
        }
        if values.len() != 1 << range {
            return Err(Error::InvalidParameter(format!(
                "expected {} values for range {range}, got {}",
                1 << range,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("potential values must be finite".into()));
        }
        let weights = values.iter().map(|v| v.exp()).collect();
        Ok(Potential { range, values, weights })
    }

    /// The constant potential. Degenerate (its Gibbs measure is the measure of
    /// maximal entropy regardless of the constant), kept for fixtures.
    pub fn constant(c: f64) -> Self {
        Potential { range: 1, values: vec![c, c], weights: vec![c.exp(), c.exp()] }
    }

    /// `phi(0) = ln p`, `phi(1) = ln(1 - p)`: the Bernoulli(p) weights whose
    /// full-shift Gibbs measure is the (p, 1-p) product measure.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0 < p && p < 1.0) {
            return Err(Error::InvalidParameter(format!("bernoulli p = {p} outside (0, 1)")));
        }
        Ok(Potential {
            range: 1,
            values: vec![p.ln(), (1.0 - p).ln()],
            weights: vec![p, 1.0 - p],
        })
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// All table entries equal: flagged, not rejected.
    pub fn is_degenerate(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Evaluate on a window given as the numeric value of `range` bits.
    #[inline]
    pub fn eval_window(&self, window: u64) -> f64 {
        self.values[window as usize]
    }

    /// `exp(q phi)` on a window, via the anchored weight table.
    #[inline]
    pub fn weight_window(&self, window: u64, q: f64) -> f64 {
        self.weights[window as usize].powf(q)
    }

    /// Exact Birkhoff sum of the potential along a finite word: the sum of
    /// the `|w| - m + 1` sliding windows.
    pub fn birkhoff_sum(&self, w: &Word) -> Result<f64> {
        let n = w.len();
        let m = self.range;
        if n < m {
            return Err(Error::WordShorterThanRange { len: n, range: m });
        }
        let mut acc = 0.0;
        let mask = (1u64 << m) - 1;
        let mut window = w.prefix(m).value();
        acc += self.eval_window(window);
        for i in m + 1..=n {
            window = ((window << 1) | w.bit(i) as u64) & mask;
            acc += self.eval_window(window);
        }
        Ok(acc)
    }
}
