//! Exact Gibbs (equilibrium) measures for weighted subshifts.
//!
//! For a transitive subshift and a range-`m` potential, the equilibrium state
//! of `q * phi` is a stationary Markov chain on lifted states: words of depth
//! `d = max(m, k - 1)`. Pressure is the log of the leading eigenvalue of the
//! weighted transition matrix; cylinder masses come from the stationary vector
//! and the normalised transition rows, with no approximation beyond the eigen
//! solve itself.

use crate::error::{Error, Result};
use crate::stats::Kahan;
use crate::symbolic::sft::power_iteration;
use crate::symbolic::{Sft, Word};
use crate::thermo::potential::Potential;
use std::sync::OnceLock;

/// Default audit depth for the measured Gibbs constant.
const GIBBS_CONSTANT_LEVEL: usize = 10;

/// An equilibrium state `mu_{q phi}` on a transitive subshift.
#[derive(Debug)]
pub struct GibbsModel {
    sft: Sft,
    potential: Potential,
    q: f64,
    /// Lifted state depth `d = max(range, depth - 1)`.
    state_depth: usize,
    /// Lifted states: admissible depth-`d` words, numerically sorted.
    states: Vec<u64>,
    /// Successor indices (at most two per state).
    succ: Vec<Vec<usize>>,
    /// Pressure of `q * phi` in nats.
    pressure: f64,
    /// Right and left eigenvectors of the weighted matrix, L1-normalised.
    right: Vec<f64>,
    left: Vec<f64>,
    /// Stationary distribution over lifted states.
    stationary: Vec<f64>,
    /// Row-normalised transition probabilities aligned with `succ`.
    trans_prob: Vec<Vec<f64>>,
    gibbs_constant: OnceLock<f64>,
}

impl GibbsModel {
    pub fn new(sft: &Sft, potential: &Potential, q: f64) -> Result<Self> {
        if sft.is_empty() {
            return Err(Error::EmptySubshift);
        }
        if !sft.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let d = potential.range().max(sft.depth() - 1);
        let mut states: Vec<u64> = Vec::new();
        sft.for_each_admissible(d, |w| states.push(w.value()));
        debug_assert!(states.windows(2).all(|p| p[0] < p[1]));
        if states.is_empty() {
            return Err(Error::EmptySubshift);
        }
        let mask = (1u64 << d) - 1;
        let k = sft.depth();
        let state_of = |v: u64| states.binary_search(&v).ok();
        let base_mask = (1u64 << (k - 1)) - 1;
        let mut succ: Vec<Vec<usize>> = Vec::with_capacity(states.len());
        for &v in &states {
            let mut row = Vec::with_capacity(2);
            for bit in 0..2u64 {
                let next = ((v << 1) | bit) & mask;
                // Both endpoint words are admissible, so only the newest
                // k-factor needs checking: the base-level transition out of
                // the trailing (k-1)-window of v.
                let tail = v & base_mask;
                let tail_next = ((tail << 1) | bit) & base_mask;
                if sft.transition(tail, tail_next) {
                    if let Some(j) = state_of(next) {
                        row.push(j);
                    }
                }
            }
            succ.push(row);
        }
        // Transition weight depends on the source state only: exp(q * phi) on
        // its leading window.
        let m = potential.range();
        let weights: Vec<f64> = states
            .iter()
            .map(|&v| potential.weight_window(v >> (d - m), q))
            .collect();
        let (lambda, right, left) = power_iteration(&succ, &weights);
        let pressure = lambda.ln();

        // Stationary chain: pi = l .* r renormalised; P(a->b) = M(a,b) r_b /
        // (lambda r_a), rows renormalised to kill eigen-solve drift.
        let lr: f64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
        let stationary: Vec<f64> = left.iter().zip(&right).map(|(a, b)| a * b / lr).collect();
        let mut trans_prob: Vec<Vec<f64>> = Vec::with_capacity(states.len());
        for (i, row) in succ.iter().enumerate() {
            let mut probs: Vec<f64> = row
                .iter()
                .map(|&j| weights[i] * right[j] / (lambda * right[i]))
                .collect();
            let s: f64 = probs.iter().sum();
            if s > 0.0 && s != 1.0 {
                for p in probs.iter_mut() {
                    *p /= s;
                }
            }
            trans_prob.push(probs);
        }

        Ok(GibbsModel {
            sft: sft.clone(),
            potential: potential.clone(),
            q,
            state_depth: d,
            states,
            succ,
            pressure,
            right,
            left,
            stationary,
            trans_prob,
            gibbs_constant: OnceLock::new(),
        })
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn state_depth(&self) -> usize {
        self.state_depth
    }

    /// Topological pressure `P_X(q phi)` in nats.
    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    pub fn left_vector(&self) -> &[f64] {
        &self.left
    }

    pub fn right_vector(&self) -> &[f64] {
        &self.right
    }

    fn state_index(&self, v: u64) -> Option<usize> {
        self.states.binary_search(&v).ok()
    }

    /// Exact cylinder mass for `|w| >= state_depth`; 0 for inadmissible words,
    /// an error for shorter words (use `marginal` for those).
    pub fn cylinder(&self, w: &Word) -> Result<f64> {
        let d = self.state_depth;
        if w.len() < d {
            return Err(Error::WordShorterThanState { len: w.len(), depth: d });
        }
        Ok(self.cylinder_or_zero(w))
    }

    fn cylinder_or_zero(&self, w: &Word) -> f64 {
        let d = self.state_depth;
        let mask = (1u64 << d) - 1;
        let mut v = w.prefix(d).value();
        let Some(mut idx) = self.state_index(v) else {
            return 0.0;
        };
        let mut mass = self.stationary[idx];
        for i in d + 1..=w.len() {
            let bit = w.bit(i) as u64;
            let next = ((v << 1) | bit) & mask;
            let Some(j) = self.state_index(next) else {
                return 0.0;
            };
            let Some(pos) = self.succ[idx].iter().position(|&s| s == j) else {
                return 0.0;
            };
            mass *= self.trans_prob[idx][pos];
            v = next;
            idx = j;
        }
        mass
    }

    /// Cylinder mass for any word length; short words sum the stationary
    /// vector over their extension range.
    pub fn marginal(&self, w: &Word) -> f64 {
        let d = self.state_depth;
        if w.len() >= d {
            return self.cylinder_or_zero(w);
        }
        let lo = w.value() << (d - w.len());
        let hi = (w.value() + 1) << (d - w.len());
        let start = self.states.partition_point(|&s| s < lo);
        let end = self.states.partition_point(|&s| s < hi);
        let mut acc = Kahan::default();
        for i in start..end {
            acc.add(self.stationary[i]);
        }
        acc.value()
    }

    /// Sum of cylinder masses over a whole level; 1 up to eigen-solve drift.
    pub fn level_mass(&self, n: usize) -> f64 {
        let mut acc = Kahan::default();
        self.sft.for_each_admissible(n, |word| acc.add(self.marginal(word)));
        acc.value()
    }

    /// Exact Gibbs expectation of an arbitrary window table against the
    /// stationary measure (the table must have the potential's range).
    pub fn expectation(&self, table: &Potential) -> f64 {
        let d = self.state_depth;
        let m = table.range();
        debug_assert!(m <= d);
        let mut acc = Kahan::default();
        for (i, &v) in self.states.iter().enumerate() {
            acc.add(self.stationary[i] * table.eval_window(v >> (d - m)));
        }
        acc.value()
    }

    /// `E_{mu_{q phi}}[phi]`, the derivative of pressure in `q`.
    pub fn expectation_phi(&self) -> f64 {
        self.expectation(&self.potential)
    }

    /// Measured two-sided Gibbs constant: the worst ratio between cylinder
    /// masses and `exp(S_n(q phi) - n P)` over admissible words up to the
    /// audit level (default 10). Lazily cached.
    pub fn gibbs_constant(&self) -> f64 {
        *self
            .gibbs_constant
            .get_or_init(|| self.measure_gibbs_constant(GIBBS_CONSTANT_LEVEL.max(self.state_depth)))
    }

    /// Measure the Gibbs-inequality constant up to `level`.
    pub fn measure_gibbs_constant(&self, level: usize) -> f64 {
        let mut worst = 1.0f64;
        let m = self.potential.range();
        for n in self.state_depth..=level {
            self.sft.for_each_admissible(n, |w| {
                let mass = self.cylinder_or_zero(w);
                if mass <= 0.0 {
                    return;
                }
                // Extend w by m-1 admissible symbols so the Birkhoff sum over
                // n windows is defined; any in-cylinder representative works,
                // the constant absorbs the slack.
                let ext = self.extend_admissibly(w, m.saturating_sub(1));
                let s = self.q * self.potential.birkhoff_partial(&ext, n);
                let ratio = mass / (s - n as f64 * self.pressure).exp();
                worst = worst.max(ratio.max(1.0 / ratio));
            });
        }
        worst
    }

    fn extend_admissibly(&self, w: &Word, extra: usize) -> Word {
        let mut cur = *w;
        'outer: for _ in 0..extra {
            for bit in 0..2u8 {
                if let Ok(cand) = cur.push(bit) {
                    if self.sft.word_admissible(&cand) {
                        cur = cand;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        cur
    }

    /// Worst quasi-Bernoulli defect over admissible concatenations with both
    /// parts of length at most `half_level`.
    pub fn quasi_bernoulli_constant(&self, half_level: usize) -> f64 {
        let d = self.state_depth;
        let mut worst = 1.0f64;
        let lo = d.max(1);
        for n1 in lo..=half_level {
            let lefts = self.sft.enumerate_admissible(n1);
            for n2 in lo..=half_level {
                let rights = self.sft.enumerate_admissible(n2);
                for wl in &lefts {
                    let ml = self.cylinder_or_zero(wl);
                    if ml == 0.0 {
                        continue;
                    }
                    for wr in &rights {
                        let cat = wl.concat(wr).unwrap();
                        let mc = self.cylinder_or_zero(&cat);
                        if mc == 0.0 {
                            continue;
                        }
                        let mr = self.cylinder_or_zero(wr);
                        let ratio = mc / (ml * mr);
                        worst = worst.max(ratio.max(1.0 / ratio));
                    }
                }
            }
        }
        worst
    }
}

impl Potential {
    /// Birkhoff sum of the first `terms` windows of `w` (which must carry at
    /// least `terms + range - 1` symbols).
    pub(crate) fn birkhoff_partial(&self, w: &Word, terms: usize) -> f64 {
        let m = self.range();
        debug_assert!(w.len() + 1 >= terms + m);
        let mask = (1u64 << m) - 1;
        let mut window = w.prefix(m).value();
        let mut acc = self.eval_window(window);
        for t in 1..terms {
            window = ((window << 1) | w.bit(m + t) as u64) & mask;
            acc += self.eval_window(window);
        }
        acc
    }
}
