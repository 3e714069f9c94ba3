//! Subshifts of finite type over the binary alphabet.
//!
//! A depth-`k` subshift is described by its forbidden words of length `k`.
//! States are the words of length `k - 1`; the transition `a -> b` exists when
//! `b` is the one-step shift of `a` and the glued `k`-word is not forbidden.
//! A subshift may additionally be restricted to a subset of states, which is
//! how transitive components are represented.

use crate::error::{Error, Result};
use crate::symbolic::word::Word;
use crate::symbolic::zeros::{is_dyadic_image, ZeroSet};
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// Relative tolerance of the spectral-radius power iteration.
pub const EIGEN_TOL: f64 = 1e-14;
const EIGEN_MAX_ITER: usize = 500_000;

/// The forbidden words around one zero: the single covering word for
/// non-dyadic points, the covering word and its left neighbour for dyadic
/// ones (both cylinders touch the zero).
pub fn forbidden_words_at(x: f64, k: usize) -> Result<BTreeSet<Word>> {
    if k < 2 {
        return Err(Error::DepthTooSmall(k));
    }
    let mut out = BTreeSet::new();
    let wk = crate::symbolic::word::word_at(x, k)?;
    if is_dyadic_image(x) {
        // All w with 0 <= lambda(x|_k) - lambda(w) <= 2^{-k}.
        out.insert(wk);
        if wk.value() > 0 {
            out.insert(Word::from_value(wk.value() - 1, k)?);
        }
    } else {
        out.insert(wk);
    }
    Ok(out)
}

/// Union of the per-zero forbidden sets.
pub fn forbidden_words(zeros: &ZeroSet, k: usize) -> Result<BTreeSet<Word>> {
    if k < 2 {
        return Err(Error::DepthTooSmall(k));
    }
    let mut out = BTreeSet::new();
    for &x in zeros.points() {
        out.extend(forbidden_words_at(x, k)?);
    }
    Ok(out)
}

/// Cached Perron-Frobenius data of the (unweighted) transition matrix.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub value: f64,
    /// Right eigenvector on the allowed states, L1-normalised.
    pub right: Vec<f64>,
    /// Left eigenvector on the allowed states, L1-normalised.
    pub left: Vec<f64>,
}

/// A binary subshift of finite type, possibly restricted to a state subset.
#[derive(Debug)]
pub struct Sft {
    depth: usize,
    forbidden: Vec<Word>,
    forbidden_mask: Vec<bool>,
    /// States (depth-1 words, indexed by numeric value) in this restriction.
    allowed: Vec<bool>,
    /// Allowed states from which an infinite admissible path exists.
    live: Vec<bool>,
    eigen: OnceLock<EigenData>,
}

impl Clone for Sft {
    fn clone(&self) -> Self {
        Sft {
            depth: self.depth,
            forbidden: self.forbidden.clone(),
            forbidden_mask: self.forbidden_mask.clone(),
            allowed: self.allowed.clone(),
            live: self.live.clone(),
            eigen: OnceLock::new(),
        }
    }
}

/// Build the depth-`k` subshift avoiding `forbidden`. An empty result is a
/// valid (reported) outcome, not an error.
pub fn build_sft(forbidden: &BTreeSet<Word>, k: usize) -> Result<Sft> {
    if k < 2 {
        return Err(Error::DepthTooSmall(k));
    }
    for w in forbidden {
        if w.len() != k {
            return Err(Error::MixedForbiddenLengths { expected: k, found: w.len() });
        }
    }
    let mut mask = vec![false; 1usize << k];
    for w in forbidden {
        mask[w.value() as usize] = true;
    }
    let nstates = 1usize << (k - 1);
    let allowed = vec![true; nstates];
    let mut sft = Sft {
        depth: k,
        forbidden: forbidden.iter().copied().collect(),
        forbidden_mask: mask,
        allowed,
        live: Vec::new(),
        eigen: OnceLock::new(),
    };
    sft.recompute_live();
    Ok(sft)
}

/// Convenience: the full shift, encoded at depth `k` with nothing forbidden.
pub fn full_shift(k: usize) -> Result<Sft> {
    build_sft(&BTreeSet::new(), k)
}

impl Sft {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn state_len(&self) -> usize {
        self.depth - 1
    }

    pub fn state_count(&self) -> usize {
        self.allowed.len()
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn is_state_allowed(&self, state: u64) -> bool {
        self.allowed[state as usize]
    }

    /// Transition predicate on states (values of depth-1 words), including the
    /// restriction to allowed states.
    pub fn transition(&self, a: u64, b: u64) -> bool {
        let d = self.state_len();
        if !self.allowed[a as usize] || !self.allowed[b as usize] {
            return false;
        }
        // b must be the shift of a with one new symbol.
        if d > 1 {
            let mask = (1u64 << (d - 1)) - 1;
            if (a & mask) != (b >> 1) {
                return false;
            }
        }
        let glued = (a << 1) | (b & 1);
        !self.forbidden_mask[glued as usize]
    }

    fn successors(&self, a: u64) -> impl Iterator<Item = u64> + '_ {
        let d = self.state_len();
        let mask = (1u64 << d) - 1;
        (0..2u64).filter_map(move |bit| {
            let b = ((a << 1) | bit) & mask;
            if self.transition(a, b) {
                Some(b)
            } else {
                None
            }
        })
    }

    /// Recompute the set of states with an infinite forward path (iteratively
    /// strip states whose every successor is dead).
    fn recompute_live(&mut self) {
        let n = self.state_count();
        let mut live = self.allowed.clone();
        loop {
            let mut changed = false;
            for a in 0..n as u64 {
                if !live[a as usize] {
                    continue;
                }
                let any = self
                    .successors(a)
                    .any(|b| live[b as usize]);
                if !any {
                    live[a as usize] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.live = live;
    }

    pub fn is_empty(&self) -> bool {
        !self.live.iter().any(|&l| l)
    }

    /// Does the cylinder of `w` meet the subshift? True when every factor is
    /// admissible, every state window lies in the restriction and the final
    /// state extends forward forever.
    pub fn word_admissible(&self, w: &Word) -> bool {
        let d = self.state_len();
        let n = w.len();
        if n < d {
            // Positive iff some live state has w as prefix.
            let lo = w.value() << (d - n);
            let hi = (w.value() + 1) << (d - n);
            return (lo..hi).any(|s| self.live[s as usize]);
        }
        let mut state = w.prefix(d).value();
        if !self.allowed[state as usize] {
            return false;
        }
        let mask = (1u64 << d) - 1;
        for i in d + 1..=n {
            let next = ((state << 1) | w.bit(i) as u64) & mask;
            if !self.transition(state, next) {
                return false;
            }
            state = next;
        }
        self.live[state as usize]
    }

    /// Visit every admissible word at level `n` in lexicographic order.
    pub fn for_each_admissible<F: FnMut(&Word)>(&self, n: usize, mut f: F) {
        let d = self.state_len();
        if self.is_empty() {
            return;
        }
        if n == 0 {
            f(&Word::empty());
            return;
        }
        if n < d {
            for v in 0..(1u64 << n) {
                let w = Word::from_value(v, n).unwrap();
                if self.word_admissible(&w) {
                    f(&w);
                }
            }
            return;
        }
        // DFS over state paths, emitting in lexicographic order.
        let mask = (1u64 << d) - 1;
        let mut stack: Vec<(u64, usize)> = Vec::new();
        for v in (0..(1u64 << d)).rev() {
            if self.allowed[v as usize] && self.live[v as usize] && self.state_path_ok(v) {
                stack.push((v, d));
            }
        }
        while let Some((bits, len)) = stack.pop() {
            if len == n {
                let w = Word::from_value(bits, n).unwrap();
                if self.live[(bits & mask) as usize] {
                    f(&w);
                }
                continue;
            }
            let state = bits & mask;
            for bit in (0..2u64).rev() {
                let next = ((state << 1) | bit) & mask;
                if self.transition(state, next) {
                    stack.push(((bits << 1) | bit, len + 1));
                }
            }
        }
    }

    /// Check that all internal windows of a depth-length word are admissible
    /// (needed for the DFS roots, whose own factors must be verified once).
    fn state_path_ok(&self, v: u64) -> bool {
        let w = Word::from_value(v, self.state_len()).unwrap();
        self.word_admissible(&w)
    }

    /// All admissible words at level `n`, lexicographically sorted.
    pub fn enumerate_admissible(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        self.for_each_admissible(n, |w| out.push(*w));
        out
    }

    /// Strongly connected components carrying an infinite orbit, returned as
    /// restricted subshifts sorted by descending spectral radius; ties are
    /// broken by descending state count, then by smallest contained state.
    pub fn transitive_components(&self) -> Vec<Sft> {
        let comps = self.strongly_connected();
        let mut out: Vec<Sft> = Vec::new();
        for comp in comps {
            if comp.len() == 1 {
                let s = comp[0];
                if !self.transition(s, s) {
                    continue; // no self-loop: no infinite orbit
                }
            }
            let mut allowed = vec![false; self.state_count()];
            for &s in &comp {
                allowed[s as usize] = true;
            }
            let mut sub = Sft {
                depth: self.depth,
                forbidden: self.forbidden.clone(),
                forbidden_mask: self.forbidden_mask.clone(),
                allowed,
                live: Vec::new(),
                eigen: OnceLock::new(),
            };
            sub.recompute_live();
            if !sub.is_empty() {
                out.push(sub);
            }
        }
        out.sort_by(|a, b| {
            let ra = a.spectral_radius().unwrap_or(0.0);
            let rb = b.spectral_radius().unwrap_or(0.0);
            rb.partial_cmp(&ra)
                .unwrap()
                .then_with(|| b.allowed_count().cmp(&a.allowed_count()))
                .then_with(|| a.min_state().cmp(&b.min_state()))
        });
        out
    }

    fn allowed_count(&self) -> usize {
        self.allowed.iter().filter(|&&x| x).count()
    }

    fn min_state(&self) -> u64 {
        self.allowed
            .iter()
            .position(|&x| x)
            .map(|p| p as u64)
            .unwrap_or(u64::MAX)
    }

    /// Is the restriction strongly connected on its live states?
    pub fn is_transitive(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let comps = self.strongly_connected();
        let live_states: usize = self.live.iter().filter(|&&x| x).count();
        comps.iter().any(|c| {
            c.len() == live_states && c.iter().all(|&s| self.live[s as usize])
        })
    }

    fn strongly_connected(&self) -> Vec<Vec<u64>> {
        // Iterative Tarjan over allowed states.
        let n = self.state_count();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u64> = Vec::new();
        let mut comps: Vec<Vec<u64>> = Vec::new();
        let mut counter = 0usize;

        #[derive(Clone)]
        struct Frame {
            v: u64,
            succ: Vec<u64>,
            next: usize,
        }

        for root in 0..n as u64 {
            if !self.allowed[root as usize] || index[root as usize] != usize::MAX {
                continue;
            }
            let mut call: Vec<Frame> = vec![Frame {
                v: root,
                succ: self.successors(root).collect(),
                next: 0,
            }];
            index[root as usize] = counter;
            low[root as usize] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root as usize] = true;

            while let Some(frame) = call.last_mut() {
                if frame.next < frame.succ.len() {
                    let w = frame.succ[frame.next];
                    frame.next += 1;
                    if index[w as usize] == usize::MAX {
                        index[w as usize] = counter;
                        low[w as usize] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w as usize] = true;
                        call.push(Frame { v: w, succ: self.successors(w).collect(), next: 0 });
                    } else if on_stack[w as usize] {
                        let v = frame.v;
                        low[v as usize] = low[v as usize].min(index[w as usize]);
                    }
                } else {
                    let done = call.pop().unwrap();
                    let v = done.v;
                    if let Some(parent) = call.last() {
                        let p = parent.v;
                        low[p as usize] = low[p as usize].min(low[v as usize]);
                    }
                    if low[v as usize] == index[v as usize] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// Leading eigenvalue of the transition matrix via shifted power
    /// iteration. Exposed together with `box_dimension`.
    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.eigen_data()?.value)
    }

    /// Upper box dimension `log2(lambda)`.
    pub fn box_dimension(&self) -> Result<f64> {
        Ok(self.spectral_radius()?.log2())
    }

    pub fn eigen_data(&self) -> Result<&EigenData> {
        if self.is_empty() {
            return Err(Error::EmptySubshift);
        }
        if let Some(e) = self.eigen.get() {
            return Ok(e);
        }
        let states: Vec<u64> = (0..self.state_count() as u64)
            .filter(|&s| self.live[s as usize])
            .collect();
        let succ: Vec<Vec<usize>> = states
            .iter()
            .map(|&a| {
                self.successors(a)
                    .filter(|&b| self.live[b as usize])
                    .map(|b| states.binary_search(&b).unwrap())
                    .collect()
            })
            .collect();
        let weights = vec![1.0; states.len()];
        let (value, right, left) = power_iteration(&succ, &weights);
        let data = EigenData { value, right, left };
        let _ = self.eigen.set(data);
        Ok(self.eigen.get().unwrap())
    }

    /// Upper-bound certificate for the Hausdorff distance between the
    /// subshift and the full shift.
    pub fn hausdorff_gap(&self) -> Result<GapReport> {
        self.hausdorff_gap_with_cap(2 * self.depth)
    }

    pub fn hausdorff_gap_with_cap(&self, cap: usize) -> Result<GapReport> {
        if self.is_empty() {
            return Err(Error::EmptySubshift);
        }
        let cap = cap.min(24).max(1);
        if self.forbidden.is_empty() && self.allowed.iter().all(|&a| a) {
            return Ok(GapReport {
                bound: 0.0,
                exact: true,
                certified_level: cap,
                dense_to_cap: true,
                within_depth_bound: true,
            });
        }
        // Level m certifies the bound 2^{-m} when every length-m word has an
        // admissible word within lambda-distance 2^{-m}, i.e. within one grid
        // step of its value.
        let mut certified = 0usize;
        for m in 1..=cap {
            let mut adm = vec![false; 1usize << m];
            self.for_each_admissible(m, |w| adm[w.value() as usize] = true);
            let ok = (0..1u64 << m).all(|v| {
                let i = v as usize;
                adm[i]
                    || (v > 0 && adm[i - 1])
                    || (v + 1 < (1u64 << m) && adm[i + 1])
            });
            if ok {
                certified = m;
            } else {
                break;
            }
        }
        let bound = if certified == 0 { 1.0 } else { 0.5f64.powi(certified as i32) };
        Ok(GapReport {
            bound,
            exact: false,
            certified_level: certified,
            dense_to_cap: certified == cap,
            within_depth_bound: bound <= 0.5f64.powi(self.depth as i32),
        })
    }
}

/// Certificate produced by [`Sft::hausdorff_gap`].
#[derive(Debug, Clone, Copy)]
pub struct GapReport {
    /// Certified upper bound (exact 0 for the unrestricted full shift).
    pub bound: f64,
    pub exact: bool,
    /// Deepest level at which the one-grid-step certificate held.
    pub certified_level: usize,
    /// False flags a subshift whose projection is visibly not dense at the cap.
    pub dense_to_cap: bool,
    /// Whether the bound meets `2^{-depth}`, the value guaranteed when every
    /// forbidden word's sibling stays admissible.
    pub within_depth_bound: bool,
}

/// Shifted power iteration for a nonnegative matrix given by successor lists
/// and per-state outgoing weights (`M[a][b] = weights[a]` for each edge).
/// Returns `(lambda, right, left)` with both vectors L1-normalised.
pub(crate) fn power_iteration(
    succ: &[Vec<usize>],
    weights: &[f64],
) -> (f64, Vec<f64>, Vec<f64>) {
    let n = succ.len();
    assert!(n > 0);
    // One- and two-state systems admit closed forms; using them keeps
    // product-measure fixtures bit-exact and the golden-mean eigenvalue
    // correctly rounded.
    if n <= 2 {
        let m = |i: usize, j: usize| {
            if succ[i].contains(&j) {
                weights[i]
            } else {
                0.0
            }
        };
        if n == 1 {
            return (m(0, 0), vec![1.0], vec![1.0]);
        }
        let (a, b, c, d) = (m(0, 0), m(0, 1), m(1, 0), m(1, 1));
        let lambda = 0.5 * ((a + d) + ((a - d) * (a - d) + 4.0 * b * c).sqrt());
        let normalize = |mut v: Vec<f64>| {
            let s: f64 = v.iter().sum();
            for x in v.iter_mut() {
                *x /= s;
            }
            v
        };
        let r = if b > 0.0 { vec![b, lambda - a] } else { vec![lambda - d, c] };
        let l = if c > 0.0 { vec![c, lambda - a] } else { vec![lambda - d, b] };
        return (lambda, normalize(r), normalize(l));
    }
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, list) in succ.iter().enumerate() {
        for &b in list {
            pred[b].push(a);
        }
    }
    // The shift keeps periodic components from oscillating.
    let shift = weights
        .iter()
        .zip(succ)
        .map(|(w, s)| w * s.len() as f64)
        .fold(0.0f64, f64::max)
        .max(1.0);

    let apply = |x: &[f64], out: &mut [f64]| {
        for a in 0..n {
            let mut acc = 0.0;
            for &b in &succ[a] {
                acc += x[b];
            }
            out[a] = weights[a] * acc + shift * x[a];
        }
    };
    let apply_t = |x: &[f64], out: &mut [f64]| {
        for b in 0..n {
            let mut acc = 0.0;
            for &a in &pred[b] {
                acc += weights[a] * x[a];
            }
            out[b] = acc + shift * x[b];
        }
    };

    let normalize = |v: &mut [f64]| {
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            for x in v.iter_mut() {
                *x /= s;
            }
        }
    };

    // After the tolerance is met, keep polishing: the normalised map is a
    // contraction near the Perron vector, so exactly-representable fixed
    // points (product measures) are reached bit-exactly.
    let run = |apply: &dyn Fn(&[f64], &mut [f64]), v: &mut Vec<f64>| {
        let mut buf = vec![0.0; n];
        let mut stable = 0;
        for _ in 0..EIGEN_MAX_ITER {
            apply(v, &mut buf);
            normalize(&mut buf);
            let delta = v
                .iter()
                .zip(buf.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            std::mem::swap(v, &mut buf);
            if delta <= EIGEN_TOL {
                stable += 1;
                if stable >= 3 {
                    break;
                }
            } else {
                stable = 0;
            }
        }
        for _ in 0..60 {
            apply(v, &mut buf);
            normalize(&mut buf);
            std::mem::swap(v, &mut buf);
        }
    };
    let mut r = vec![1.0 / n as f64; n];
    let mut l = vec![1.0 / n as f64; n];
    run(&apply, &mut r);
    run(&apply_t, &mut l);
    // Rayleigh quotient with the left vector: lambda = l M r / (l r).
    let mut mr = vec![0.0; n];
    for a in 0..n {
        let mut acc = 0.0;
        for &b in &succ[a] {
            acc += r[b];
        }
        mr[a] = weights[a] * acc;
    }
    let num: f64 = l.iter().zip(&mr).map(|(a, b)| a * b).sum();
    let den: f64 = l.iter().zip(&r).map(|(a, b)| a * b).sum();
    (num / den, r, l)
}
