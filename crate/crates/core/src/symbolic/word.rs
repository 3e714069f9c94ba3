//! Finite binary words and the cylinder metric.
//!
//! A word is a finite sequence over `{0, 1}` packed MSB-first into a `u64`.
//! The canonical map `lambda` sends a word `w` to `sum w_i 2^{-i}`, the left
//! endpoint of its dyadic interval in `[0, 1]`.

use crate::error::{Error, Result};
use std::fmt;

/// Longest representable word.
pub const MAX_WORD_LEN: usize = 60;

/// A finite binary word. The empty word is valid and has length 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const fn empty() -> Self {
        Word { len: 0, bits: 0 }
    }

    /// Word of length `len` whose bits are the low `len` bits of `value`,
    /// MSB first.
    pub fn from_value(value: u64, len: usize) -> Result<Self> {
        if len > MAX_WORD_LEN {
            return Err(Error::WordTooLong { len, max: MAX_WORD_LEN });
        }
        let mask = if len == 0 { 0 } else { (1u64 << len) - 1 };
        Ok(Word { len: len as u8, bits: value & mask })
    }

    /// Parse from a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut len = 0usize;
        for c in s.chars() {
            let b = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::InvalidParameter(format!("bad word char `{c}`"))),
            };
            bits = (bits << 1) | b;
            len += 1;
        }
        Word::from_value(bits, len)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Numeric value of the bits interpreted MSB-first.
    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Bit at 1-based position `i` (the paper-style indexing `w_i`).
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i >= 1 && i <= self.len());
        ((self.bits >> (self.len() - i)) & 1) as u8
    }

    /// Dyadic value `lambda(w) = sum_i w_i 2^{-i}`; 0 for the empty word.
    pub fn lambda(&self) -> f64 {
        if self.len == 0 {
            0.0
        } else {
            self.bits as f64 / (1u64 << self.len()) as f64
        }
    }

    /// Width of the dyadic interval rooted at this word.
    pub fn interval_len(&self) -> f64 {
        0.5f64.powi(self.len() as i32)
    }

    /// Prefix `w|_i`.
    pub fn prefix(&self, i: usize) -> Word {
        debug_assert!(i <= self.len());
        Word { len: i as u8, bits: self.bits >> (self.len() - i) }
    }

    /// Shifted word `sigma^m(w)`: drop the first `m` symbols.
    pub fn shift(&self, m: usize) -> Word {
        debug_assert!(m <= self.len());
        let rem = self.len() - m;
        let mask = if rem == 0 { 0 } else { (1u64 << rem) - 1 };
        Word { len: rem as u8, bits: self.bits & mask }
    }

    /// Append one symbol.
    pub fn push(&self, b: u8) -> Result<Word> {
        Word::from_value((self.bits << 1) | (b as u64 & 1), self.len() + 1)
    }

    /// Concatenation `w . u`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        Word::from_value((self.bits << other.len()) | other.bits, self.len() + other.len())
    }

    /// Length of the longest common prefix with `other`.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        let n = self.len().min(other.len());
        for i in 0..n {
            if self.bit(i + 1) != other.bit(i + 1) {
                return i;
            }
        }
        n
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            write!(f, "{}", self.bit(i))?;
        }
        if self.len() == 0 {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Cylinder metric restricted to finite words: `2^{-n}` where `n` is the
/// longest common prefix length, and `0` exactly for equal words.
pub fn metric_rho(s: &Word, t: &Word) -> f64 {
    if s == t {
        return 0.0;
    }
    0.5f64.powi(s.common_prefix_len(t) as i32)
}

/// Neighbor words: the set of same-length words whose dyadic base point is at
/// most one grid step away. Always contains `w`, never more than 3 words.
pub fn neighbors(w: &Word) -> Result<Vec<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let v = w.value();
    let top = (1u64 << w.len()) - 1;
    let mut out = Vec::with_capacity(3);
    if v > 0 {
        out.push(Word { len: w.len, bits: v - 1 });
    }
    out.push(*w);
    if v < top {
        out.push(Word { len: w.len, bits: v + 1 });
    }
    Ok(out)
}

/// The unique word `x|_k` with `lambda(w) <= x < lambda(w) + 2^{-k}`, with the
/// convention `1|_k = 1...1`.
pub fn word_at(x: f64, k: usize) -> Result<Word> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} outside [0, 1]")));
    }
    let cells = 1u64 << k;
    let idx = ((x * cells as f64).floor() as u64).min(cells - 1);
    Word::from_value(idx, k)
}

/// Maximum dyadic rank recognised when deciding whether a zero sits on the
/// dyadic grid. Roots isolated numerically are snapped onto this grid first,
/// so anything of finer rank is treated as non-dyadic.
pub const DYADIC_RANK_MAX: u32 = 24;

/// Smallest `j <= DYADIC_RANK_MAX` with `x * 2^j` integral, for `x` in `[0, 1)`.
pub fn dyadic_rank(x: f64) -> Option<u32> {
    if !(0.0..1.0).contains(&x) {
        return None;
    }
    let mut y = x;
    for j in 0..=DYADIC_RANK_MAX {
        if y == y.trunc() {
            return Some(j);
        }
        y *= 2.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn lambda_and_prefixes() {
        assert_eq!(w("01").lambda(), 0.25);
        assert_eq!(w("100").lambda(), 0.5);
        assert_eq!(w("011").lambda(), 0.375);
        assert_eq!(Word::empty().lambda(), 0.0);
        assert_eq!(w("0110").prefix(2), w("01"));
        assert_eq!(w("0110").shift(1), w("110"));
        assert_eq!(w("01").concat(&w("10")).unwrap(), w("0110"));
    }

    #[test]
    fn metric_examples() {
        assert_eq!(metric_rho(&w("01"), &w("01")), 0.0);
        assert_eq!(metric_rho(&w("00"), &w("01")), 0.5);
        assert_eq!(metric_rho(&w("10"), &w("00")), 1.0);
        // Symmetry.
        assert_eq!(metric_rho(&w("00"), &w("01")), metric_rho(&w("01"), &w("00")));
    }

    #[test]
    fn neighbor_examples() {
        let ns: Vec<String> = neighbors(&w("01")).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(ns, vec!["00", "01", "10"]);
        let ns: Vec<String> = neighbors(&w("00")).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(ns, vec!["00", "01"]);
        let ns: Vec<String> = neighbors(&w("11")).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(ns, vec!["10", "11"]);
        assert!(neighbors(&Word::empty()).is_err());
    }

    #[test]
    fn neighbor_symmetry_exhaustive() {
        for len in 1..=8usize {
            for v in 0..(1u64 << len) {
                let a = Word::from_value(v, len).unwrap();
                for b in neighbors(&a).unwrap() {
                    assert!(neighbors(&b).unwrap().contains(&a));
                }
            }
        }
    }

    #[test]
    fn word_at_examples() {
        assert_eq!(word_at(0.5, 3).unwrap(), w("100"));
        assert_eq!(word_at(1.0, 3).unwrap(), w("111"));
        assert_eq!(word_at(1.0 / 3.0, 2).unwrap(), w("01"));
        assert_eq!(word_at(0.0, 4).unwrap(), w("0000"));
    }

    #[test]
    fn dyadic_rank_detection() {
        assert_eq!(dyadic_rank(0.5), Some(1));
        assert_eq!(dyadic_rank(0.375), Some(3));
        assert_eq!(dyadic_rank(0.0), Some(0));
        assert_eq!(dyadic_rank(1.0 / 3.0), None);
        assert_eq!(dyadic_rank(1.0), None); // 1 is not in lambda(Sigma_*)
    }
}
