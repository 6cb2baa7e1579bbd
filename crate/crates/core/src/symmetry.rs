//! Statistical symmetry: the fraction of distinct contiguous `k`-tuples of
//! words whose reversal also occurs in the same window.

use std::collections::HashSet;
use std::hash::{DefaultHasher, Hash, Hasher};

use rayon::prelude::*;

use crate::corpus::CorpusWindow;
use crate::error::{Error, Result};
use crate::lexicon::{EncodedText, EMPTY_SYMBOL};

/// How tuples are keyed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Keying {
    /// Symbols bit-packed into a `u128`; exact, used whenever `k` symbols fit.
    Packed,
    /// 128-bit order-sensitive hash of the symbol sequence.
    Hashed,
    /// Stored symbol vectors; exact at any size, for small windows.
    Exact,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SymmetryReport {
    pub k: usize,
    pub start: u64,
    pub end: u64,
    pub distinct: u64,
    pub reversible: u64,
    pub ss: f64,
    pub keying: Keying,
    /// Whether position 1 (the empty word) was part of the window.
    pub includes_empty_word: bool,
}

/// Statistical symmetry of order `k` over a window.
pub fn statistical_symmetry(window: &CorpusWindow, k: usize) -> Result<SymmetryReport> {
    symmetry_of_text(&EncodedText::from_window(window)?, k)
}

/// Statistical symmetry of an in-memory text with automatic keying.
pub fn symmetry_of_text(text: &EncodedText, k: usize) -> Result<SymmetryReport> {
    let keying = if packed_width(text.symbols(), k).is_some() {
        Keying::Packed
    } else {
        Keying::Hashed
    };
    symmetry_with(text, k, keying)
}

pub fn symmetry_with(text: &EncodedText, k: usize, keying: Keying) -> Result<SymmetryReport> {
    let symbols = text.symbols();
    if k == 0 {
        return Err(Error::domain("tuple length k must be at least 1"));
    }
    if k > symbols.len() {
        return Err(Error::range(format!(
            "k = {k} exceeds window length {}",
            symbols.len()
        )));
    }
    let (distinct, reversible) = match keying {
        Keying::Packed => {
            let bits = packed_width(symbols, k).ok_or_else(|| {
                Error::range(format!("{k} symbols do not fit a packed 128-bit key"))
            })?;
            count_packed(symbols, k, bits)
        }
        Keying::Hashed => count_hashed(symbols, k),
        Keying::Exact => count_exact(symbols, k),
    };
    Ok(SymmetryReport {
        k,
        start: text.start(),
        end: text.end(),
        distinct,
        reversible,
        ss: reversible as f64 / distinct as f64,
        keying,
        includes_empty_word: text.start() == 1,
    })
}

fn remap(s: u32, empty: u32) -> u128 {
    if s == EMPTY_SYMBOL {
        empty as u128
    } else {
        s as u128
    }
}

fn empty_code(symbols: &[u32]) -> u32 {
    symbols
        .iter()
        .filter(|&&s| s != EMPTY_SYMBOL)
        .max()
        .map_or(0, |&m| m + 1)
}

/// Bits per symbol if `k` symbols fit in 128 bits.
fn packed_width(symbols: &[u32], k: usize) -> Option<u32> {
    let max = empty_code(symbols) as u64;
    let bits = (64 - max.leading_zeros()).max(1);
    (bits as usize * k <= 128).then_some(bits)
}

fn count_packed(symbols: &[u32], k: usize, bits: u32) -> (u64, u64) {
    let empty = empty_code(symbols);
    let total = bits * k as u32;
    let mask = if total == 128 {
        u128::MAX
    } else {
        (1u128 << total) - 1
    };
    let mut keys = Vec::with_capacity(symbols.len() + 1 - k);
    let mut key = 0u128;
    for (i, &s) in symbols.iter().enumerate() {
        key = ((key << bits) | remap(s, empty)) & mask;
        if i + 1 >= k {
            keys.push(key);
        }
    }
    keys.par_sort_unstable();
    keys.dedup();
    let digit = (1u128 << bits) - 1;
    let reversible = keys
        .par_iter()
        .filter(|&&key| {
            let mut rev = 0u128;
            let mut rest = key;
            for _ in 0..k {
                rev = (rev << bits) | (rest & digit);
                rest >>= bits;
            }
            keys.binary_search(&rev).is_ok()
        })
        .count();
    (keys.len() as u64, reversible as u64)
}

fn hash128<'a>(items: impl Iterator<Item = &'a u32>) -> u128 {
    let mut lo = DefaultHasher::new();
    let mut hi = DefaultHasher::new();
    0x6e61_7465_7874u64.hash(&mut hi);
    for s in items {
        s.hash(&mut lo);
        s.hash(&mut hi);
    }
    ((hi.finish() as u128) << 64) | lo.finish() as u128
}

fn count_hashed(symbols: &[u32], k: usize) -> (u64, u64) {
    let mut pairs: Vec<(u128, u128)> = symbols
        .par_windows(k)
        .map(|w| (hash128(w.iter()), hash128(w.iter().rev())))
        .collect();
    pairs.par_sort_unstable_by_key(|p| p.0);
    pairs.dedup_by_key(|p| p.0);
    let reversible = pairs
        .par_iter()
        .filter(|(_, rev)| pairs.binary_search_by_key(rev, |p| p.0).is_ok())
        .count();
    (pairs.len() as u64, reversible as u64)
}

fn count_exact(symbols: &[u32], k: usize) -> (u64, u64) {
    let set: HashSet<&[u32]> = symbols.windows(k).collect();
    let reversible = set
        .iter()
        .filter(|t| {
            let rev: Vec<u32> = t.iter().rev().copied().collect();
            set.contains(rev.as_slice())
        })
        .count();
    (set.len() as u64, reversible as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_two_sixths() {
        let window = CorpusWindow::generated(2, 10).unwrap();
        let r = statistical_symmetry(&window, 4).unwrap();
        assert_eq!((r.distinct, r.reversible), (6, 2));
        assert_eq!(r.ss, 2.0 / 6.0);
        assert!(!r.includes_empty_word);
    }

    #[test]
    fn k_one_is_one() {
        let text = EncodedText::from_window(&CorpusWindow::generated(1, 500).unwrap()).unwrap();
        for keying in [Keying::Packed, Keying::Hashed, Keying::Exact] {
            assert_eq!(symmetry_with(&text, 1, keying).unwrap().ss, 1.0);
        }
    }

    #[test]
    fn errors() {
        let text = EncodedText::from_window(&CorpusWindow::generated(1, 5).unwrap()).unwrap();
        assert!(matches!(symmetry_of_text(&text, 6), Err(Error::Range(_))));
        assert!(matches!(symmetry_of_text(&text, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn keyings_agree() {
        let text = EncodedText::from_window(&CorpusWindow::generated(1, 20_000).unwrap()).unwrap();
        for k in 2..=8 {
            let p = symmetry_with(&text, k, Keying::Packed).unwrap();
            let h = symmetry_with(&text, k, Keying::Hashed).unwrap();
            let e = symmetry_with(&text, k, Keying::Exact).unwrap();
            assert_eq!((p.distinct, p.reversible), (e.distinct, e.reversible));
            assert_eq!((h.distinct, h.reversible), (e.distinct, e.reversible));
        }
    }
}
