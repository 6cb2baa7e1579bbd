//! Indicator walks of single words and their mean squared displacement.
//!
//! For a word `ρ` over a window of length `N`, `zᵢ = 1` where the word occurs,
//! `yᵢ = zᵢ − μ` with `μ` the window mean, and `s_m = Σ_{i≤m} yᵢ`. The MSD at
//! lag `t` is `(1/(N−t)) Σ_{n=1}^{N−t} (s_{n+t} − s_n)²`, and the cross MSD of
//! two words replaces the displacement by the difference of both walks'
//! displacements.
//!
//! `s_m` is never stored: `s_{n+t} − s_n = (Z_{n+t} − Z_n) − μt` where `Z` is
//! the exact integer running count, which keeps cancellation out of the sums.

use rayon::prelude::*;

use crate::corpus::CorpusWindow;
use crate::error::{Error, Result};
use crate::lexicon::EncodedText;
use crate::tree::DyckWord;

/// Default lag grid density.
pub const LAGS_PER_DECADE: u32 = 16;

/// Occurrence positions of one word inside a window.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSignal {
    pub word: DyckWord,
    pub start: u64,
    /// Window length `N`.
    pub len: u64,
    /// 1-based offsets within the window, strictly increasing.
    pub positions: Vec<u64>,
}

impl WalkSignal {
    pub fn count(&self) -> u64 {
        self.positions.len() as u64
    }

    pub fn mean(&self) -> f64 {
        self.count() as f64 / self.len as f64
    }

    /// Absolute text positions of the occurrences.
    pub fn text_positions(&self) -> impl Iterator<Item = u64> + '_ {
        self.positions.iter().map(|&p| p + self.start - 1)
    }

    /// Running counts `Z_0..=Z_N`.
    fn running_counts(&self) -> Vec<u32> {
        let mut z = vec![0u32; self.len as usize + 1];
        let mut next = self.positions.iter().peekable();
        let mut c = 0u32;
        for (m, slot) in z.iter_mut().enumerate().skip(1) {
            if next.peek() == Some(&&(m as u64)) {
                next.next();
                c += 1;
            }
            *slot = c;
        }
        z
    }
}

pub fn signal(window: &CorpusWindow, word: &DyckWord) -> Result<WalkSignal> {
    let mut positions = Vec::new();
    for (i, w) in window.words()?.enumerate() {
        if w? == *word {
            positions.push(i as u64 + 1);
        }
    }
    Ok(WalkSignal {
        word: *word,
        start: window.start(),
        len: window.len(),
        positions,
    })
}

pub fn signal_from_text(text: &EncodedText, word: &DyckWord) -> WalkSignal {
    let positions = match text.symbol_of(word) {
        Some(sym) => text
            .symbols()
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s == sym)
            .map(|(i, _)| i as u64 + 1)
            .collect(),
        None => Vec::new(),
    };
    WalkSignal {
        word: *word,
        start: text.start(),
        len: text.len() as u64,
        positions,
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MsdSource {
    Single {
        word: String,
        mean: f64,
    },
    Pair {
        first: String,
        second: String,
        first_mean: f64,
        second_mean: f64,
    },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MsdCurve {
    pub lags: Vec<u64>,
    pub values: Vec<f64>,
    pub window_len: u64,
    pub source: MsdSource,
}

/// Integer lags `round(10^(j/per_decade))` in `[1, max_lag]`, deduplicated.
pub fn log_lags(max_lag: u64, per_decade: u32) -> Vec<u64> {
    let mut lags = Vec::new();
    if max_lag == 0 || per_decade == 0 {
        return lags;
    }
    for j in 0.. {
        let t = 10f64.powf(j as f64 / per_decade as f64).round() as u64;
        if t > max_lag {
            break;
        }
        if lags.last() != Some(&t) {
            lags.push(t);
        }
    }
    lags
}

/// Log-spaced grid from 1 to `N/10`.
pub fn default_lags(window_len: u64) -> Vec<u64> {
    log_lags((window_len / 10).max(1).min(window_len.saturating_sub(1)), LAGS_PER_DECADE)
}

fn check_lags(lags: &[u64], len: u64) -> Result<()> {
    if let Some(&t) = lags.iter().find(|&&t| t < 1 || t >= len) {
        return Err(Error::range(format!("lag {t} outside [1, {}]", len.saturating_sub(1))));
    }
    Ok(())
}

/// Neumaier-compensated sum of `(Δ_n − drift)²` for `Δ_n = a[n+t] − a[n]`
/// (minus the same for `b` when present), `n = 1..=N−t`.
fn displacement_sum(a: &[u32], b: Option<&[u32]>, t: usize, drift: f64) -> f64 {
    let n_max = a.len() - 1;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=(n_max - t) {
        let mut d = a[n + t] as i64 - a[n] as i64;
        if let Some(b) = b {
            d -= b[n + t] as i64 - b[n] as i64;
        }
        let x = d as f64 - drift;
        let term = x * x;
        let s = sum + term;
        if sum.abs() >= term {
            comp += (sum - s) + term;
        } else {
            comp += (term - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

pub fn msd(signal: &WalkSignal, lags: &[u64]) -> Result<MsdCurve> {
    check_lags(lags, signal.len)?;
    let mu = signal.mean();
    let z = signal.running_counts();
    let values = lags
        .par_iter()
        .map(|&t| {
            displacement_sum(&z, None, t as usize, mu * t as f64) / (signal.len - t) as f64
        })
        .collect();
    Ok(MsdCurve {
        lags: lags.to_vec(),
        values,
        window_len: signal.len,
        source: MsdSource::Single {
            word: signal.word.to_string(),
            mean: mu,
        },
    })
}

/// Cross MSD of the walks of two words over the same window.
pub fn cross_msd(first: &WalkSignal, second: &WalkSignal, lags: &[u64]) -> Result<MsdCurve> {
    if first.start != second.start || first.len != second.len {
        return Err(Error::domain(format!(
            "signals over different windows ({}+{} vs {}+{})",
            first.start, first.len, second.start, second.len
        )));
    }
    check_lags(lags, first.len)?;
    let (mu1, mu2) = (first.mean(), second.mean());
    let z1 = first.running_counts();
    let z2 = second.running_counts();
    let values = lags
        .par_iter()
        .map(|&t| {
            displacement_sum(&z1, Some(&z2), t as usize, (mu1 - mu2) * t as f64)
                / (first.len - t) as f64
        })
        .collect();
    Ok(MsdCurve {
        lags: lags.to_vec(),
        values,
        window_len: first.len,
        source: MsdSource::Pair {
            first: first.word.to_string(),
            second: second.word.to_string(),
            first_mean: mu1,
            second_mean: mu2,
        },
    })
}
