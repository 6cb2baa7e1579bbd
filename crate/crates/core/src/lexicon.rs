//! Lexicon construction and frequency observables: dictionary growth,
//! empirical frequencies, plug-in entropy, rank spectra and phrase queries.
//!
//! Frequencies divide by the window length, so for windows containing
//! position 1 the dictionary probabilities sum to `(n − 1)/n`: the empty word
//! of position 1 occupies a position but is not a dictionary entry.

use std::collections::{HashMap, VecDeque};

use crate::corpus::CorpusWindow;
use crate::error::{Error, Result};
use crate::tree::DyckWord;

/// Dense id of a dictionary word, in first-appearance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordId(pub u32);

/// Symbol standing for the empty word in an [`EncodedText`].
pub const EMPTY_SYMBOL: u32 = u32::MAX;

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    words: Vec<DyckWord>,
    ids: HashMap<DyckWord, WordId>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `word`, assigning the next one if unseen. The empty
    /// word is never interned.
    pub fn intern(&mut self, word: DyckWord) -> Option<WordId> {
        if word.is_empty() {
            return None;
        }
        let next = WordId(self.words.len() as u32);
        let id = *self.ids.entry(word).or_insert(next);
        if id == next {
            self.words.push(word);
        }
        Some(id)
    }

    pub fn get(&self, word: &DyckWord) -> Option<WordId> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: WordId) -> DyckWord {
        self.words[id.0 as usize]
    }

    pub fn words(&self) -> &[DyckWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Occurrence counts of every dictionary word over a window `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    start: u64,
    end: u64,
    // indexed by WordId; only words seen by `end`
    words: Vec<DyckWord>,
    counts: Vec<u64>,
}

impl FrequencyTable {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn window_len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn dictionary_size(&self) -> usize {
        self.words.len()
    }

    /// Sum of dictionary counts; one less than the window length when the
    /// window holds position 1.
    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (DyckWord, u64)> + '_ {
        self.words.iter().copied().zip(self.counts.iter().copied())
    }

    pub fn count(&self, word: &DyckWord) -> u64 {
        self.words
            .iter()
            .position(|w| w == word)
            .map_or(0, |i| self.counts[i])
    }

    /// `count / window length`; 0 for unseen words.
    pub fn frequency(&self, word: &DyckWord) -> f64 {
        self.count(word) as f64 / self.window_len() as f64
    }
}

/// Dictionary state at one checkpoint position.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub n: u64,
    pub dictionary_size: usize,
    pub table: FrequencyTable,
}

impl Checkpoint {
    /// `d_n / n`, the dictionary density.
    pub fn density(&self) -> f64 {
        self.dictionary_size as f64 / self.n as f64
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub lexicon: Lexicon,
    pub table: FrequencyTable,
    pub checkpoints: Vec<Checkpoint>,
}

fn sorted_checkpoints(start: u64, end: u64, checkpoints: &[u64]) -> Result<Vec<u64>> {
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    if let Some(&bad) = cps.iter().find(|&&c| c < start || c > end) {
        return Err(Error::range(format!(
            "checkpoint {bad} outside window [{start}, {end}]"
        )));
    }
    Ok(cps)
}

struct Counter {
    start: u64,
    lexicon: Lexicon,
    counts: Vec<u64>,
}

impl Counter {
    fn push(&mut self, word: DyckWord) {
        if let Some(WordId(id)) = self.lexicon.intern(word) {
            if id as usize == self.counts.len() {
                self.counts.push(0);
            }
            self.counts[id as usize] += 1;
        }
    }

    fn table(&self, end: u64) -> FrequencyTable {
        FrequencyTable {
            start: self.start,
            end,
            words: self.lexicon.words.clone(),
            counts: self.counts.clone(),
        }
    }
}

/// Single pass over a window, snapshotting the table at each checkpoint.
pub fn scan(window: &CorpusWindow, checkpoints: &[u64]) -> Result<ScanResult> {
    let cps = sorted_checkpoints(window.start(), window.end(), checkpoints)?;
    let mut counter = Counter {
        start: window.start(),
        lexicon: Lexicon::new(),
        counts: Vec::new(),
    };
    let mut snapshots = Vec::with_capacity(cps.len());
    let mut next_cp = cps.iter().peekable();
    for (pos, word) in (window.start()..).zip(window.words()?) {
        counter.push(word?);
        while next_cp.peek() == Some(&&pos) {
            next_cp.next();
            snapshots.push(Checkpoint {
                n: pos,
                dictionary_size: counter.lexicon.len(),
                table: counter.table(pos),
            });
        }
    }
    Ok(ScanResult {
        table: counter.table(window.end()),
        lexicon: counter.lexicon,
        checkpoints: snapshots,
    })
}

/// A window held in memory as a symbol sequence: lexicon ids, with
/// [`EMPTY_SYMBOL`] for the empty word.
#[derive(Debug, Clone)]
pub struct EncodedText {
    start: u64,
    lexicon: Lexicon,
    symbols: Vec<u32>,
}

impl EncodedText {
    pub fn from_window(window: &CorpusWindow) -> Result<Self> {
        let mut lexicon = Lexicon::new();
        let mut symbols = Vec::with_capacity(window.len() as usize);
        for word in window.words()? {
            symbols.push(lexicon.intern(word?).map_or(EMPTY_SYMBOL, |id| id.0));
        }
        Ok(EncodedText {
            start: window.start(),
            lexicon,
            symbols,
        })
    }

    pub fn from_words(start: u64, words: impl IntoIterator<Item = DyckWord>) -> Self {
        let mut lexicon = Lexicon::new();
        let symbols = words
            .into_iter()
            .map(|w| lexicon.intern(w).map_or(EMPTY_SYMBOL, |id| id.0))
            .collect();
        EncodedText {
            start,
            lexicon,
            symbols,
        }
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.start + self.symbols.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn word_at(&self, position: u64) -> Option<DyckWord> {
        let i = position.checked_sub(self.start)? as usize;
        self.symbols.get(i).map(|&s| self.symbol_word(s))
    }

    pub fn symbol_word(&self, symbol: u32) -> DyckWord {
        if symbol == EMPTY_SYMBOL {
            DyckWord::EMPTY
        } else {
            self.lexicon.word(WordId(symbol))
        }
    }

    /// Symbol of `word`, `None` if the word never occurs.
    pub fn symbol_of(&self, word: &DyckWord) -> Option<u32> {
        if word.is_empty() {
            self.symbols.contains(&EMPTY_SYMBOL).then_some(EMPTY_SYMBOL)
        } else {
            self.lexicon.get(word).map(|id| id.0)
        }
    }

    /// Prefix `[start, end]` as its own text.
    pub fn prefix(&self, end: u64) -> Result<EncodedText> {
        if end < self.start || end > self.end() {
            return Err(Error::range(format!(
                "prefix end {end} outside [{}, {}]",
                self.start,
                self.end()
            )));
        }
        let symbols = &self.symbols[..(end - self.start + 1) as usize];
        Ok(EncodedText::from_words(
            self.start,
            symbols.iter().map(|&s| self.symbol_word(s)),
        ))
    }

    /// Checkpoint snapshots, equivalent to [`scan`] over the same window.
    pub fn checkpoints(&self, checkpoints: &[u64]) -> Result<Vec<Checkpoint>> {
        let cps = sorted_checkpoints(self.start, self.end(), checkpoints)?;
        let mut counts: Vec<u64> = Vec::new();
        let mut out = Vec::with_capacity(cps.len());
        let mut done = 0usize;
        for n in cps {
            let upto = (n - self.start + 1) as usize;
            for &s in &self.symbols[done..upto] {
                if s != EMPTY_SYMBOL {
                    // ids appear in order, so a new id is always the next one
                    if s as usize == counts.len() {
                        counts.push(0);
                    }
                    counts[s as usize] += 1;
                }
            }
            done = upto;
            let words = self.lexicon.words[..counts.len()].to_vec();
            out.push(Checkpoint {
                n,
                dictionary_size: counts.len(),
                table: FrequencyTable {
                    start: self.start,
                    end: n,
                    words,
                    counts: counts.clone(),
                },
            });
        }
        Ok(out)
    }

    pub fn frequency_table(&self) -> FrequencyTable {
        self.checkpoints(&[self.end()])
            .expect("end is in range")
            .pop()
            .unwrap()
            .table
    }
}

/// Plug-in Shannon entropy in bits, `−Σ p log₂ p` over dictionary words with
/// `p = count / window length`.
pub fn entropy(table: &FrequencyTable) -> Result<f64> {
    if table.dictionary_size() == 0 {
        return Err(Error::domain("entropy of an empty dictionary"));
    }
    let n = table.window_len() as f64;
    Ok(table
        .counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum())
}

/// Maximum entropy of a `d`-word dictionary, `log₂ d`.
pub fn entropy_bound(dictionary_size: usize) -> Result<f64> {
    if dictionary_size == 0 {
        return Err(Error::domain("entropy bound of an empty dictionary"));
    }
    Ok((dictionary_size as f64).log2())
}

/// Bound obtained by substituting the fitted Heaps law `d ≈ 9.231·n^0.234`
/// into `log₂ d`: `3.207 + 0.234·log₂ n`. Fitted for `n ≤ 6.5·10⁹`.
pub fn fitted_bound(n: f64) -> f64 {
    3.207 + 0.234 * n.log2()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RankEntry {
    pub rank: usize,
    #[serde(serialize_with = "serialize_word")]
    pub word: DyckWord,
    pub count: u64,
    pub frequency: f64,
}

fn serialize_word<S: serde::Serializer>(w: &DyckWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(w)
}

/// Zipf function `f(1) ≥ f(2) ≥ …` with the words holding each rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankSpectrum {
    pub n: u64,
    pub entries: Vec<RankEntry>,
}

impl RankSpectrum {
    pub fn frequencies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.frequency).collect()
    }

    pub fn top(&self, k: usize) -> &[RankEntry] {
        &self.entries[..k.min(self.entries.len())]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Order among words with equal counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Earlier first occurrence in the window ranks higher.
    #[default]
    FirstOccurrence,
    /// Shorter word first, then lexicographic.
    Shortlex,
}

/// Sorts the table by decreasing count with [`TieBreak::FirstOccurrence`].
pub fn rank_spectrum(table: &FrequencyTable) -> RankSpectrum {
    rank_spectrum_with(table, TieBreak::FirstOccurrence)
}

pub fn rank_spectrum_with(table: &FrequencyTable, ties: TieBreak) -> RankSpectrum {
    // table entries are stored in first-occurrence order, so a stable sort
    // by count alone gives that tie-break
    let mut pairs: Vec<(DyckWord, u64)> = table.entries().filter(|&(_, c)| c > 0).collect();
    match ties {
        TieBreak::FirstOccurrence => pairs.sort_by_key(|p| std::cmp::Reverse(p.1)),
        TieBreak::Shortlex => pairs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0))),
    }
    let n = table.window_len();
    RankSpectrum {
        n,
        entries: pairs
            .into_iter()
            .enumerate()
            .map(|(i, (word, count))| RankEntry {
                rank: i + 1,
                word,
                count,
                frequency: count as f64 / n as f64,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PhraseHits {
    pub count: u64,
    pub first_position: Option<u64>,
}

/// Contiguous occurrences of `phrase` starting anywhere in the window (and
/// ending inside it).
pub fn phrase_count(window: &CorpusWindow, phrase: &[DyckWord]) -> Result<PhraseHits> {
    if phrase.is_empty() {
        return Err(Error::domain("empty phrase"));
    }
    let k = phrase.len();
    let mut recent: VecDeque<DyckWord> = VecDeque::with_capacity(k);
    let mut hits = PhraseHits {
        count: 0,
        first_position: None,
    };
    for (pos, word) in (window.start()..).zip(window.words()?) {
        if recent.len() == k {
            recent.pop_front();
        }
        recent.push_back(word?);
        if recent.len() == k && recent.iter().eq(phrase.iter()) {
            hits.count += 1;
            hits.first_position.get_or_insert(pos + 1 - k as u64);
        }
    }
    Ok(hits)
}

/// [`phrase_count`] over an in-memory text.
pub fn phrase_count_encoded(text: &EncodedText, phrase: &[DyckWord]) -> Result<PhraseHits> {
    if phrase.is_empty() {
        return Err(Error::domain("empty phrase"));
    }
    let none = PhraseHits {
        count: 0,
        first_position: None,
    };
    let Some(pattern) = phrase
        .iter()
        .map(|w| text.symbol_of(w))
        .collect::<Option<Vec<u32>>>()
    else {
        return Ok(none);
    };
    let mut hits = none;
    for (i, win) in text.symbols().windows(pattern.len()).enumerate() {
        if win == pattern.as_slice() {
            hits.count += 1;
            hits.first_position.get_or_insert(text.start() + i as u64);
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> DyckWord {
        s.parse().unwrap()
    }

    fn first_ten() -> CorpusWindow {
        CorpusWindow::generated(1, 10).unwrap()
    }

    #[test]
    fn scan_first_ten() {
        let res = scan(&first_ten(), &[10]).unwrap();
        let words: Vec<String> = res.lexicon.words().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["10", "1100", "1010"]);
        assert_eq!(res.checkpoints[0].dictionary_size, 3);
        assert_eq!(res.table.total_count(), 9);
        assert!(matches!(scan(&first_ten(), &[11]), Err(Error::Range(_))));
    }

    #[test]
    fn worked_frequencies() {
        let table = scan(&first_ten(), &[]).unwrap().table;
        assert_eq!(table.frequency(&w("10")), 0.4);
        assert_eq!(table.frequency(&w("1010")), 0.2);
        assert_eq!(table.frequency(&w("111000")), 0.0);
    }

    #[test]
    fn entropy_first_ten() {
        let table = scan(&first_ten(), &[]).unwrap().table;
        // Direct summation oracle for counts 4, 3, 2 over 10 positions.
        let oracle: f64 = [4.0f64, 3.0, 2.0]
            .iter()
            .map(|c| -(c / 10.0) * (c / 10.0).log2())
            .sum();
        let h = entropy(&table).unwrap();
        assert!((h - oracle).abs() < 1e-15);
        assert!((h - 1.5142).abs() < 1e-4);
    }

    #[test]
    fn entropy_degenerate_and_bounds() {
        let table = FrequencyTable {
            start: 2,
            end: 5,
            words: vec![w("10")],
            counts: vec![4],
        };
        assert_eq!(entropy(&table).unwrap(), 0.0);
        let empty = FrequencyTable {
            start: 1,
            end: 1,
            words: vec![],
            counts: vec![],
        };
        assert!(matches!(entropy(&empty), Err(Error::Domain(_))));
        assert!((entropy_bound(3).unwrap() - 1.584_962_500_721_156).abs() < 1e-12);
        assert_eq!(entropy_bound(1).unwrap(), 0.0);
        assert!(entropy_bound(0).is_err());
        assert!((entropy_bound(12).unwrap() - 3.585).abs() < 1e-3);
    }

    #[test]
    fn ranks_first_ten() {
        let spec = rank_spectrum(&scan(&first_ten(), &[]).unwrap().table);
        let got: Vec<(String, f64)> = spec
            .entries
            .iter()
            .map(|e| (e.word.to_string(), e.frequency))
            .collect();
        assert_eq!(
            got,
            [("10".into(), 0.4), ("1100".into(), 0.3), ("1010".into(), 0.2)]
        );
    }

    #[test]
    fn single_word_spectrum() {
        let spec = rank_spectrum(&scan(&CorpusWindow::generated(1, 3).unwrap(), &[]).unwrap().table);
        assert_eq!(spec.len(), 1);
        assert_eq!(spec.entries[0].frequency, 2.0 / 3.0);
    }

    #[test]
    fn rank_ties() {
        let table = FrequencyTable {
            start: 1,
            end: 9,
            words: vec![w("1100"), w("101010"), w("1010"), w("10")],
            counts: vec![2, 2, 2, 3],
        };
        let order = |ties| -> Vec<String> {
            rank_spectrum_with(&table, ties)
                .entries
                .iter()
                .map(|e| e.word.to_string())
                .collect()
        };
        assert_eq!(order(TieBreak::Shortlex), ["10", "1010", "1100", "101010"]);
        assert_eq!(order(TieBreak::FirstOccurrence), ["10", "1100", "101010", "1010"]);
    }

    #[test]
    fn hundred_tie_follows_first_occurrence() {
        let text = EncodedText::from_window(&CorpusWindow::generated(1, 100).unwrap()).unwrap();
        let sp = rank_spectrum(&text.frequency_table());
        assert_eq!(sp.entries[4].word, w("101100"));
        assert_eq!(sp.entries[4].count, sp.entries[5].count);
        assert_eq!(sp.entries[5].word, w("101010"));
    }

    #[test]
    fn encoded_matches_scan() {
        let window = CorpusWindow::generated(1, 5000).unwrap();
        let text = EncodedText::from_window(&window).unwrap();
        let cps = [10, 100, 1000, 5000];
        let a = scan(&window, &cps).unwrap().checkpoints;
        let b = text.checkpoints(&cps).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.n, y.n);
            assert_eq!(x.dictionary_size, y.dictionary_size);
            assert_eq!(x.table, y.table);
        }
        assert_eq!(b[2].dictionary_size, 29);
    }

    #[test]
    fn phrases_small() {
        let window = CorpusWindow::generated(1, 100).unwrap();
        let text = EncodedText::from_window(&window).unwrap();
        for phrase in [vec![w("1100"), w("1100")], vec![w("10"), w("10")]] {
            let a = phrase_count(&window, &phrase).unwrap();
            assert_eq!(a, phrase_count_encoded(&text, &phrase).unwrap());
            assert_eq!(a.count, 1);
        }
        let hits = phrase_count(&window, &[w("1100"), w("1100")]).unwrap();
        assert_eq!(hits.first_position, Some(8));
        let hits = phrase_count(&window, &[DyckWord::EMPTY, w("10")]).unwrap();
        assert_eq!(hits.first_position, Some(1));
        assert!(phrase_count(&window, &[]).is_err());
    }
}
