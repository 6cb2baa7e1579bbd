//! Acceptance criteria at desk scale (N = 10⁷). Each test writes one
//! `criterion N: PASS|FAIL` line to stderr, bypassing output capture, and then
//! asserts.

use std::collections::HashSet;
use std::io::Write;
use std::sync::OnceLock;

use natext::complexity;
use natext::corpus::CorpusWindow;
use natext::fitters::{self, LogBase, Weighting};
use natext::lexicon::{self, Checkpoint, EncodedText};
use natext::symmetry;
use natext::tree::{DyckWord, PlanarTree};
use natext::walks;

const N: u64 = 10_000_000;

struct Fixture {
    window: CorpusWindow,
    text: EncodedText,
    /// 1-2-5 grid from 10 to N.
    snaps: Vec<Checkpoint>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let window = CorpusWindow::generated(1, N).unwrap();
        let text = EncodedText::from_window(&window).unwrap();
        let grid: Vec<u64> = (1..=7)
            .flat_map(|e| [1u64, 2, 5].map(|m| m * 10u64.pow(e)))
            .filter(|&n| n <= N)
            .collect();
        let snaps = text.checkpoints(&grid).unwrap();
        Fixture { window, text, snaps }
    })
}

fn snap(n: u64) -> &'static Checkpoint {
    fixture().snaps.iter().find(|c| c.n == n).expect("checkpoint on grid")
}

fn w(s: &str) -> DyckWord {
    s.parse().unwrap()
}

fn verdict(id: u32, title: &str, pass: bool, detail: String) {
    let line = format!(
        "\ncriterion {id:>2}: {} {title} | {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

#[test]
fn criterion_01_dictionary_sizes() {
    let expected = [3usize, 12, 29, 63, 123, 230, 412];
    let got: Vec<usize> = (1..=7).map(|e| snap(10u64.pow(e)).dictionary_size).collect();
    verdict(1, "dictionary sizes", got == expected, format!("d = {got:?}"));
}

#[test]
fn criterion_02_top_ranks() {
    let table: [(u64, &[&str]); 7] = [
        (10, &["10", "1100", "1010"]),
        (100, &["1010", "10", "110010", "1100", "101100"]),
        (1_000, &["1010", "10", "110010", "101010", "11001010"]),
        (10_000, &["1010", "101010", "10", "110010", "11001010"]),
        (100_000, &["1010", "101010", "11001010", "10", "110010"]),
        (1_000_000, &["1010", "101010", "11001010", "10101010", "10"]),
        (10_000_000, &["101010", "1010", "10101010", "11001010", "10"]),
    ];
    let mut bad = Vec::new();
    for (n, row) in table {
        let sp = lexicon::rank_spectrum(&snap(n).table);
        let got: Vec<String> = sp.top(5).iter().map(|e| e.word.to_string()).collect();
        if got != row {
            bad.push(format!("n={n}: {got:?}"));
        }
    }
    verdict(2, "top-5 ranked words", bad.is_empty(), format!("mismatches: {bad:?}"));
}

#[test]
fn criterion_03_worked_examples() {
    let t = &snap(10).table;
    let (p10, p1010) = (t.frequency(&w("10")), t.frequency(&w("1010")));
    let sub = EncodedText::from_window(&fixture().window.sub_window(2, 10).unwrap()).unwrap();
    let ss = symmetry::symmetry_of_text(&sub, 4).unwrap();

    // Oracle: the nine words of positions 2..10 spelled out.
    let words = ["10", "10", "1100", "10", "1010", "10", "1100", "1100", "1010"];
    let tuples: HashSet<Vec<&str>> = words.windows(4).map(|x| x.to_vec()).collect();
    let rev = tuples
        .iter()
        .filter(|t| tuples.contains(&t.iter().rev().copied().collect::<Vec<_>>()))
        .count();
    let pass = p10 == 0.4
        && p1010 == 0.2
        && (ss.reversible, ss.distinct) == (2, 6)
        && (rev, tuples.len()) == (2, 6);
    verdict(
        3,
        "worked micro-examples",
        pass,
        format!("p(10)={p10} p(1010)={p1010} SS(4)={}/{}", ss.reversible, ss.distinct),
    );
}

#[test]
fn criterion_04_entropy() {
    // Oracle: the plug-in sum over raw counts.
    let t = &snap(100).table;
    let h_oracle: f64 = t
        .entries()
        .filter(|&(_, c)| c > 0)
        .map(|(_, c)| {
            let p = c as f64 / 100.0;
            -p * p.log2()
        })
        .sum();
    let h = lexicon::entropy(t).unwrap();
    let bound_ok = fixture()
        .snaps
        .iter()
        .all(|c| lexicon::entropy(&c.table).unwrap() <= (c.dictionary_size as f64).log2() + 1e-12);
    let pass = (h - 2.77).abs() <= 0.01 && (h - h_oracle).abs() < 1e-12 && bound_ok;
    verdict(4, "entropy", pass, format!("h(100)={h:.4}, h ≤ log2 d everywhere: {bound_ok}"));
}

#[test]
fn criterion_05_heaps() {
    let table = [
        (1e1, 3.0),
        (1e2, 12.0),
        (1e3, 29.0),
        (1e4, 63.0),
        (1e5, 123.0),
        (1e6, 230.0),
        (1e7, 412.0),
        (1e8, 708.0),
        (1e9, 1195.0),
    ];
    let refit = fitters::fit_power_law(&table, Weighting::Linear).unwrap();
    let pts: Vec<(f64, f64)> = fixture()
        .snaps
        .iter()
        .map(|c| (c.n as f64, c.dictionary_size as f64))
        .collect();
    let corpus = fitters::fit_power_law(&pts, Weighting::Linear).unwrap();
    let pass = (refit.beta - 0.234).abs() <= 0.02 && (0.19..=0.29).contains(&corpus.beta);
    verdict(
        5,
        "Heaps exponent",
        pass,
        format!("table refit beta={:.4}, corpus beta={:.4}", refit.beta, corpus.beta),
    );
}

#[test]
fn criterion_06_zipf_stability() {
    let mut detail = Vec::new();
    let mut pass = true;
    let mut a_values = Vec::new();
    for e in 4..=7 {
        let n = 10u64.pow(e);
        let sp = lexicon::rank_spectrum(&snap(n).table);
        let (f1, f2) = (sp.entries[0].frequency, sp.entries[1].frequency);
        pass &= (f1 - 0.20).abs() <= 0.02 && (f2 - 0.15).abs() <= 0.02;
        let a = fitters::fit_zipf_quadratic(&sp, LogBase::Ten).unwrap().a;
        a_values.push(a);
        detail.push(format!("n=1e{e}: f1={f1:.4} f2={f2:.4} a={a:.3}"));
    }
    let spread = a_values.iter().cloned().fold(f64::MIN, f64::max) - a_values.iter().cloned().fold(f64::MAX, f64::min);
    pass &= spread < 0.15;
    detail.push(format!("a spread={spread:.4}"));
    verdict(6, "Zipf stability", pass, detail.join("; "));
}

#[test]
fn criterion_07_orientation() {
    let ss: Vec<f64> = (2..=8)
        .map(|k| symmetry::symmetry_of_text(&fixture().text, k).unwrap().ss)
        .collect();
    let pass = ss.windows(2).all(|p| p[1] < p[0]) && ss[6] < 0.821;
    verdict(7, "symmetry decreases in k", pass, format!("SS(2..8)={ss:.4?}"));
}

#[test]
fn criterion_08_phrases() {
    let text = &fixture().text;
    let count = |p: &[&str]| {
        let words: Vec<DyckWord> = p.iter().map(|s| w(s)).collect();
        lexicon::phrase_count_encoded(text, &words).unwrap()
    };
    // Oracle for the occurrence positions of the first two queries.
    let naive = |a: &str, b: &str| -> Vec<u64> {
        let (a, b) = (text.symbol_of(&w(a)), text.symbol_of(&w(b)));
        text.symbols()
            .windows(2)
            .enumerate()
            .filter(|(_, p)| Some(p[0]) == a && Some(p[1]) == b)
            .map(|(i, _)| i as u64 + 1)
            .collect()
    };
    let sq = count(&["1100", "1100"]);
    let tens = count(&["10", "10"]);
    let fwd = count(&["10", "111000"]);
    let back = count(&["111000", "10"]);
    let pass = (sq.count, sq.first_position) == (1, Some(8))
        && naive("1100", "1100") == [8]
        && (tens.count, tens.first_position) == (1, Some(2))
        && naive("10", "10") == [2]
        && fwd.count == 0
        && back.count >= 2;
    verdict(
        8,
        "phrase occurrences",
        pass,
        format!(
            "1100 1100: {sq:?}; 10 10: {tens:?}; 10 111000: {}; 111000 10: {}",
            fwd.count, back.count
        ),
    );
}

fn brute_msd(z: &[f64], t: usize) -> f64 {
    let n = z.len();
    let mu = z.iter().sum::<f64>() / n as f64;
    let y: Vec<f64> = z.iter().map(|v| v - mu).collect();
    (0..n - t)
        .map(|s| {
            let d: f64 = y[s + 1..=s + t].iter().sum();
            d * d
        })
        .sum::<f64>()
        / (n - t) as f64
}

#[test]
fn criterion_09_msd_correctness() {
    let text = EncodedText::from_window(&CorpusWindow::generated(1, 10_000).unwrap()).unwrap();
    let sp = lexicon::rank_spectrum(&text.frequency_table());
    let lags = [1u64, 3, 10, 31, 100];
    let mut worst = 0.0f64;
    let mut signals = Vec::new();
    for e in sp.top(5) {
        let s = walks::signal_from_text(&text, &e.word);
        let z: Vec<f64> = text
            .symbols()
            .iter()
            .map(|&x| if Some(x) == text.symbol_of(&e.word) { 1.0 } else { 0.0 })
            .collect();
        let curve = walks::msd(&s, &lags).unwrap();
        for (&t, &v) in lags.iter().zip(&curve.values) {
            let o = brute_msd(&z, t as usize);
            worst = worst.max((v - o).abs() / o.abs().max(f64::MIN_POSITIVE));
        }
        signals.push(s);
    }
    let mut symmetric = true;
    let mut zero_diag = true;
    for a in &signals {
        zero_diag &= walks::cross_msd(a, a, &lags).unwrap().values.iter().all(|&v| v == 0.0);
        for b in &signals {
            let ab = walks::cross_msd(a, b, &lags).unwrap().values;
            let ba = walks::cross_msd(b, a, &lags).unwrap().values;
            symmetric &= ab.iter().zip(&ba).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
    let pass = worst <= 1e-9 && symmetric && zero_diag;
    verdict(
        9,
        "MSD correctness",
        pass,
        format!("max relative error {worst:.2e}, symmetric {symmetric}, zero on identical {zero_diag}"),
    );
}

#[test]
fn criterion_10_msd_phenomenology() {
    let text = &fixture().text;
    let lags = walks::default_lags(N);
    let fit = |s: &str| {
        let sig = walks::signal_from_text(text, &w(s));
        fitters::fit_segmented(&walks::msd(&sig, &lags).unwrap()).unwrap()
    };
    let family: Vec<(&str, fitters::SegmentedFit)> = ["10", "1010", "101010"].iter().map(|s| (*s, fit(s))).collect();
    let square = fit("1100");
    let mut pass = true;
    let mut detail = Vec::new();
    for (s, f) in &family {
        let ok = f.gamma2 > f.gamma1
            && (0.7..=1.3).contains(&f.gamma1)
            && (1.3..=2.05).contains(&f.gamma2)
            && f.crossover_detected;
        pass &= ok;
        detail.push(format!("{s}: g1={:.3} g2={:.3} tc={}", f.gamma1, f.gamma2, f.t_c));
    }
    let mean = family.iter().map(|(_, f)| f.gamma2).sum::<f64>() / family.len() as f64;
    pass &= square.gamma2 > 1.0 && square.gamma2 < mean;
    detail.push(format!("1100: g2={:.3} vs family mean {mean:.3}", square.gamma2));
    verdict(10, "MSD phenomenology", pass, detail.join("; "));
}

#[test]
fn criterion_11_compression() {
    let grid: Vec<u64> = (3..=7).map(|e| 10u64.pow(e)).collect();
    let curve = complexity::compression_curve(&fixture().window, &grid, complexity::DEFAULT_LEVEL).unwrap();
    let mut below = true;
    for r in &curve {
        let control = complexity::random_control(r.raw_bytes as usize, 1, complexity::DEFAULT_LEVEL).unwrap();
        below &= r.ratio < control.ratio;
    }
    let ratios: Vec<f64> = curve.iter().map(|r| r.ratio).collect();
    let interior = ratios[1..ratios.len() - 1].iter().cloned().fold(f64::INFINITY, f64::min);
    let has_min = interior < ratios[0] && interior < ratios[ratios.len() - 1];
    verdict(
        11,
        "compression ratio",
        below && has_min,
        format!("below control {below}, interior minimum {has_min}, CR={ratios:.4?}"),
    );
}

/// Every planar tree with exactly `edges` edges, built from ordered forests.
fn trees(edges: usize) -> Vec<PlanarTree> {
    forests(edges).into_iter().map(PlanarTree::with_children).collect()
}

fn forests(edges: usize) -> Vec<Vec<PlanarTree>> {
    if edges == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // the first child subtree uses `k` edges plus the edge to it
    for k in 0..edges {
        for first in trees(k) {
            for rest in forests(edges - 1 - k) {
                let mut f = vec![first.clone()];
                f.extend(rest);
                out.push(f);
            }
        }
    }
    out
}

fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[test]
fn criterion_12_codec() {
    let mut census = Vec::new();
    let mut identity = true;
    let mut balanced_census = true;
    for m in 0..=8usize {
        let ts = trees(m);
        let mut words = HashSet::new();
        for t in &ts {
            let word = t.encode().unwrap();
            identity &= PlanarTree::decode(&word) == *t && word.len() == 2 * m;
            words.insert(word);
        }
        // Oracle: count balanced bit strings of length 2m directly.
        let balanced = (0u32..(1 << (2 * m)))
            .filter(|&b| {
                let mut depth = 0i32;
                (0..2 * m).rev().all(|i| {
                    depth += if b >> i & 1 == 1 { 1 } else { -1 };
                    depth >= 0
                }) && depth == 0
            })
            .count();
        balanced_census &= balanced == words.len() && words.len() == ts.len();
        census.push(words.len() as u64);
    }
    let expected: Vec<u64> = (0..=8).map(catalan).collect();
    let pass = identity && balanced_census && census == expected && expected == [1, 1, 2, 5, 14, 42, 132, 429, 1430];
    verdict(12, "codec identity and Catalan census", pass, format!("census {census:?}"));
}
