//! `natext report`: every table and curve at desk scale, with each headline
//! number compared against the value the published study reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use super::*;

/// Published dictionary sizes `(n, d_n)`.
const TABLE1: [(u64, usize); 9] = [
    (10, 3),
    (100, 12),
    (1_000, 29),
    (10_000, 63),
    (100_000, 123),
    (1_000_000, 230),
    (10_000_000, 412),
    (100_000_000, 708),
    (1_000_000_000, 1195),
];

/// Published top-five ranked words.
const TABLE2: [(u64, &[&str]); 9] = [
    (10, &["10", "1100", "1010"]),
    (100, &["1010", "10", "110010", "1100", "101100"]),
    (1_000, &["1010", "10", "110010", "101010", "11001010"]),
    (10_000, &["1010", "101010", "10", "110010", "11001010"]),
    (100_000, &["1010", "101010", "11001010", "10", "110010"]),
    (1_000_000, &["1010", "101010", "11001010", "10101010", "10"]),
    (10_000_000, &["101010", "1010", "10101010", "11001010", "10"]),
    (100_000_000, &["101010", "1010", "10101010", "11001010", "1100101010"]),
    (1_000_000_000, &["101010", "1010", "10101010", "11001010", "1100101010"]),
];

const SQUARE_FREE: [&str; 5] = ["10", "1010", "101010", "10101010", "1010101010"];
const NON_SQUARE_FREE: [&str; 5] = ["1100", "110010", "11001010", "1100101010", "110010101010"];

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    observed: serde_json::Value,
    expected: String,
    pass: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, observed: impl Serialize, expected: impl Into<String>, pass: bool) {
        self.0.push(Check {
            name: name.into(),
            observed: serde_json::to_value(observed).unwrap_or(serde_json::Value::Null),
            expected: expected.into(),
            pass,
        });
    }
}

fn w(s: &str) -> DyckWord {
    s.parse().expect("literal Dyck word")
}

fn within(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

pub(super) fn cmd_report(a: ReportArgs, threads: usize, command_line: Vec<String>) -> CliResult {
    let mut out = OutDir::create(&a.out, "report").stage("output")?;
    let (corpus, scratch) = match &a.input {
        Some(p) => (Corpus::open(p).stage("open corpus")?, None),
        None => {
            let dir = scratch_dir();
            ensure_dir(&dir).stage("scratch")?;
            let path: PathBuf = dir.join(format!("natext-report-{}-{}.nt", a.max, std::process::id()));
            eprintln!("generating {} positions into {}", a.max, path.display());
            let opts = GenerateOptions {
                threads,
                ..GenerateOptions::default()
            };
            corpus::generate_file(a.max, &path, &opts).stage("generate")?;
            (Corpus::open(&path).stage("open corpus")?, Some(path))
        }
    };
    let result = build_report(&corpus, &a, &mut out);
    if let Some(p) = scratch {
        let _ = std::fs::remove_file(corpus::index_path(&p));
        let _ = std::fs::remove_file(&p);
    }
    let checks = result?;
    out.finish(command_line).stage("output")?;
    let passed = checks.0.iter().filter(|c| c.pass).count();
    println!("{passed}/{} checks pass; summary in {}", checks.0.len(), out_summary(&a.out).display());
    Ok(())
}

fn out_summary(dir: &std::path::Path) -> PathBuf {
    dir.join("summary.md")
}

fn build_report(corpus: &Corpus, a: &ReportArgs, out: &mut OutDir) -> CliResult<Checks> {
    let n_max = corpus.max_position();
    let window = corpus.full();
    out.set_corpus(CorpusInfo::of(corpus).stage("open corpus")?);
    out.param("log_base", a.log_base);
    out.param("level", a.level);
    let mut checks = Checks::default();

    eprintln!("reading corpus");
    let text = EncodedText::from_window(&window).stage("read corpus")?;
    let powers = powers_of_ten(10, n_max);
    let mut grid = grid_125(10, n_max);
    if grid.last() != Some(&n_max) {
        grid.push(n_max);
    }
    let snaps = text.checkpoints(&grid).stage("dictionary")?;
    let at = |n: u64| snaps.iter().find(|c| c.n == n);

    // Dictionary and Heaps.
    write_dictionary(out, &snaps).stage("dictionary")?;
    for &(n, d) in TABLE1.iter().filter(|(n, _)| *n <= n_max) {
        let got = at(n).map_or(0, |c| c.dictionary_size);
        checks.add(format!("dictionary size d({n})"), got, format!("{d}"), got == d);
    }
    let entropy_points = write_entropy(out, &snaps).stage("entropy")?;
    let heaps = heaps_points(&snaps);
    write_fits(out, &heaps, &entropy_points).stage("fits")?;
    let table_pts: Vec<(f64, f64)> = TABLE1.iter().map(|&(n, d)| (n as f64, d as f64)).collect();
    if let Ok(f) = fitters::fit_power_law(&table_pts, Weighting::Linear) {
        checks.add("Heaps beta, refit of published sizes", f.beta, "0.234 ± 0.02", within(f.beta, 0.234, 0.02));
    }
    if let Ok(f) = fitters::fit_power_law(&heaps, Weighting::Linear) {
        checks.add("Heaps beta, generated corpus", f.beta, "in [0.19, 0.29]", (0.19..=0.29).contains(&f.beta));
    }

    // Worked examples and entropy.
    if let Some(c) = at(10) {
        let (p10, p1010) = (c.table.frequency(&w("10")), c.table.frequency(&w("1010")));
        checks.add("p(10) over 1..10", p10, "0.4", p10 == 0.4);
        checks.add("p(1010) over 1..10", p1010, "0.2", p1010 == 0.2);
        let sub = EncodedText::from_window(&window.sub_window(2, 10).stage("symmetry")?).stage("symmetry")?;
        let r = symmetry::symmetry_of_text(&sub, 4).stage("symmetry")?;
        checks.add("SS(4) over 2..10", [r.reversible, r.distinct], "2/6", (r.reversible, r.distinct) == (2, 6));
    }
    if let Some(c) = at(100) {
        let h = lexicon::entropy(&c.table).unwrap_or(f64::NAN);
        checks.add("entropy h(100)", h, "2.77 ± 0.01", within(h, 2.77, 0.01));
    }
    let bound_ok = snaps.iter().all(|c| {
        matches!(
            (lexicon::entropy(&c.table), lexicon::entropy_bound(c.dictionary_size)),
            (Ok(h), Ok(b)) if h <= b + 1e-12
        )
    });
    checks.add("entropy below log2 d at every checkpoint", bound_ok, "true", bound_ok);

    // Ranks and Zipf.
    let mut zipf_rows = Vec::new();
    let mut a_values = Vec::new();
    for &n in &powers {
        let c = at(n).expect("powers are on the grid");
        let sp = write_ranks(out, c).stage("ranks")?;
        if let Some((_, row)) = TABLE2.iter().find(|(m, _)| *m == n) {
            let got: Vec<String> = sp.top(5).iter().map(|e| e.word.to_string()).collect();
            let ok = got.len() >= row.len() && got.iter().zip(row.iter()).all(|(a, b)| a == b);
            checks.add(format!("top ranks at n={n}"), &got, row.join(" "), ok);
        }
        if n >= 10_000 {
            let f1 = sp.entries.first().map_or(0.0, |e| e.frequency);
            let f2 = sp.entries.get(1).map_or(0.0, |e| e.frequency);
            checks.add(format!("f(1) at n={n}"), f1, "0.20 ± 0.02", within(f1, 0.20, 0.02));
            checks.add(format!("f(2) at n={n}"), f2, "0.15 ± 0.02", within(f2, 0.15, 0.02));
        }
        for (base, fit) in zipf_fits(&sp, a.log_base) {
            if let Ok(f) = fit {
                let base_s = serde_json::to_value(base).unwrap();
                zipf_rows.push(vec![
                    n.to_string(),
                    base_s.as_str().unwrap().to_string(),
                    num(f.a),
                    num(f.b),
                    num(f.c),
                    num(f.r2),
                    f.points.to_string(),
                ]);
                if base == a.log_base && n >= 10_000 {
                    a_values.push(f.a);
                }
            }
        }
    }
    out.csv("zipf_fits.csv", &["n", "base", "a", "b", "c", "r2", "ranks"], zipf_rows).stage("zipf")?;
    if a_values.len() >= 2 {
        let spread = a_values.iter().cloned().fold(f64::MIN, f64::max) - a_values.iter().cloned().fold(f64::MAX, f64::min);
        checks.add("spread of quadratic coefficient a_n, n ≥ 1e4", spread, "< 0.15", spread < 0.15);
    }

    // Symmetry.
    eprintln!("symmetry");
    let sym_ends: Vec<u64> = powers.iter().copied().filter(|&n| n >= 1000).collect();
    let ks: Vec<usize> = (2..=8).collect();
    let sym = symmetry_rows(&text, &sym_ends, &ks).stage("symmetry")?;
    write_symmetry(out, &sym).stage("symmetry")?;
    let last: Vec<f64> = sym.iter().filter(|r| r.end == n_max).map(|r| r.ss).collect();
    if last.len() == ks.len() {
        let decreasing = last.windows(2).all(|p| p[1] < p[0]);
        checks.add(format!("SS(k) strictly decreasing in k at n={n_max}"), &last, "decreasing", decreasing);
        checks.add(format!("SS(8) at n={n_max}"), last[6], "< 0.821", last[6] < 0.821);
    }

    // Phrases.
    let phrase = |p: &[&str]| {
        let words: Vec<DyckWord> = p.iter().map(|s| w(s)).collect();
        lexicon::phrase_count_encoded(&text, &words)
    };
    let mut phr = |name: &str, p: &[&str], pass: fn(&lexicon::PhraseHits) -> bool, expected: &str| -> CliResult {
        let h = phrase(p).stage("phrase")?;
        checks.add(format!("phrase \"{name}\""), json!({"count": h.count, "first_position": h.first_position}), expected, pass(&h));
        Ok(())
    };
    phr("1100 1100", &["1100", "1100"], |h| h.count == 1 && h.first_position == Some(8), "count 1 at 8")?;
    phr("10 10", &["10", "10"], |h| h.count == 1 && h.first_position == Some(2), "count 1 at 2")?;
    phr("10 111000", &["10", "111000"], |h| h.count == 0, "count 0")?;
    phr("111000 10", &["111000", "10"], |h| h.count >= 2, "count ≥ 2")?;

    // Compression.
    eprintln!("compression");
    if n_max >= 1000 {
        let mut cps = grid_125(1000, n_max);
        if cps.last() != Some(&n_max) {
            cps.push(n_max);
        }
        let rows = compression_rows(&window, &cps, a.level).stage("compression")?;
        write_compression(out, &rows).stage("compression")?;
        let below = rows.iter().all(|r| r.corpus.ratio < r.control.ratio);
        checks.add("CR below random control at every checkpoint", below, "true", below);
        let ratios: Vec<f64> = rows.iter().map(|r| r.corpus.ratio).collect();
        if ratios.len() >= 3 {
            let interior = ratios[1..ratios.len() - 1].iter().cloned().fold(f64::INFINITY, f64::min);
            let ok = interior < ratios[0] && interior < *ratios.last().unwrap();
            let argmin = rows
                .iter()
                .min_by(|x, y| x.corpus.ratio.total_cmp(&y.corpus.ratio))
                .map(|r| r.corpus.n);
            checks.add("CR interior minimum", json!({"argmin_n": argmin, "first": ratios[0], "last": ratios.last()}), "minimum strictly inside the grid", ok);
        }
    }

    // Walks.
    eprintln!("walks");
    let lags = walks::default_lags(window.len());
    let mut fit_rows = Vec::new();
    let mut fits = std::collections::BTreeMap::new();
    for word in SQUARE_FREE.iter().chain(NON_SQUARE_FREE.iter()) {
        let s = walks::signal_from_text(&text, &w(word));
        let curve = walks::msd(&s, &lags).stage("msd")?;
        let fit = write_msd(out, &format!("msd_{word}"), &curve).stage("msd")?;
        if let Ok(f) = &fit {
            fit_rows.push(vec![
                word.to_string(),
                s.count().to_string(),
                num(f.gamma1),
                num(f.gamma2),
                num(f.t_c),
                num(f.half_width1),
                num(f.half_width2),
                f.crossover_detected.to_string(),
            ]);
            fits.insert(word.to_string(), f.clone());
        }
    }
    out.csv(
        "msd_fits.csv",
        &["word", "occurrences", "gamma1", "gamma2", "t_c", "gamma1_95", "gamma2_95", "crossover"],
        fit_rows,
    )
    .stage("msd")?;
    let family: Vec<&fitters::SegmentedFit> = SQUARE_FREE[..3].iter().filter_map(|w| fits.get(*w)).collect();
    for (word, f) in SQUARE_FREE[..3].iter().zip(&family) {
        let ok = f.gamma2 > f.gamma1
            && (0.7..=1.3).contains(&f.gamma1)
            && (1.3..=2.05).contains(&f.gamma2)
            && f.crossover_detected;
        checks.add(
            format!("MSD crossover of {word}"),
            json!({"gamma1": f.gamma1, "gamma2": f.gamma2, "t_c": f.t_c}),
            "gamma1 in [0.7,1.3], gamma2 in [1.3,2.05], gamma2 > gamma1, crossover",
            ok,
        );
    }
    if let (Some(f), 3) = (fits.get("1100"), family.len()) {
        let mean = family.iter().map(|f| f.gamma2).sum::<f64>() / 3.0;
        checks.add(
            "MSD of 1100 against the square-free family",
            json!({"gamma2": f.gamma2, "family_mean_gamma2": mean}),
            "1 < gamma2 < family mean",
            f.gamma2 > 1.0 && f.gamma2 < mean,
        );
    }
    let signals: Vec<_> = SQUARE_FREE.iter().map(|s| walks::signal_from_text(&text, &w(s))).collect();
    let mut cross_rows = Vec::new();
    for i in 0..signals.len() {
        for j in (i + 1)..signals.len() {
            let curve = walks::cross_msd(&signals[i], &signals[j], &lags).stage("cross msd")?;
            let name = format!("xmsd_{}_{}", SQUARE_FREE[i], SQUARE_FREE[j]);
            if let Ok(f) = write_msd(out, &name, &curve).stage("cross msd")? {
                cross_rows.push(vec![
                    SQUARE_FREE[i].to_string(),
                    SQUARE_FREE[j].to_string(),
                    num(f.gamma1),
                    num(f.gamma2),
                    num(f.t_c),
                ]);
            }
        }
    }
    out.csv("xmsd_fits.csv", &["first", "second", "gamma1", "gamma2", "t_c"], cross_rows).stage("cross msd")?;

    out.json("report.json", &checks.0).stage("output")?;
    out.text("summary.md", &summary(&checks, n_max)).stage("output")?;
    Ok(checks)
}

fn summary(checks: &Checks, n_max: u64) -> String {
    let mut s = String::new();
    let passed = checks.0.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "# natext report, N = {n_max}\n");
    let _ = writeln!(s, "{passed} of {} checks pass.\n", checks.0.len());
    let _ = writeln!(s, "| check | observed | expected | result |");
    let _ = writeln!(s, "|---|---|---|---|");
    for c in &checks.0 {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} |",
            c.name,
            c.observed,
            c.expected,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    s
}
