//! The `natext` command line: corpus generation and one command per analysis,
//! each writing plot-ready CSV/JSON next to a run manifest.

mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::complexity::{self, CompressionReport};
use crate::corpus::{self, Corpus, CorpusWindow, Format, GenerateOptions};
use crate::error::{Error, Result};
use crate::fitters::{self, LogBase, Weighting};
use crate::lexicon::{self, Checkpoint, EncodedText};
use crate::symmetry;
use crate::tree::DyckWord;
use crate::walks::{self, MsdCurve};

pub use output::{file_digest, num, CorpusInfo, OutDir, RunManifest};

/// Seed of the random-bytes compression control.
pub const CONTROL_SEED: u64 = 0x6e61_7465_7874;

#[derive(Debug, Parser)]
#[command(name = "natext", version, about = "Natural Text of Dyck words: generation and statistics")]
pub struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write positions 1..=N to a corpus file with an index sidecar.
    Generate(GenerateArgs),
    /// Dictionary growth, entropy and the Heaps and entropy fits.
    Stats(StatsArgs),
    /// Statistical symmetry of k-tuples.
    Symmetry(SymmetryArgs),
    /// gzip compression ratio of prefixes, with a random-bytes control.
    Compress(CompressArgs),
    /// Rank-frequency spectra and quadratic log-log fits.
    Zipf(ZipfArgs),
    /// MSD of one word's indicator walk and its two-segment fit.
    Msd(MsdArgs),
    /// Cross MSD of two words.
    Xmsd(XmsdArgs),
    /// Count contiguous occurrences of a phrase.
    Phrase(PhraseArgs),
    /// Full desk-scale reproduction with a summary against expected values.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_count)]
    pub max: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "lines")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Corpus file (lines or packed).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// First position of the analyzed window.
    #[arg(long, default_value_t = 1)]
    pub start: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// `A..B` for the 1-2-5 grid within [A, B], or a comma list.
    #[arg(long, value_parser = parse_checkpoints)]
    pub checkpoints: Option<Checkpoints>,
}

#[derive(Debug, Args)]
pub struct SymmetryArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Tuple lengths: `2..8`, `4`, or a comma list.
    #[arg(long, default_value = "2..8", value_parser = parse_k)]
    pub k: KSet,
    /// Window ends (default: the whole corpus).
    #[arg(long, value_parser = parse_checkpoints)]
    pub checkpoints: Option<Checkpoints>,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_parser = parse_checkpoints)]
    pub checkpoints: Option<Checkpoints>,
    #[arg(long, default_value_t = complexity::DEFAULT_LEVEL, value_parser = clap::value_parser!(u32).range(0..=9))]
    pub level: u32,
}

#[derive(Debug, Args)]
pub struct ZipfArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_parser = parse_checkpoints)]
    pub checkpoints: Option<Checkpoints>,
    #[arg(long = "log-base", default_value = "10")]
    pub log_base: LogBase,
}

#[derive(Debug, Args)]
pub struct MsdArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long)]
    pub word: DyckWord,
    /// Largest lag, or `auto` for N/10.
    #[arg(long, default_value = "auto", value_parser = parse_tmax)]
    pub tmax: TMax,
}

#[derive(Debug, Args)]
pub struct XmsdArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Two words separated by a comma.
    #[arg(long, value_parser = parse_pair)]
    pub words: WordPair,
    #[arg(long, default_value = "auto", value_parser = parse_tmax)]
    pub tmax: TMax,
}

#[derive(Debug, Args)]
pub struct PhraseArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Space-separated words, e.g. "1100 1100".
    #[arg(long, value_parser = parse_phrase)]
    pub query: Phrase,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Corpus length when no input is given.
    #[arg(long, default_value = "1e7", value_parser = parse_count)]
    pub max: u64,
    /// Existing corpus; otherwise one is generated under NATEXT_TMPDIR.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "natext-report")]
    pub out: PathBuf,
    #[arg(long = "log-base", default_value = "10")]
    pub log_base: LogBase,
    #[arg(long, default_value_t = complexity::DEFAULT_LEVEL, value_parser = clap::value_parser!(u32).range(0..=9))]
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoints(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSet(pub Vec<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TMax {
    Auto,
    Lag(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordPair(pub DyckWord, pub DyckWord);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phrase(pub Vec<DyckWord>);

/// Integer counts, accepting `1e7`-style shorthand.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| format!("bad count {s:?}"))?;
        let e: u32 = e.parse().map_err(|_| format!("bad count {s:?}"))?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("count {s:?} overflows"));
    }
    Err(format!("bad count {s:?}"))
}

/// `1·10^k, 2·10^k, 5·10^k` values within `[lo, hi]`.
pub fn grid_125(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 1u64;
    loop {
        for m in [1, 2, 5] {
            if let Some(v) = p.checked_mul(m) {
                if v >= lo && v <= hi {
                    out.push(v);
                }
            }
        }
        match p.checked_mul(10) {
            Some(next) if next <= hi => p = next,
            _ => break,
        }
    }
    out
}

pub fn powers_of_ten(lo: u64, hi: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |p| p.checked_mul(10))
        .take_while(|&p| p <= hi)
        .filter(|&p| p >= lo)
        .collect()
}

pub fn parse_checkpoints(s: &str) -> std::result::Result<Checkpoints, String> {
    let mut v = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse_count(a)?, parse_count(b)?);
        if a == 0 || a > b {
            return Err(format!("empty checkpoint range {s:?}"));
        }
        grid_125(a, b)
    } else {
        s.split(',').map(parse_count).collect::<std::result::Result<Vec<_>, _>>()?
    };
    if v.contains(&0) {
        return Err("checkpoint 0 is not a position".into());
    }
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return Err(format!("no checkpoints in {s:?}"));
    }
    Ok(Checkpoints(v))
}

pub fn parse_k(s: &str) -> std::result::Result<KSet, String> {
    let bad = || format!("bad k set {s:?}");
    let mut v: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<std::result::Result<_, _>>()?
    };
    v.sort_unstable();
    v.dedup();
    if v.is_empty() || v[0] == 0 {
        return Err(format!("k must be at least 1 in {s:?}"));
    }
    Ok(KSet(v))
}

pub fn parse_tmax(s: &str) -> std::result::Result<TMax, String> {
    if s == "auto" {
        Ok(TMax::Auto)
    } else {
        parse_count(s).and_then(|t| {
            if t == 0 {
                Err("tmax must be at least 1".into())
            } else {
                Ok(TMax::Lag(t))
            }
        })
    }
}

pub fn parse_pair(s: &str) -> std::result::Result<WordPair, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated words, got {s:?}"))?;
    Ok(WordPair(
        a.trim().parse().map_err(|e: Error| e.to_string())?,
        b.trim().parse().map_err(|e: Error| e.to_string())?,
    ))
}

pub fn parse_phrase(s: &str) -> std::result::Result<Phrase, String> {
    let words = s
        .split_whitespace()
        .map(|w| w.parse::<DyckWord>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if words.is_empty() {
        return Err("empty phrase".into());
    }
    Ok(Phrase(words))
}

impl TMax {
    pub fn lags(self, window_len: u64) -> Result<Vec<u64>> {
        match self {
            TMax::Auto => Ok(walks::default_lags(window_len)),
            TMax::Lag(t) if t < window_len => Ok(walks::log_lags(t, walks::LAGS_PER_DECADE)),
            TMax::Lag(t) => Err(Error::Range(format!(
                "tmax {t} must be below the window length {window_len}"
            ))),
        }
    }
}

/// A failure tagged with the stage that produced it.
#[derive(Debug)]
pub struct CliError {
    pub stage: &'static str,
    pub error: Error,
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, CliError>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, CliError> {
        self.map_err(|error| CliError { stage, error })
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Parses `std::env::args` and runs; exit 2 on bad flags, 1 on failure.
pub fn run() -> ExitCode {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, command_line) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("natext: {} failed: {}", e.stage, e.error);
            ExitCode::from(1)
        }
    }
}

pub fn execute(cli: Cli, command_line: Vec<String>) -> CliResult {
    if let Some(t) = cli.threads {
        // Ignored when a pool already exists (repeated in-process runs).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let threads = cli.threads.unwrap_or_else(rayon::current_num_threads).max(1);
    match cli.command {
        Command::Generate(a) => cmd_generate(a, threads, command_line),
        Command::Stats(a) => cmd_stats(a, command_line),
        Command::Symmetry(a) => cmd_symmetry(a, command_line),
        Command::Compress(a) => cmd_compress(a, command_line),
        Command::Zipf(a) => cmd_zipf(a, command_line),
        Command::Msd(a) => cmd_msd(a, command_line),
        Command::Xmsd(a) => cmd_xmsd(a, command_line),
        Command::Phrase(a) => cmd_phrase(a),
        Command::Report(a) => report::cmd_report(a, threads, command_line),
    }
}

fn cmd_generate(a: GenerateArgs, threads: usize, command_line: Vec<String>) -> CliResult {
    if a.max == 0 {
        return Err(Error::Domain("--max must be at least 1".into())).stage("generate");
    }
    let dir = match a.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = a
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    let mut out = OutDir::create(&dir, &name).stage("generate")?;
    let checkpoints = powers_of_ten(10, a.max);
    let opts = GenerateOptions {
        format: a.format,
        threads,
        checkpoints: checkpoints.clone(),
        ..GenerateOptions::default()
    };
    let report = corpus::generate_file(a.max, &a.out, &opts).stage("generate")?;
    out.param("max", a.max);
    out.param("format", a.format);
    out.param("threads", threads);
    out.param("distinct_at", &report.distinct_at);
    out.param("bytes_written", report.bytes_written);
    out.set_corpus(CorpusInfo {
        path: a.out.clone(),
        format: a.format,
        max_position: a.max,
        sha256: file_digest(&a.out).stage("generate")?,
    });
    out.finish(command_line).stage("generate")?;
    println!(
        "wrote {} words ({} bytes) to {}",
        report.words_written,
        report.bytes_written,
        a.out.display()
    );
    Ok(())
}

struct Input {
    window: CorpusWindow,
    out: OutDir,
}

fn open_input(io: &InputArgs, command: &str) -> CliResult<Input> {
    let corpus = Corpus::open(&io.input).stage("open corpus")?;
    let window = corpus.window(io.start, corpus.max_position()).stage("open corpus")?;
    let mut out = OutDir::create(&io.out, command).stage("output")?;
    out.set_corpus(CorpusInfo::of(&corpus).stage("open corpus")?);
    out.param("start", io.start);
    Ok(Input { window, out })
}

fn resolve_checkpoints(given: &Option<Checkpoints>, window: &CorpusWindow, default: Vec<u64>) -> Result<Vec<u64>> {
    let cps = given.as_ref().map_or(default, |c| c.0.clone());
    if let Some(&bad) = cps.iter().find(|&&c| !window.contains_position(c)) {
        return Err(Error::Range(format!(
            "checkpoint {bad} outside the corpus window [{}, {}]",
            window.start(),
            window.end()
        )));
    }
    Ok(cps)
}

/// 1-2-5 grid inside the window plus its last position.
fn default_grid(window: &CorpusWindow, lo: u64) -> Vec<u64> {
    let mut v = grid_125(lo.max(window.start()), window.end());
    if v.last() != Some(&window.end()) {
        v.push(window.end());
    }
    v
}

pub(crate) fn write_dictionary(out: &mut OutDir, cps: &[Checkpoint]) -> Result<()> {
    out.csv(
        "dictionary.csv",
        &["n", "dictionary_size", "density"],
        cps.iter().map(|c| vec![c.n.to_string(), c.dictionary_size.to_string(), num(c.density())]),
    )?;
    Ok(())
}

pub(crate) fn write_entropy(out: &mut OutDir, cps: &[Checkpoint]) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for c in cps {
        let h = lexicon::entropy(&c.table).unwrap_or(f64::NAN);
        let bound = lexicon::entropy_bound(c.dictionary_size).unwrap_or(f64::NAN);
        if h.is_finite() && c.n >= 3 {
            points.push((c.n as f64, h));
        }
        rows.push(vec![
            c.n.to_string(),
            num(h),
            num(bound),
            num(lexicon::fitted_bound(c.n as f64)),
        ]);
    }
    out.csv("entropy.csv", &["n", "entropy_bits", "log2_dictionary", "fitted_bound"], rows)?;
    Ok(points)
}

pub(crate) fn heaps_points(cps: &[Checkpoint]) -> Vec<(f64, f64)> {
    cps.iter()
        .filter(|c| c.dictionary_size > 0)
        .map(|c| (c.n as f64, c.dictionary_size as f64))
        .collect()
}

fn fit_json<T: serde::Serialize>(r: Result<T>) -> serde_json::Value {
    match r {
        Ok(v) => serde_json::to_value(v).unwrap_or(serde_json::Value::Null),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    }
}

pub(crate) fn write_fits(out: &mut OutDir, heaps: &[(f64, f64)], entropy: &[(f64, f64)]) -> Result<()> {
    let heaps_json: serde_json::Map<String, serde_json::Value> = [Weighting::Linear, Weighting::LogLog]
        .into_iter()
        .map(|w| {
            let key = serde_json::to_value(w).unwrap().as_str().unwrap().to_string();
            (key, fit_json(fitters::fit_power_law(heaps, w).map(|f| f.report(heaps))))
        })
        .collect();
    out.json("heaps_fit.json", &heaps_json)?;
    out.json(
        "entropy_fit.json",
        &fit_json(fitters::fit_entropy_growth(entropy).map(|f| f.report(entropy))),
    )?;
    Ok(())
}

fn cmd_stats(a: StatsArgs, command_line: Vec<String>) -> CliResult {
    let mut input = open_input(&a.io, "stats")?;
    let cps = resolve_checkpoints(&a.checkpoints, &input.window, default_grid(&input.window, 10)).stage("stats")?;
    let text = EncodedText::from_window(&input.window).stage("read corpus")?;
    let snaps = text.checkpoints(&cps).stage("stats")?;
    let out = &mut input.out;
    out.param("checkpoints", &cps);
    write_dictionary(out, &snaps).stage("write dictionary")?;
    let entropy_points = write_entropy(out, &snaps).stage("write entropy")?;
    write_fits(out, &heaps_points(&snaps), &entropy_points).stage("fits")?;
    input.out.finish(command_line).stage("output")?;
    if let Some(last) = snaps.last() {
        println!("n={} dictionary_size={} density={}", last.n, last.dictionary_size, num(last.density()));
    }
    Ok(())
}

pub(crate) fn symmetry_rows(text: &EncodedText, ends: &[u64], ks: &[usize]) -> Result<Vec<symmetry::SymmetryReport>> {
    let mut reports = Vec::new();
    for &end in ends {
        let prefix;
        let t = if end == text.end() {
            text
        } else {
            prefix = text.prefix(end)?;
            &prefix
        };
        for &k in ks {
            reports.push(symmetry::symmetry_of_text(t, k)?);
        }
    }
    Ok(reports)
}

pub(crate) fn write_symmetry(out: &mut OutDir, reports: &[symmetry::SymmetryReport]) -> Result<()> {
    out.csv(
        "symmetry.csv",
        &["start", "n", "k", "distinct", "reversible", "ss", "keying", "includes_empty_word"],
        reports.iter().map(|r| {
            vec![
                r.start.to_string(),
                r.end.to_string(),
                r.k.to_string(),
                r.distinct.to_string(),
                r.reversible.to_string(),
                num(r.ss),
                format!("{:?}", r.keying).to_lowercase(),
                r.includes_empty_word.to_string(),
            ]
        }),
    )?;
    Ok(())
}

fn cmd_symmetry(a: SymmetryArgs, command_line: Vec<String>) -> CliResult {
    let mut input = open_input(&a.io, "symmetry")?;
    let ends = resolve_checkpoints(&a.checkpoints, &input.window, vec![input.window.end()]).stage("symmetry")?;
    let text = EncodedText::from_window(&input.window).stage("read corpus")?;
    let reports = symmetry_rows(&text, &ends, &a.k.0).stage("symmetry")?;
    input.out.param("k", &a.k.0);
    input.out.param("checkpoints", &ends);
    write_symmetry(&mut input.out, &reports).stage("write symmetry")?;
    input.out.finish(command_line).stage("output")?;
    for r in &reports {
        println!("n={} k={} ss={}", r.end, r.k, num(r.ss));
    }
    Ok(())
}

pub(crate) struct CompressionRow {
    pub corpus: CompressionReport,
    pub control: CompressionReport,
}

pub(crate) fn compression_rows(window: &CorpusWindow, cps: &[u64], level: u32) -> Result<Vec<CompressionRow>> {
    complexity::compression_curve(window, cps, level)?
        .into_iter()
        .map(|corpus| {
            let control = complexity::random_control(corpus.raw_bytes as usize, CONTROL_SEED, level)?;
            Ok(CompressionRow { corpus, control })
        })
        .collect()
}

pub(crate) fn write_compression(out: &mut OutDir, rows: &[CompressionRow]) -> Result<()> {
    out.csv(
        "compression.csv",
        &["n", "raw_bytes", "compressed_bytes", "ratio", "random_control_ratio", "level"],
        rows.iter().map(|r| {
            vec![
                r.corpus.n.to_string(),
                r.corpus.raw_bytes.to_string(),
                r.corpus.compressed_bytes.to_string(),
                num(r.corpus.ratio),
                num(r.control.ratio),
                r.corpus.level.to_string(),
            ]
        }),
    )?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.corpus.n as f64, r.corpus.ratio)).collect();
    out.json("cr_fit.json", &fit_json(fitters::fit_cr_curve(&pts).map(|f| f.report(&pts))))?;
    Ok(())
}

fn cmd_compress(a: CompressArgs, command_line: Vec<String>) -> CliResult {
    let mut input = open_input(&a.io, "compress")?;
    let cps = resolve_checkpoints(&a.checkpoints, &input.window, default_grid(&input.window, 1000)).stage("compress")?;
    let rows = compression_rows(&input.window, &cps, a.level).stage("compress")?;
    input.out.param("checkpoints", &cps);
    input.out.param("level", a.level);
    input.out.param("control_seed", CONTROL_SEED);
    write_compression(&mut input.out, &rows).stage("write compression")?;
    input.out.finish(command_line).stage("output")?;
    for r in &rows {
        println!("n={} cr={} control={}", r.corpus.n, num(r.corpus.ratio), num(r.control.ratio));
    }
    Ok(())
}

pub(crate) fn write_ranks(out: &mut OutDir, c: &Checkpoint) -> Result<lexicon::RankSpectrum> {
    let sp = lexicon::rank_spectrum(&c.table);
    out.csv(
        &format!("ranks_{}.csv", c.n),
        &["rank", "word", "count", "frequency"],
        sp.entries.iter().map(|e| {
            vec![e.rank.to_string(), e.word.to_string(), e.count.to_string(), num(e.frequency)]
        }),
    )?;
    Ok(sp)
}

/// Quadratic fits in both bases, primary base first.
pub(crate) fn zipf_fits(sp: &lexicon::RankSpectrum, primary: LogBase) -> Vec<(LogBase, Result<fitters::QuadraticLogFit>)> {
    let other = match primary {
        LogBase::Ten => LogBase::E,
        LogBase::E => LogBase::Ten,
    };
    [primary, other]
        .into_iter()
        .map(|b| (b, fitters::fit_zipf_quadratic(sp, b)))
        .collect()
}

fn cmd_zipf(a: ZipfArgs, command_line: Vec<String>) -> CliResult {
    let mut input = open_input(&a.io, "zipf")?;
    let mut default = powers_of_ten(input.window.start(), input.window.end());
    if default.last() != Some(&input.window.end()) {
        default.push(input.window.end());
    }
    let cps = resolve_checkpoints(&a.checkpoints, &input.window, default).stage("zipf")?;
    let text = EncodedText::from_window(&input.window).stage("read corpus")?;
    let snaps = text.checkpoints(&cps).stage("zipf")?;
    let out = &mut input.out;
    out.param("checkpoints", &cps);
    out.param("log_base", a.log_base);
    out.param("tie_break", lexicon::TieBreak::default());
    let mut fit_rows = Vec::new();
    let mut fits_json = Vec::new();
    for c in &snaps {
        let sp = write_ranks(out, c).stage("write ranks")?;
        for (base, fit) in zipf_fits(&sp, a.log_base) {
            if let Ok(f) = &fit {
                fit_rows.push(vec![
                    c.n.to_string(),
                    serde_json::to_value(base).unwrap().as_str().unwrap().to_string(),
                    num(f.a),
                    num(f.b),
                    num(f.c),
                    num(f.r2),
                    f.points.to_string(),
                ]);
            }
            let pts: Vec<(f64, f64)> = sp.entries.iter().map(|e| (e.rank as f64, e.frequency)).collect();
            fits_json.push(serde_json::json!({ "n": c.n, "fit": fit_json(fit.map(|f| f.report(&pts))) }));
        }
        println!(
            "n={} top={}",
            c.n,
            sp.top(5).iter().map(|e| e.word.to_string()).collect::<Vec<_>>().join(" ")
        );
    }
    out.csv("zipf_fits.csv", &["n", "base", "a", "b", "c", "r2", "ranks"], fit_rows).stage("write fits")?;
    out.json("zipf_fits.json", &fits_json).stage("write fits")?;
    input.out.finish(command_line).stage("output")?;
    Ok(())
}

pub(crate) fn write_msd(out: &mut OutDir, name: &str, curve: &MsdCurve) -> Result<Result<fitters::SegmentedFit>> {
    out.csv(
        &format!("{name}.csv"),
        &["t", "msd"],
        curve.lags.iter().zip(&curve.values).map(|(t, v)| vec![t.to_string(), num(*v)]),
    )?;
    let fit = fitters::fit_segmented(curve);
    let pts: Vec<(f64, f64)> = curve.lags.iter().map(|&t| t as f64).zip(curve.values.iter().copied()).collect();
    let json = serde_json::json!({
        "source": curve.source,
        "window_len": curve.window_len,
        "fit": match &fit {
            Ok(f) => serde_json::to_value(f.report(&pts))?,
            Err(e) => serde_json::json!({ "error": e.to_string() }),
        },
    });
    out.json(&format!("{name}_fit.json"), &json)?;
    Ok(fit)
}

fn print_fit(label: &str, fit: &Result<fitters::SegmentedFit>) {
    match fit {
        Ok(f) => println!(
            "{label}: gamma1={} gamma2={} t_c={} crossover={}",
            num(f.gamma1),
            num(f.gamma2),
            f.t_c,
            f.crossover_detected
        ),
        Err(e) => println!("{label}: no fit ({e})"),
    }
}

fn cmd_msd(a: MsdArgs, command_line: Vec<String>) -> CliResult {
    let mut input = open_input(&a.io, "msd")?;
    let lags = a.tmax.lags(input.window.len()).stage("msd")?;
    let signal = walks::signal(&input.window, &a.word).stage("read corpus")?;
    let curve = walks::msd(&signal, &lags).stage("msd")?;
    input.out.param("word", a.word.to_string());
    input.out.param("lags", &lags);
    let fit = write_msd(&mut input.out, &format!("msd_{}", a.word), &curve).stage("write msd")?;
    input.out.finish(command_line).stage("output")?;
    print_fit(&a.word.to_string(), &fit);
    Ok(())
}

fn cmd_xmsd(a: XmsdArgs, command_line: Vec<String>) -> CliResult {
    let mut input = open_input(&a.io, "xmsd")?;
    let WordPair(w1, w2) = a.words;
    let lags = a.tmax.lags(input.window.len()).stage("xmsd")?;
    let text = EncodedText::from_window(&input.window).stage("read corpus")?;
    let s1 = walks::signal_from_text(&text, &w1);
    let s2 = walks::signal_from_text(&text, &w2);
    let curve = walks::cross_msd(&s1, &s2, &lags).stage("xmsd")?;
    input.out.param("words", [w1.to_string(), w2.to_string()]);
    input.out.param("lags", &lags);
    let fit = write_msd(&mut input.out, &format!("xmsd_{w1}_{w2}"), &curve).stage("write xmsd")?;
    input.out.finish(command_line).stage("output")?;
    print_fit(&format!("{w1},{w2}"), &fit);
    Ok(())
}

fn cmd_phrase(a: PhraseArgs) -> CliResult {
    let corpus = Corpus::open(&a.io.input).stage("open corpus")?;
    let window = corpus.window(a.io.start, corpus.max_position()).stage("open corpus")?;
    let hits = lexicon::phrase_count(&window, &a.query.0).stage("phrase")?;
    let json = serde_json::json!({
        "query": a.query.0.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "window": [window.start(), window.end()],
        "count": hits.count,
        "first_position": hits.first_position,
    });
    println!("{json}");
    Ok(())
}

/// Scratch directory: `NATEXT_TMPDIR`, else the system temp dir.
pub fn scratch_dir() -> PathBuf {
    std::env::var_os("NATEXT_TMPDIR")
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir)
}

pub(crate) fn ensure_dir(p: &Path) -> Result<()> {
    std::fs::create_dir_all(p)?;
    Ok(())
}
