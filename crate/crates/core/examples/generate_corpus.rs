//! Writes the text to a file (lines or packed) and reads a window back through
//! the index.
//!
//!     cargo run --release --example generate_corpus -- 1000000 /tmp/nt.txt packed

use natext::corpus::{self, Corpus, Format, GenerateOptions};

fn main() -> natext::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let path = args.next().unwrap_or_else(|| "natural-text.nt".into());
    let format: Format = args.next().as_deref().unwrap_or("lines").parse()?;

    let opts = GenerateOptions {
        format,
        threads: std::thread::available_parallelism().map_or(1, |p| p.get()),
        checkpoints: vec![10, 100, 1_000, 10_000, 100_000, 1_000_000],
        ..GenerateOptions::default()
    };
    let report = corpus::generate_file(n, path.as_ref(), &opts)?;
    println!("{} words, {} bytes -> {path}", report.words_written, report.bytes_written);
    for (at, d) in &report.distinct_at {
        println!("  distinct words by {at}: {d}");
    }

    let c = Corpus::open(&path)?;
    let l = n.saturating_sub(4).max(1);
    for (pos, w) in (l..).zip(c.window(l, n)?.words()?) {
        println!("  {pos}: {}", w?);
    }
    Ok(())
}
