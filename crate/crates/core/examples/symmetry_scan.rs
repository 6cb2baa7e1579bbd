//! Fraction of k-tuples whose reversal also occurs, for growing windows.
//!
//!     cargo run --release --example symmetry_scan -- 1000000

use natext::corpus::CorpusWindow;
use natext::lexicon::EncodedText;
use natext::symmetry;

fn main() -> natext::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);

    let tiny = EncodedText::from_window(&CorpusWindow::generated(2, 10)?)?;
    let r = symmetry::symmetry_of_text(&tiny, 4)?;
    println!("positions 2..10, k = 4: {}/{}", r.reversible, r.distinct);

    let text = EncodedText::from_window(&CorpusWindow::generated(1, n)?)?;
    let mut end = 1000;
    while end <= n {
        let prefix = text.prefix(end)?;
        let row: Vec<String> = (2..=8)
            .map(|k| format!("{:.4}", symmetry::symmetry_of_text(&prefix, k).unwrap().ss))
            .collect();
        println!("n = {end:>9}: SS(2..8) = {}", row.join(" "));
        end *= 10;
    }
    Ok(())
}
