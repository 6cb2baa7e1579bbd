//! Long-range exponents of the cross MSD for every pair of square-free words.
//!
//!     cargo run --release --example cross_msd -- 10000000

use natext::corpus::CorpusWindow;
use natext::fitters;
use natext::lexicon::EncodedText;
use natext::walks;

fn main() -> natext::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let text = EncodedText::from_window(&CorpusWindow::generated(1, n)?)?;
    let lags = walks::default_lags(n);
    let words = ["10", "1010", "101010", "10101010", "1010101010"];
    let signals: Vec<_> = words
        .iter()
        .map(|w| Ok(walks::signal_from_text(&text, &w.parse()?)))
        .collect::<natext::Result<_>>()?;

    print!("{:>12}", "γ2");
    for w in &words {
        print!("{w:>12}");
    }
    println!();
    for (i, a) in signals.iter().enumerate() {
        print!("{:>12}", words[i]);
        for b in &signals {
            // the diagonal is the word's own MSD
            let curve = if std::ptr::eq(a, b) { walks::msd(a, &lags)? } else { walks::cross_msd(a, b, &lags)? };
            match fitters::fit_segmented(&curve) {
                Ok(f) => print!("{:>12.3}", f.gamma2),
                Err(_) => print!("{:>12}", "-"),
            }
        }
        println!();
    }
    Ok(())
}
