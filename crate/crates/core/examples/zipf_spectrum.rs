//! Rank-frequency spectra and the quadratic fit of log f against log r.
//!
//!     cargo run --release --example zipf_spectrum -- 10000000

use natext::corpus::CorpusWindow;
use natext::fitters::{self, LogBase};
use natext::lexicon::{self, EncodedText};

fn main() -> natext::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let text = EncodedText::from_window(&CorpusWindow::generated(1, n)?)?;
    let decades: Vec<u64> = std::iter::successors(Some(10u64), |p| p.checked_mul(10))
        .take_while(|&p| p <= n)
        .collect();
    for c in text.checkpoints(&decades)? {
        let sp = lexicon::rank_spectrum(&c.table);
        let top: Vec<String> = sp
            .top(5)
            .iter()
            .map(|e| format!("{}({:.3})", e.word, e.frequency))
            .collect();
        print!("n = {:>9}: {}", c.n, top.join(" "));
        if let (Ok(a10), Ok(ae)) = (
            fitters::fit_zipf_quadratic(&sp, LogBase::Ten),
            fitters::fit_zipf_quadratic(&sp, LogBase::E),
        ) {
            print!("   a = {:.3} (log10), {:.3} (ln)", a10.a, ae.a);
        }
        println!();
    }
    Ok(())
}
