//! MSD of indicator walks and two-segment fits for the square-free and
//! non-square-free word families.
//!
//!     cargo run --release --example msd_walks -- 10000000

use natext::corpus::CorpusWindow;
use natext::fitters;
use natext::lexicon::EncodedText;
use natext::walks;

fn main() -> natext::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let text = EncodedText::from_window(&CorpusWindow::generated(1, n)?)?;
    let lags = walks::default_lags(n);
    let families = [
        ("square-free", ["10", "1010", "101010", "10101010", "1010101010"]),
        ("non-square-free", ["1100", "110010", "11001010", "1100101010", "110010101010"]),
    ];
    for (name, words) in families {
        println!("{name}");
        for w in words {
            let s = walks::signal_from_text(&text, &w.parse()?);
            let curve = walks::msd(&s, &lags)?;
            match fitters::fit_segmented(&curve) {
                Ok(f) => println!(
                    "  {w:>14}  count {:>8}  γ1 {:.3} ± {:.3}  γ2 {:.3} ± {:.3}  t_c {:>7}{}",
                    s.count(),
                    f.gamma1,
                    f.half_width1,
                    f.gamma2,
                    f.half_width2,
                    f.t_c,
                    if f.crossover_detected { "" } else { "  (no crossover)" }
                ),
                Err(e) => println!("  {w:>14}  count {:>8}  {e}", s.count()),
            }
        }
    }
    Ok(())
}
