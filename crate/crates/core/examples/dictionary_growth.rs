//! Dictionary size d_n, density and the Heaps fit over decades.
//!
//!     cargo run --release --example dictionary_growth -- 10000000

use natext::corpus::CorpusWindow;
use natext::fitters::{fit_power_law, Weighting};
use natext::lexicon;

fn main() -> natext::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let cps: Vec<u64> = std::iter::successors(Some(10u64), |p| p.checked_mul(10))
        .take_while(|&p| p <= n)
        .collect();
    let result = lexicon::scan(&CorpusWindow::generated(1, n)?, &cps)?;

    println!("{:>10} {:>6} {:>12}", "n", "d_n", "density");
    for c in &result.checkpoints {
        println!("{:>10} {:>6} {:>12.3e}", c.n, c.dictionary_size, c.density());
    }
    let pts: Vec<(f64, f64)> = result
        .checkpoints
        .iter()
        .map(|c| (c.n as f64, c.dictionary_size as f64))
        .collect();
    for w in [Weighting::Linear, Weighting::LogLog] {
        let f = fit_power_law(&pts, w)?;
        println!("{w:?}: d_n ≈ {:.3}·n^{:.4} (R² {:.5})", f.k, f.beta, f.r2);
    }
    Ok(())
}
