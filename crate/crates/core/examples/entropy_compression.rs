//! Plug-in entropy against its bounds, and the gzip compression ratio of
//! prefixes with both controls and the parametric fits.
//!
//!     cargo run --release --example entropy_compression -- 1000000

use natext::complexity::{self, DEFAULT_LEVEL};
use natext::corpus::CorpusWindow;
use natext::fitters;
use natext::lexicon::{self, EncodedText};

fn main() -> natext::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let window = CorpusWindow::generated(1, n)?;
    let text = EncodedText::from_window(&window)?;
    let grid: Vec<u64> = (1..=9)
        .flat_map(|e| [1u64, 2, 5].map(|m| m * 10u64.pow(e)))
        .filter(|&c| c <= n)
        .collect();

    let mut h_points = Vec::new();
    println!("{:>10} {:>8} {:>8} {:>8}", "n", "h", "log2 d", "fitted");
    for c in text.checkpoints(&grid)? {
        let h = lexicon::entropy(&c.table)?;
        h_points.push((c.n as f64, h));
        println!(
            "{:>10} {h:>8.4} {:>8.4} {:>8.4}",
            c.n,
            lexicon::entropy_bound(c.dictionary_size)?,
            lexicon::fitted_bound(c.n as f64)
        );
    }
    let hf = fitters::fit_entropy_growth(&h_points)?;
    println!("h ≈ {:.4} + {:.4}·log2(log2 n)\n", hf.a, hf.b);

    let cr_grid: Vec<u64> = grid.iter().copied().filter(|&c| c >= 1000).collect();
    let curve = complexity::compression_curve(&window, &cr_grid, DEFAULT_LEVEL)?;
    for r in &curve {
        let random = complexity::random_control(r.raw_bytes as usize, 1, DEFAULT_LEVEL)?;
        println!("CR({:>9}) = {:.5}   random bytes {:.5}", r.n, r.ratio, random.ratio);
    }
    let constant = complexity::constant_control(1_000_000, "1010", DEFAULT_LEVEL)?;
    println!("constant lines: {:.5}", constant.ratio);
    let pts: Vec<(f64, f64)> = curve.iter().map(|r| (r.n as f64, r.ratio)).collect();
    if let Ok(f) = fitters::fit_cr_curve(&pts) {
        println!(
            "CR ≈ {:.4} + {:.4}/n^{:.4} + {:.4}/ln n  (converged {}, degenerate {})",
            f.a, f.b, f.c, f.d, f.converged, f.degenerate
        );
    }
    Ok(())
}
