//! Occurrences of short phrases, e.g. the single "1100 1100" at positions 8-9.
//!
//!     cargo run --release --example phrases -- 10000000 "111000 10"

use natext::corpus::CorpusWindow;
use natext::lexicon::{self, EncodedText};
use natext::tree::DyckWord;

fn main() -> natext::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let mut queries: Vec<String> = args.collect();
    if queries.is_empty() {
        queries = ["1100 1100", "10 10", "10 111000", "111000 10"].map(String::from).to_vec();
    }
    let text = EncodedText::from_window(&CorpusWindow::generated(1, n)?)?;
    for q in &queries {
        let phrase = q.split_whitespace().map(str::parse).collect::<natext::Result<Vec<DyckWord>>>()?;
        let hits = lexicon::phrase_count_encoded(&text, &phrase)?;
        match hits.first_position {
            Some(p) => println!("{q:>16}: {} occurrence(s), first at {p}", hits.count),
            None => println!("{q:>16}: none up to {n}"),
        }
    }
    Ok(())
}
