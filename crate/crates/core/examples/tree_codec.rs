//! Planar rooted tree and Dyck word of an integer, and the round trip back.
//!
//!     cargo run --example tree_codec -- 3099363912 320 18

use natext::sieve;
use natext::tree::{self, PlanarTree};

fn main() -> natext::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let numbers = if args.is_empty() { vec![1, 2, 6, 18, 320, 3_099_363_912] } else { args };
    for n in numbers {
        let f = sieve::factorize(n)?;
        let t = tree::tree_of(n)?;
        let w = t.encode()?;
        assert_eq!(PlanarTree::decode(&w), t);
        println!(
            "{n:>12}  factors {:?}  edges {:>2}  word {}{}",
            f.factors(),
            t.edge_count(),
            if w.is_empty() { "(empty)".to_string() } else { w.to_string() },
            if w.is_square_free_shape() { "  [bush]" } else { "" }
        );
    }
    Ok(())
}
