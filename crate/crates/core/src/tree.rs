//! Planar rooted trees obtained by factoring `n` and recursing on the
//! exponents, and their Dyck-word encodings.
//!
//! The root of `tree_of(n)` has one child per prime factor, in increasing
//! prime order; the child for `p^e` is `tree_of(e)`. A leaf encodes to the
//! empty word and a node encodes to the concatenation of `1 · encode(child) · 0`
//! over its children, which is the clockwise contour walk writing `1` on the
//! way up and `0` on the way down.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::sieve::{self, PrimeFactorization};

/// Maximum number of bits a packed [`DyckWord`] can hold (64 edges).
pub const MAX_WORD_BITS: usize = 128;

/// A balanced word over `{1, 0}` stored bit-packed.
///
/// The first symbol is the most significant of the `len` low bits, so the
/// integer value of `bits` is the word read as a binary numeral. Field order
/// makes the derived `Ord` shortlex: shorter words first, then lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DyckWord {
    len: u8,
    bits: u128,
}

fn malformed(word: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::MalformedWord {
        word: word.into(),
        reason: reason.into(),
    }
}

impl DyckWord {
    pub const EMPTY: DyckWord = DyckWord { len: 0, bits: 0 };

    /// The word `10`, the shape of every prime.
    pub const PRIME: DyckWord = DyckWord { len: 2, bits: 0b10 };

    /// Validates `len` low bits of `bits` as a Dyck word.
    pub fn from_bits(bits: u128, len: usize) -> Result<Self> {
        let render = || render_bits(bits, len.min(MAX_WORD_BITS));
        if len > MAX_WORD_BITS {
            return Err(malformed(render(), format!("longer than {MAX_WORD_BITS} bits")));
        }
        if len < MAX_WORD_BITS && bits >> len != 0 {
            return Err(malformed(render(), "bits set beyond the stated length"));
        }
        let mut height: i32 = 0;
        for i in (0..len).rev() {
            height += if (bits >> i) & 1 == 1 { 1 } else { -1 };
            if height < 0 {
                return Err(malformed(render(), "a prefix has more 0s than 1s"));
            }
        }
        if height != 0 {
            return Err(malformed(render(), "unequal numbers of 1s and 0s"));
        }
        Ok(DyckWord {
            len: len as u8,
            bits,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn edge_count(&self) -> usize {
        self.len as usize / 2
    }

    /// Symbols from first to last, `true` for `1`.
    pub fn symbols(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len as usize)
            .rev()
            .map(move |i| (self.bits >> i) & 1 == 1)
    }

    /// Appends `1 · child · 0`, i.e. attaches `child` as the next subtree of the root.
    pub fn push_subtree(&mut self, child: DyckWord) -> Result<()> {
        if self.len as usize + child.len as usize + 2 > MAX_WORD_BITS {
            return Err(Error::range(format!(
                "word would exceed {MAX_WORD_BITS} bits"
            )));
        }
        self.push_subtree_unchecked(child);
        Ok(())
    }

    #[inline]
    pub(crate) fn push_subtree_unchecked(&mut self, child: DyckWord) {
        let clen = child.len as u32;
        debug_assert!(self.len as u32 + clen + 2 <= MAX_WORD_BITS as u32);
        let block = (1u128 << (clen + 1)) | (child.bits << 1);
        self.bits = if self.len == 0 {
            block
        } else {
            (self.bits << (clen + 2)) | block
        };
        self.len += clen as u8 + 2;
    }

    /// True iff the word is a nonempty run of `10` blocks (a root whose
    /// children are all leaves), the shape of square-free `n > 1`.
    pub fn is_square_free_shape(&self) -> bool {
        if self.len == 0 {
            return false;
        }
        let mask = if self.len as usize == MAX_WORD_BITS {
            u128::MAX
        } else {
            (1u128 << self.len) - 1
        };
        let alternating = 0xAAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAAu128 & mask;
        self.bits == alternating
    }

    /// Packed byte form: `⌈len/8⌉` bytes, first symbol in the MSB of byte 0,
    /// zero padding at the end.
    pub fn to_msb_bytes(&self) -> Vec<u8> {
        let nbytes = (self.len as usize).div_ceil(8);
        let padded = self.bits << (nbytes * 8 - self.len as usize);
        (0..nbytes)
            .rev()
            .map(|i| (padded >> (i * 8)) as u8)
            .collect()
    }

    pub fn from_msb_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if len > MAX_WORD_BITS {
            return Err(malformed(
                format!("<{len} bits>"),
                format!("longer than {MAX_WORD_BITS} bits"),
            ));
        }
        let nbytes = len.div_ceil(8);
        if bytes.len() != nbytes {
            return Err(malformed(
                format!("<{len} bits>"),
                format!("expected {nbytes} bytes, got {}", bytes.len()),
            ));
        }
        let mut acc: u128 = 0;
        for &b in bytes {
            acc = (acc << 8) | b as u128;
        }
        let pad = nbytes * 8 - len;
        if pad > 0 && acc & ((1u128 << pad) - 1) != 0 {
            return Err(malformed(format!("<{len} bits>"), "nonzero padding bits"));
        }
        Self::from_bits(acc >> pad, len)
    }
}

fn render_bits(bits: u128, len: usize) -> String {
    (0..len)
        .rev()
        .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_bits(self.bits, self.len as usize))
    }
}

impl fmt::Debug for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyckWord({:?})", self.to_string())
    }
}

impl FromStr for DyckWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_WORD_BITS {
            return Err(malformed(s, format!("longer than {MAX_WORD_BITS} bits")));
        }
        let mut bits = 0u128;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '1' => 1,
                    '0' => 0,
                    other => return Err(malformed(s, format!("unexpected character {other:?}"))),
                };
        }
        Self::from_bits(bits, s.len()).map_err(|e| match e {
            Error::MalformedWord { reason, .. } => malformed(s, reason),
            other => other,
        })
    }
}

/// An undecorated planar rooted tree; a node with no children is a leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PlanarTree {
    pub children: Vec<PlanarTree>,
}

impl PlanarTree {
    pub fn leaf() -> Self {
        PlanarTree::default()
    }

    pub fn with_children(children: Vec<PlanarTree>) -> Self {
        PlanarTree { children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(PlanarTree::node_count).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.node_count() - 1
    }

    /// Tree of a factorization; each child is the tree of an exponent.
    pub fn from_factorization(f: &PrimeFactorization) -> Self {
        PlanarTree {
            children: f
                .factors()
                .iter()
                .map(|&(_, e)| exponent_tree(e))
                .collect(),
        }
    }

    /// Dyck encoding. Fails only for trees with more than 64 edges.
    pub fn encode(&self) -> Result<DyckWord> {
        let mut word = DyckWord::EMPTY;
        for child in &self.children {
            word.push_subtree(child.encode()?)?;
        }
        Ok(word)
    }

    pub fn decode(word: &DyckWord) -> PlanarTree {
        // Path from the root to the current node.
        let mut stack = vec![PlanarTree::leaf()];
        for up in word.symbols() {
            if up {
                stack.push(PlanarTree::leaf());
            } else {
                let child = stack.pop().expect("validated word");
                stack.last_mut().expect("validated word").children.push(child);
            }
        }
        debug_assert_eq!(stack.len(), 1);
        stack.pop().unwrap()
    }
}

fn exponent_tree(e: u32) -> PlanarTree {
    if e == 1 {
        return PlanarTree::leaf();
    }
    let f = sieve::factorize(e as u64).expect("exponent is positive");
    PlanarTree::from_factorization(&f)
}

/// Tree of every `n ≥ 1`; `tree_of(1)` is a single leaf.
pub fn tree_of(n: u64) -> Result<PlanarTree> {
    Ok(PlanarTree::from_factorization(&sieve::factorize(n)?))
}

/// Exponents of integers below 2⁶⁴ are below 64.
const EXPONENT_CACHE: usize = 64;

fn exponent_words() -> &'static [DyckWord; EXPONENT_CACHE] {
    static CACHE: OnceLock<[DyckWord; EXPONENT_CACHE]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut words = [DyckWord::EMPTY; EXPONENT_CACHE];
        // Every prime factor of e < 64 has exponent < e, so ascending order
        // fills dependencies first.
        for e in 2..EXPONENT_CACHE {
            let f = sieve::factorize(e as u64).expect("positive");
            let mut w = DyckWord::EMPTY;
            for &(_, k) in f.factors() {
                w.push_subtree_unchecked(words[k as usize]);
            }
            words[e] = w;
        }
        words
    })
}

/// Encoding of `tree_of(e)`, memoized for `e < 64`.
#[inline]
pub fn exponent_word(e: u32) -> DyckWord {
    match exponent_words().get(e as usize) {
        Some(w) => *w,
        None => tree_of(e as u64)
            .and_then(|t| t.encode())
            .expect("exponent trees fit in a word"),
    }
}

/// Dyck word of a factorization without materializing the tree.
pub fn word_of_factorization(f: &PrimeFactorization) -> DyckWord {
    let mut w = DyckWord::EMPTY;
    for &(_, e) in f.factors() {
        w.push_subtree_unchecked(exponent_word(e));
    }
    w
}

/// `encode(tree_of(n))`.
pub fn word_of(n: u64) -> Result<DyckWord> {
    Ok(word_of_factorization(&sieve::factorize(n)?))
}
