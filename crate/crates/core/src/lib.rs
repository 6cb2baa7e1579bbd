//! Natural Text: the sequence of Dyck words obtained by encoding the recursive
//! prime factorization of every positive integer as a planar rooted tree.
//!
//! The crate covers generation of the text, its storage formats, and the
//! lexical, symmetry, complexity and random-walk statistics computed over it.

pub mod cli;
pub mod complexity;
pub mod corpus;
pub mod error;
pub mod fitters;
pub mod lexicon;
pub mod sieve;
pub mod symmetry;
pub mod tree;
pub mod walks;

pub use error::{Error, Result};
