//! Orderings of subsets of `Z_n` whose partial sums are distinct.
//!
//! - [`group`]: cyclic-group arithmetic, sequences and the ordering checks.
//! - [`poly`]: linear-form products and exact coefficient extraction.
//! - [`certify`]: coefficient certificates over primes and general moduli.
//! - [`oracle`]: exhaustive search and verification for small `n`.
//! - [`construct`]: graceful permutations, terraces and explicit orderings.
//! - [`cli`]: the `distinct-sums` command line.

pub mod cache;
pub mod certify;
pub mod cli;
pub mod construct;
pub mod group;
pub mod oracle;
pub mod poly;
