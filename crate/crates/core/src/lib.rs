//! Number-theoretic toolkit around sums of the form p + a^{R(j)} with p prime
//! and R an integer polynomial.
//!
//! The crate provides the building blocks needed to study such sums at desk
//! scale: exact integer polynomials with constructive growth constants,
//! primality and budgeted factorization, multiplicative orders in bulk,
//! certified totient-ratio enclosures for a^k - 1, root counting of polynomial
//! congruences through gcd reduction, order-weighted prime series with an
//! Abel-summation cross-check, and a segmented representation sieve.
//!
//! Everything is deterministic: factorization retries follow a fixed seed
//! schedule, parallel reductions have a fixed merge order, and float output is
//! reproducible across thread counts.

pub mod congruence;
mod error;
pub mod ntheory;
pub mod numeric;
pub mod poly;
pub mod represent;
pub mod sums;
pub mod verify;

pub use error::{Error, Result};
