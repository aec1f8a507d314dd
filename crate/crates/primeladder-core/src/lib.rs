//! Certified next-prime recursion over truncated zeta partial sums.
//!
//! Given the consecutive primes `p_1, ..., p_n`, the bracketed quantity
//!
//! ```text
//! B(s) = sum_{j=1}^{2*p_n - 1} j^-s  -  prod_{k=1}^{n} (1 - p_k^-s)^-1
//! ```
//!
//! approaches `p_{n+1}^-s` as the integer exponent `s` grows, so the integer
//! part of `B(s)^(-1/s)` eventually reads off the next prime. This crate
//! evaluates the bracket exactly (arbitrary-precision rationals) or as an
//! outward-rounded dyadic interval, resolves the `-1/s` power by exact power
//! comparison, and replaces the limit with a finite-`s` certificate: a pair of
//! rational envelope inequalities whose joint truth proves a candidate equals
//! `p_{n+1}`.
//!
//! Everything here is pure, deterministic, and `no_std`-compatible (with
//! `alloc`); IO, scheduling, and reporting live in the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bracket;
pub mod certify;
pub mod dyadic;
pub mod error;
pub mod locator;
pub mod primes;
pub mod rat;

pub use bracket::BracketForm;
pub use certify::{BracketValue, Certificate, Log2Field, ScanVerdict};
pub use dyadic::DyadicInterval;
pub use error::Error;
pub use locator::RawEstimate;
pub use primes::PrimeSeq;
pub use rat::Rat;
