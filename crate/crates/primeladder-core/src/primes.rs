//! Ground-truth prime sequences.
//!
//! Everything downstream assumes its prime input is *exactly* the first `n`
//! primes — a gap or a composite would silently change what the bracket
//! measures. `PrimeSeq` therefore refuses to exist unless that holds, and the
//! oracles here (trial division, sieve) are deliberately independent of the
//! bracket machinery so they can cross-check it.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::error::{Error, SeqDefect};

/// The first `n` primes, in order, starting at 2. The constructor validates;
/// once built, the invariant cannot be broken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSeq {
    values: Vec<u64>,
}

impl PrimeSeq {
    /// Validates that `values` is `[2, 3, 5, ...]` with no gaps.
    pub fn new(values: Vec<u64>) -> Result<Self, Error> {
        let Some(&first) = values.first() else {
            return Err(Error::InvalidPrimeSeq(SeqDefect::Empty));
        };
        if first != 2 {
            return Err(Error::InvalidPrimeSeq(SeqDefect::WrongStart { got: first }));
        }
        for pair in values.windows(2) {
            check_continuation(pair[0], pair[1])?;
        }
        Ok(Self { values })
    }

    /// The shortest admissible sequence, `[2]`.
    pub fn seed() -> Self {
        Self { values: vec![2] }
    }

    /// The first `n` primes by incremental trial division. `n = 0` is an
    /// error: an empty sequence has no last element to anchor the window.
    pub fn first_n(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidPrimeSeq(SeqDefect::Empty));
        }
        let mut values = Vec::with_capacity(n);
        values.push(2u64);
        while values.len() < n {
            values.push(next_prime_after(*values.last().expect("nonempty")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: validation rejects empty sequences.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The largest prime in the sequence. Total: the sequence is never empty.
    pub fn last(&self) -> u64 {
        *self.values.last().expect("PrimeSeq is never empty")
    }

    /// A new sequence extended by `p`, which must be the next prime.
    pub fn appended(&self, p: u64) -> Result<Self, Error> {
        check_continuation(self.last(), p)?;
        let mut values = self.values.clone();
        values.push(p);
        Ok(Self { values })
    }

    /// The next prime after `last()`, found by trial division alone. This is
    /// the reference answer the recursion is checked against.
    pub fn oracle_next_prime(&self) -> u64 {
        next_prime_after(self.last())
    }

    /// Whether every prime factor of `j` belongs to the sequence. `1` is
    /// vacuously smooth.
    pub fn is_smooth(&self, j: u64) -> bool {
        assert!(j >= 1, "smoothness is defined for positive integers");
        let mut rest = j;
        for &p in &self.values {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        rest == 1
    }

    /// Where the next prime must live: `[last + 1, 2*last - 1]`. The upper end
    /// is one below twice the last prime, matching the bracket's sum cutoff.
    pub fn candidate_window(&self) -> RangeInclusive<u64> {
        let p = self.last();
        (p + 1)..=(2 * p - 1)
    }
}

fn check_continuation(after: u64, got: u64) -> Result<(), Error> {
    if !is_prime(got) {
        return Err(Error::InvalidPrimeSeq(SeqDefect::Composite { value: got }));
    }
    if got != next_prime_after(after) {
        return Err(Error::InvalidPrimeSeq(SeqDefect::NotConsecutive {
            after,
            got,
        }));
    }
    Ok(())
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x.is_multiple_of(2) {
        return x == 2;
    }
    let mut d = 3u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn next_prime_after(x: u64) -> u64 {
    let mut candidate = x + 1;
    loop {
        if is_prime(candidate) {
            return candidate;
        }
        candidate += 1;
    }
}

/// All primes `<= limit` via a plain sieve of Eratosthenes; empty for
/// `limit < 2`. Independent of the trial-division path above on purpose.
pub fn sieve_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        if !composite[p] {
            let mut multiple = p * p;
            while multiple <= n {
                composite[multiple] = true;
                multiple += p;
            }
        }
        p += 1;
    }
    (2..=n)
        .filter(|&i| !composite[i])
        .map(|i| i as u64)
        .collect()
}
