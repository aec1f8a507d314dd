//! Raw root extraction.
//!
//! For a positive bracket value `b` the quantity of interest is `b^(-1/s)`
//! rounded down, i.e. the largest integer `m` with `b <= m^-s`. No root is
//! ever taken: the predicate `b <= m^-s` is decided exactly by integer
//! comparison and is monotone in `m`, so galloping plus binary search finds
//! the edge. The raw estimate is a diagnostic — it shows how the root drifts
//! toward the next prime as `s` grows — and is *not* what certification
//! trusts, so a value outside the candidate window is reported rather than
//! rejected.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive};

use crate::bracket::{eval_bracket_exact, BracketForm};
use crate::error::Error;
use crate::primes::PrimeSeq;
use crate::rat::Rat;

/// Root position of a positive bracket value, plus whether it already landed
/// inside the candidate window `[p_n + 1, 2 p_n - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawEstimate {
    pub m_raw: u64,
    pub in_window: bool,
}

/// Largest `m >= 1` with `b <= m^-s`, i.e. `floor(b^(-1/s))` with ties going
/// to the exact power. Requires `0 < b <= 1`.
pub fn bracket_root(b: &Rat, s: u32) -> Result<u64, Error> {
    assert!(s >= 1, "exponent must be a positive integer");
    if !b.is_positive() {
        return Err(Error::NonpositiveBracket);
    }
    if b > &Rat::one() {
        return Err(Error::BracketAboveOne);
    }
    // `b <= 1 = 1^-s` holds, so gallop for the first power of two where the
    // predicate fails. Intermediate candidates are BigInt: the edge can sit
    // near b.denom() when s = 1, well past u64 for adversarial inputs.
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while holds(b, &hi, s) {
        lo = hi.clone();
        hi <<= 1;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) >> 1;
        if holds(b, &mid, s) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo
        .to_u64()
        .expect("root exceeds u64; operands beyond the supported scale"))
}

/// `b <= m^-s`, decided as `b.numer * m^s <= b.denom`.
fn holds(b: &Rat, m: &BigInt, s: u32) -> bool {
    b.numer() * Pow::pow(m, s) <= *b.denom()
}

/// Raw estimate from an already-evaluated bracket value. `None` when the
/// bracket is not yet positive at this `s` (no estimate exists there).
pub fn estimate_from_value(ps: &PrimeSeq, b: &Rat, s: u32) -> Option<RawEstimate> {
    if !b.is_positive() {
        return None;
    }
    // A positive bracket is at most sum_{j >= 2} j^-2 < 1 in either form, so
    // the root guards cannot fire here.
    let m_raw = bracket_root(b, s).expect("positive bracket values lie in (0, 1]");
    Some(RawEstimate {
        m_raw,
        in_window: ps.candidate_window().contains(&m_raw),
    })
}

/// Evaluates the bracket exactly and locates its root.
pub fn raw_estimate(ps: &PrimeSeq, s: u32, form: BracketForm) -> Option<RawEstimate> {
    let b = eval_bracket_exact(ps, s, form);
    estimate_from_value(ps, &b, s)
}
