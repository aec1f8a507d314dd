//! Exact rational arithmetic primitives.
//!
//! `Rat` carries every exactly-evaluated quantity in this crate: the power
//! terms `j^-s`, the factor products, and the bracket values themselves. It is
//! always stored in lowest terms with a positive denominator, so equality is
//! structural and bit sizes stay minimal.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, reduced to lowest terms with a positive
/// denominator after every operation.
pub type Rat = num_rational::BigRational;

/// Exact `q^e`. Negative exponents invert, so they require `q != 0`.
pub fn rat_pow(q: &Rat, e: i32) -> Result<Rat, Error> {
    if q.is_zero() && e <= 0 {
        return Err(Error::ZeroToNonpositivePower);
    }
    Ok(Pow::pow(q.clone(), e))
}

/// Exact `base^-s` for a positive integer base.
pub fn recip_power(base: u64, s: u32) -> Rat {
    assert!(base >= 1, "recip_power needs a positive base");
    Rat::new(BigInt::from(1), Pow::pow(&BigInt::from(base), s))
}

/// Orders a positive rational `b` against `m^-s` without extracting any root:
/// `b <=> m^-s` is the same ordering as `b.numer * m^s <=> b.denom` in exact
/// integer arithmetic.
pub fn compare_to_recip_power(b: &Rat, m: u64, s: u32) -> Result<Ordering, Error> {
    assert!(m >= 1, "comparison base must be positive");
    if !b.is_positive() {
        return Err(Error::NonpositiveOperand);
    }
    let m_pow = Pow::pow(&BigInt::from(m), s);
    Ok((b.numer() * m_pow).cmp(b.denom()))
}

/// `log2(q)` to within `1e-9` absolute error, for reporting only.
///
/// Works from bit lengths and the leading 53 mantissa bits of numerator and
/// denominator, so operands far outside machine-float range are fine. The
/// stated error bound holds for operands up to roughly a million bits.
pub fn approx_log2(q: &Rat) -> Result<f64, Error> {
    if !q.is_positive() {
        return Err(Error::NonpositiveOperand);
    }
    Ok(log2_bigint(q.numer()) - log2_bigint(q.denom()))
}

fn log2_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        // Fits the f64 mantissa, conversion is exact.
        libm::log2(x.to_f64().expect("<= 53 bits converts exactly"))
    } else {
        let shift = bits - 53;
        let lead: BigInt = x >> shift;
        libm::log2(lead.to_f64().expect("53 bits convert exactly")) + shift as f64
    }
}
