//! Dyadic fixed-point intervals with outward rounding.
//!
//! A `DyadicInterval` stores two scaled integer endpoints `lo` and `hi` at a
//! shared precision `prec` and represents every real value in
//! `[lo / 2^prec, hi / 2^prec]`. All arithmetic rounds outward, so an interval
//! computation that starts from enclosures of exact rationals always encloses
//! the exact result. This is what makes interval certification sound: any
//! strict inequality checked against the unfavorable endpoint also holds for
//! the enclosed exact value.
//!
//! Rounding discipline per operation:
//!
//! * construction from a rational takes `floor`/`ceil` of the scaled value,
//!   so the enclosure is at most one ulp wide;
//! * addition and subtraction are exact once both operands sit at the common
//!   (maximum) precision, and raising precision is itself exact;
//! * multiplication forms the four endpoint products at doubled precision and
//!   renormalizes outward, growing the width by at most 2 ulp beyond the
//!   exact product range;
//! * reciprocals require a strictly positive interval and round outward.

use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};

use crate::rat::Rat;

/// Closed interval `[lo / 2^prec, hi / 2^prec]` with big-integer mantissas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl DyadicInterval {
    /// Builds an interval from raw mantissas. Panics if `lo > hi`.
    pub fn new(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi, prec }
    }

    /// The exact (zero-width) interval holding an integer.
    pub fn exact_int(v: i64, prec: u32) -> Self {
        let m = BigInt::from(v) << prec;
        Self {
            lo: m.clone(),
            hi: m,
            prec,
        }
    }

    /// Tightest enclosure of `base^-s` at the given precision: at most one
    /// ulp wide, and exact whenever `base^s` divides `2^prec`.
    pub fn recip_pow(base: u64, s: u32, prec: u32) -> Self {
        assert!(base >= 1, "recip_pow needs a positive base");
        let pow = Pow::pow(&BigInt::from(base), s);
        let scaled = BigInt::one() << prec;
        Self {
            lo: scaled.div_floor(&pow),
            hi: scaled.div_ceil(&pow),
            prec,
        }
    }

    /// Tightest enclosure of an exact rational at the given precision.
    pub fn enclosing_rat(q: &Rat, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        Self {
            lo: scaled.div_floor(q.denom()),
            hi: scaled.div_ceil(q.denom()),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Lower endpoint as an exact rational.
    pub fn lo_rat(&self) -> Rat {
        Rat::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    /// Upper endpoint as an exact rational.
    pub fn hi_rat(&self) -> Rat {
        Rat::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    /// Exact width `hi - lo` scaled back to a rational.
    pub fn width_rat(&self) -> Rat {
        Rat::new(&self.hi - &self.lo, BigInt::one() << self.prec)
    }

    /// Whether the enclosed range contains the exact rational `q`.
    pub fn contains(&self, q: &Rat) -> bool {
        // lo/2^p <= num/den <= hi/2^p, cleared against the positive den.
        let scaled = q.numer() << self.prec;
        &self.lo * q.denom() <= scaled && scaled <= &self.hi * q.denom()
    }

    /// True when every enclosed value is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Larger of the two mantissa bit lengths; a cost proxy for reporting.
    pub fn mantissa_bits(&self) -> u64 {
        self.lo.bits().max(self.hi.bits())
    }

    /// Renormalizes to a new precision. Raising precision is exact; lowering
    /// rounds outward, so the result always contains `self`.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let up = prec - self.prec;
                Self {
                    lo: &self.lo << up,
                    hi: &self.hi << up,
                    prec,
                }
            }
            Ordering::Less => {
                let down = self.prec - prec;
                Self {
                    // Arithmetic shift right floors; ceil via double negation.
                    lo: &self.lo >> down,
                    hi: -((-&self.hi) >> down),
                    prec,
                }
            }
        }
    }

    /// Outward enclosure of `1/self`. Panics unless `self` is strictly
    /// positive, which is the only case the evaluators need.
    pub fn recip(&self) -> Self {
        assert!(
            self.is_strictly_positive(),
            "reciprocal of an interval touching zero"
        );
        let scaled = BigInt::one() << (2 * self.prec as u64);
        Self {
            lo: scaled.div_floor(&self.hi),
            hi: scaled.div_ceil(&self.lo),
            prec: self.prec,
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self, u32) {
        let prec = self.prec.max(other.prec);
        (self.with_prec(prec), other.with_prec(prec), prec)
    }
}

impl Add for &DyadicInterval {
    type Output = DyadicInterval;

    fn add(self, rhs: Self) -> DyadicInterval {
        let (a, b, prec) = self.aligned(rhs);
        DyadicInterval {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            prec,
        }
    }
}

impl Sub for &DyadicInterval {
    type Output = DyadicInterval;

    fn sub(self, rhs: Self) -> DyadicInterval {
        let (a, b, prec) = self.aligned(rhs);
        DyadicInterval {
            lo: a.lo - b.hi,
            hi: a.hi - b.lo,
            prec,
        }
    }
}

impl Mul for &DyadicInterval {
    type Output = DyadicInterval;

    fn mul(self, rhs: Self) -> DyadicInterval {
        let (a, b, prec) = self.aligned(rhs);
        // Endpoint products live at 2*prec; take the extremes and renormalize
        // outward. Signs are unrestricted, hence all four products.
        let ll = &a.lo * &b.lo;
        let lh = &a.lo * &b.hi;
        let hl = &a.hi * &b.lo;
        let hh = &a.hi * &b.hi;
        let lo2 = ll.clone().min(lh.clone()).min(hl.clone()).min(hh.clone());
        let hi2 = ll.max(lh).max(hl).max(hh);
        DyadicInterval {
            lo: lo2 >> prec,
            hi: -((-hi2) >> prec),
            prec,
        }
    }
}
