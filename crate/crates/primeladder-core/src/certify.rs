//! Sound certification of a next-prime candidate.
//!
//! A raw root estimate only suggests where the next prime sits. What makes
//! the recursion trustworthy at *finite* exponents are two exact envelope
//! inequalities for the bracket value `b`:
//!
//! * upper: `b > ub_sum(m + 1)`, the window sum past `m`, proves the next
//!   prime is at most `m` (otherwise every window term at `m` and below would
//!   be absent from `b` and the remaining terms cannot reach that sum);
//! * lower: `b < lb_val(m - 1) = (m-1)^-s - tail_bound(2 p_n)`, proves the
//!   next prime is at least `m` (were it `m - 1` or less, its own term minus
//!   the smooth tail would already exceed `b`).
//!
//! A candidate passing both checks is *the* next prime — no asymptotics
//! involved, the conclusion is exact at whatever `s` the checks passed. At
//! too-small `s` the checks simply fail and the caller retries higher; a
//! failed certificate never lies.
//!
//! Checks accept either an exact bracket value or a dyadic enclosure. With an
//! enclosure, each strict inequality is decided against the endpoint that
//! could falsify it, so a pass is sound regardless of the interval's width.
//! The scan additionally reports when a wider-than-useful enclosure was the
//! only obstacle, which is the caller's cue to raise precision rather than
//! raise `s`.

use alloc::vec;

use num_traits::{Signed, Zero};

use crate::dyadic::DyadicInterval;
use crate::error::Error;
use crate::primes::PrimeSeq;
use crate::rat::{approx_log2, recip_power, Rat};

/// Bracket input to certification: exact, or an enclosure that is known to
/// contain the exact value.
#[derive(Debug, Clone)]
pub enum BracketValue {
    Exact(Rat),
    Enclosure(DyadicInterval),
}

impl BracketValue {
    /// `b > bound`, decided so a `true` holds for the exact value.
    fn safe_gt(&self, bound: &Rat) -> bool {
        match self {
            Self::Exact(b) => b > bound,
            Self::Enclosure(iv) => iv.lo_rat() > *bound,
        }
    }

    /// `b < bound`, decided so a `true` holds for the exact value.
    fn safe_lt(&self, bound: &Rat) -> bool {
        match self {
            Self::Exact(b) => b < bound,
            Self::Enclosure(iv) => iv.hi_rat() < *bound,
        }
    }

    /// `b > bound` with the benefit of the doubt: true when any value in the
    /// enclosure satisfies it. Used only to distinguish "certainly fails"
    /// from "the enclosure is too wide to tell".
    fn favorable_gt(&self, bound: &Rat) -> bool {
        match self {
            Self::Exact(b) => b > bound,
            Self::Enclosure(iv) => iv.hi_rat() > *bound,
        }
    }

    fn favorable_lt(&self, bound: &Rat) -> bool {
        match self {
            Self::Exact(b) => b < bound,
            Self::Enclosure(iv) => iv.lo_rat() < *bound,
        }
    }

    /// Reporting-only log2 of the bracket value (lower endpoint for an
    /// enclosure), or the marker for a nonpositive value.
    pub fn log2_report(&self) -> Log2Field {
        let anchor = match self {
            Self::Exact(b) => b.clone(),
            Self::Enclosure(iv) => iv.lo_rat(),
        };
        if anchor.is_positive() {
            Log2Field::Value(approx_log2(&anchor).expect("positive by branch"))
        } else {
            Log2Field::Nonpositive
        }
    }
}

/// A log2 magnitude in a report, or the reason there is none: the quantity
/// was nonpositive, the bound was an empty sum, or the check was skipped
/// because the candidate sits at the window's lower edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Log2Field {
    Value(f64),
    Nonpositive,
    EmptySum,
    Skipped,
}

impl Log2Field {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Value(v) => Some(*v),
            _ => None,
        }
    }
}

/// Outcome of checking one candidate `m` against the envelopes at one `s`.
/// `passed` means both inequalities held on safe endpoints; the log fields
/// record the magnitudes involved, for diagnostics only.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub n: usize,
    pub s: u32,
    pub m: u64,
    pub b_log2: Log2Field,
    pub ub_next_log2: Log2Field,
    pub lb_prev_log2: Log2Field,
    pub passed_upper: bool,
    pub passed_lower: bool,
    pub passed: bool,
}

/// Scan outcome distinguishing a definite miss from an enclosure that was
/// too wide to decide. `Indecisive` never occurs with an exact bracket.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanVerdict {
    Certified(Certificate),
    NoCandidate,
    Indecisive,
}

/// Upper bound on the infinite tail `sum_{j >= m_from} j^-s`, by one explicit
/// term plus the integral comparison:
/// `tail_bound = m_from^-s + m_from^(1-s) / (s - 1)`. Needs `s >= 2`.
pub fn tail_bound(s: u32, m_from: u64) -> Result<Rat, Error> {
    assert!(m_from >= 2, "tail must start past 1");
    if s < 2 {
        return Err(Error::TailExponentTooSmall { s });
    }
    let integral = recip_power(m_from, s - 1) / Rat::from_integer((s - 1).into());
    Ok(recip_power(m_from, s) + integral)
}

/// Exact window sum `sum_{j = m}^{2 p_n - 1} j^-s`; zero when the range is
/// empty. This is what any candidate at or past `m` could contribute.
pub fn ub_sum(m: u64, s: u32, ps: &PrimeSeq) -> Rat {
    assert!(m >= 2, "window sums start past 1");
    let m_top = 2 * ps.last() - 1;
    let mut acc = Rat::zero();
    for j in m..=m_top {
        acc += recip_power(j, s);
    }
    acc
}

/// Exact lower envelope `m^-s - tail_bound(s, 2 p_n)`: the least the bracket
/// could be if `m` were the smallest non-smooth integer. Needs `s >= 2`,
/// `m >= 2`.
pub fn lb_val(m: u64, s: u32, ps: &PrimeSeq) -> Rat {
    assert!(m >= 2, "lower envelope needs m >= 2");
    let tail = tail_bound(s, 2 * ps.last()).expect("s >= 2 asserted by callers");
    recip_power(m, s) - tail
}

fn build_certificate(
    ps: &PrimeSeq,
    s: u32,
    m: u64,
    b: &BracketValue,
    ub_next: &Rat,
    tail: &Rat,
) -> (Certificate, bool) {
    let passed_upper = b.safe_gt(ub_next);
    let favorable_upper = b.favorable_gt(ub_next);

    let window_lo = ps.last() + 1;
    let (passed_lower, favorable_lower, lb_prev_log2) = if m == window_lo {
        // Nothing below the window edge to rule out; recorded as skipped.
        (true, true, Log2Field::Skipped)
    } else {
        let lb = recip_power(m - 1, s) - tail.clone();
        let field = if lb.is_positive() {
            Log2Field::Value(approx_log2(&lb).expect("positive by branch"))
        } else {
            Log2Field::Nonpositive
        };
        (b.safe_lt(&lb), b.favorable_lt(&lb), field)
    };

    let ub_next_log2 = if ub_next.is_zero() {
        Log2Field::EmptySum
    } else {
        Log2Field::Value(approx_log2(ub_next).expect("nonempty window sums are positive"))
    };

    let cert = Certificate {
        n: ps.len(),
        s,
        m,
        b_log2: b.log2_report(),
        ub_next_log2,
        lb_prev_log2,
        passed_upper,
        passed_lower,
        passed: passed_upper && passed_lower,
    };
    (cert, favorable_upper && favorable_lower)
}

/// Certifies one candidate. `m` must lie in the candidate window; `s < 2` is
/// a domain error (the tail bound would diverge).
pub fn certify_candidate(
    ps: &PrimeSeq,
    s: u32,
    m: u64,
    b: &BracketValue,
) -> Result<Certificate, Error> {
    let window = ps.candidate_window();
    if !window.contains(&m) {
        return Err(Error::CandidateOutsideWindow {
            m,
            lo: *window.start(),
            hi: *window.end(),
        });
    }
    let tail = tail_bound(s, 2 * ps.last())?;
    let ub_next = ub_sum(m + 1, s, ps);
    Ok(build_certificate(ps, s, m, b, &ub_next, &tail).0)
}

fn scan_impl(
    ps: &PrimeSeq,
    s: u32,
    b: &BracketValue,
) -> Result<(Option<Certificate>, bool), Error> {
    let tail = tail_bound(s, 2 * ps.last())?;
    let p = ps.last();
    let m_top = 2 * p - 1;

    // Suffix sums over the window: suffix[k] = sum_{j = p+1+k}^{m_top} j^-s,
    // with one extra zero slot so every candidate's ub_sum(m + 1) is a
    // lookup instead of a fresh O(window) sum.
    let window_len = (m_top - p) as usize;
    let mut suffix = vec![Rat::zero(); window_len + 1];
    for k in (0..window_len).rev() {
        suffix[k] = suffix[k + 1].clone() + recip_power(p + 1 + k as u64, s);
    }

    let mut passing: Option<Certificate> = None;
    let mut favorable_any = false;
    for (idx, m) in ((p + 1)..=m_top).enumerate() {
        let (cert, favorable) = build_certificate(ps, s, m, b, &suffix[idx + 1], &tail);
        if favorable {
            favorable_any = true;
        }
        if cert.passed {
            if let Some(first) = &passing {
                // The envelopes provably admit at most one passing candidate
                // for any bracket that actually arose from this sequence, so
                // two passes mean the input was not such a bracket.
                return Err(Error::AmbiguousCertificate {
                    first: first.m,
                    second: m,
                });
            }
            passing = Some(cert);
        }
    }
    Ok((passing, favorable_any))
}

/// Checks every window candidate and returns the unique passing certificate,
/// `None` when nothing passes at this `s`, or the ambiguity error.
pub fn certify_scan(ps: &PrimeSeq, s: u32, b: &BracketValue) -> Result<Option<Certificate>, Error> {
    scan_impl(ps, s, b).map(|(cert, _)| cert)
}

/// Like `certify_scan`, but a miss that *would* have passed on favorable
/// enclosure endpoints is reported as `Indecisive`: tightening the enclosure
/// may still certify at this same `s`.
pub fn certify_scan_verdict(
    ps: &PrimeSeq,
    s: u32,
    b: &BracketValue,
) -> Result<ScanVerdict, Error> {
    let (cert, favorable_any) = scan_impl(ps, s, b)?;
    Ok(match cert {
        Some(c) => ScanVerdict::Certified(c),
        None if favorable_any => ScanVerdict::Indecisive,
        None => ScanVerdict::NoCandidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::{eval_bracket_dyadic, eval_bracket_exact, BracketForm};
    use num_bigint::BigInt;
    use num_traits::Pow;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn seq(n: usize) -> PrimeSeq {
        PrimeSeq::first_n(n).unwrap()
    }

    #[test]
    fn tail_bound_frozen_values() {
        assert_eq!(tail_bound(4, 4).unwrap(), rat(7, 768));
        assert_eq!(tail_bound(4, 6).unwrap(), rat(1, 432));
        assert_eq!(tail_bound(2, 10).unwrap(), rat(11, 100));
        assert_eq!(tail_bound(1, 5), Err(Error::TailExponentTooSmall { s: 1 }));
    }

    #[test]
    fn tail_bound_dominates_long_partial_tails() {
        for (s, m_from) in [(2u32, 10u64), (3, 4), (4, 6)] {
            let mut partial = Rat::zero();
            for j in m_from..=2000 {
                partial += recip_power(j, s);
            }
            assert!(partial < tail_bound(s, m_from).unwrap(), "s={s} m={m_from}");
        }
    }

    #[test]
    fn ub_sum_frozen_values() {
        assert_eq!(ub_sum(4, 4, &seq(1)), Rat::zero());
        assert_eq!(ub_sum(5, 4, &seq(2)), rat(1, 625));
        assert_eq!(ub_sum(3, 2, &seq(1)), rat(1, 9));
    }

    #[test]
    fn lb_val_frozen_values() {
        assert_eq!(lb_val(2, 4, &seq(1)), rat(41, 768));
        assert_eq!(lb_val(4, 4, &seq(2)), rat(11, 6912));
    }

    #[test]
    fn candidate_example_at_the_window_edge() {
        // [2] at s = 2: the bracket is 1/36, the only candidate is 3.
        let b = BracketValue::Exact(rat(1, 36));
        let cert = certify_candidate(&seq(1), 2, 3, &b).unwrap();
        assert!(cert.passed_upper && cert.passed_lower && cert.passed);
        assert_eq!(cert.ub_next_log2, Log2Field::EmptySum);
        assert_eq!(cert.lb_prev_log2, Log2Field::Skipped);
        let b_log2 = cert.b_log2.value().unwrap();
        assert!((b_log2 + 5.169_925_001_442_312).abs() < 1e-9);
    }

    #[test]
    fn candidate_with_both_checks_live() {
        // [2, 3] at s = 4: bracket 4561/12960000, candidate 5 passes a real
        // lower check against lb_val(4) = 11/6912.
        let b = BracketValue::Exact(eval_bracket_exact(&seq(2), 4, BracketForm::E4));
        let cert = certify_candidate(&seq(2), 4, 5, &b).unwrap();
        assert!(cert.passed);
        assert!(cert.lb_prev_log2.value().is_some());
        // And 4 fails: the bracket exceeds nothing below the window sum at 5.
        let cert4 = certify_candidate(&seq(2), 4, 4, &b).unwrap();
        assert!(!cert4.passed);
    }

    #[test]
    fn candidate_window_is_enforced() {
        let b = BracketValue::Exact(rat(1, 100));
        assert_eq!(
            certify_candidate(&seq(2), 4, 7, &b),
            Err(Error::CandidateOutsideWindow { m: 7, lo: 4, hi: 5 })
        );
        assert_eq!(
            certify_candidate(&seq(2), 4, 3, &b),
            Err(Error::CandidateOutsideWindow { m: 3, lo: 4, hi: 5 })
        );
    }

    #[test]
    fn scan_certifies_the_worked_example() {
        let b = BracketValue::Exact(rat(1, 36));
        let cert = certify_scan(&seq(1), 2, &b).unwrap().unwrap();
        assert_eq!(cert.m, 3);
        assert_eq!((cert.n, cert.s), (1, 2));
        assert!(cert.passed);
    }

    #[test]
    fn scan_finds_nothing_for_a_negative_bracket() {
        let b = BracketValue::Exact(eval_bracket_exact(&seq(2), 2, BracketForm::E4));
        assert_eq!(certify_scan(&seq(2), 2, &b).unwrap(), None);
        assert_eq!(
            certify_scan_verdict(&seq(2), 2, &b).unwrap(),
            ScanVerdict::NoCandidate
        );
    }

    #[test]
    fn scan_aborts_on_a_double_pass() {
        // Synthetic bracket (4.5)^-16 for [2, 3]: larger than ub_sum(5) so 4
        // passes its upper check, yet far below lb_val(4), so 5 passes both.
        // A genuine bracket can never do this; the scan must refuse.
        let b = BracketValue::Exact(Rat::new(
            BigInt::from(1u64 << 16),
            Pow::pow(&BigInt::from(9), 16u32),
        ));
        assert_eq!(
            certify_scan(&seq(2), 16, &b),
            Err(Error::AmbiguousCertificate {
                first: 4,
                second: 5
            })
        );
    }

    #[test]
    fn enclosure_verdicts_match_exact_scans_once_tight() {
        for n in [1usize, 2, 3, 4, 5] {
            let ps = seq(n);
            for s in [4u32, 8, 16, 32] {
                let exact = eval_bracket_exact(&ps, s, BracketForm::E4);
                let exact_scan = certify_scan(&ps, s, &BracketValue::Exact(exact)).unwrap();
                let iv = eval_bracket_dyadic(&ps, s, BracketForm::E4, 96 + 8 * s);
                let verdict =
                    certify_scan_verdict(&ps, s, &BracketValue::Enclosure(iv)).unwrap();
                match (&exact_scan, &verdict) {
                    (Some(cert), ScanVerdict::Certified(enc)) => {
                        assert_eq!(cert.m, enc.m, "n={n} s={s}")
                    }
                    (None, ScanVerdict::NoCandidate) => {}
                    other => panic!("n={n} s={s}: mismatch {other:?}"),
                }
            }
        }
    }

    #[test]
    fn wide_enclosures_are_indecisive_not_wrong() {
        // At a precision too coarse for the envelopes, the verdict may be
        // Indecisive or a certified hit, but never a certified miss and
        // never a different candidate than the exact scan finds.
        for prec in 2..=40 {
            let ps = seq(3);
            let s = 16;
            let iv = eval_bracket_dyadic(&ps, s, BracketForm::E4, prec);
            match certify_scan_verdict(&ps, s, &BracketValue::Enclosure(iv)).unwrap() {
                ScanVerdict::Certified(cert) => assert_eq!(cert.m, 7, "prec={prec}"),
                ScanVerdict::NoCandidate | ScanVerdict::Indecisive => {}
            }
        }
        // And indecision does occur somewhere in that range.
        let any_indecisive = (2..=40).any(|prec| {
            let ps = seq(3);
            let iv = eval_bracket_dyadic(&ps, 16, BracketForm::E4, prec);
            matches!(
                certify_scan_verdict(&ps, 16, &BracketValue::Enclosure(iv)).unwrap(),
                ScanVerdict::Indecisive
            )
        });
        assert!(any_indecisive);
    }
}
