//! Bracket evaluation.
//!
//! The central quantity is the difference between a truncated zeta partial
//! sum and the finite Euler product over the known primes:
//!
//! ```text
//! B(s) = sum_{j=1}^{2p_n - 1} j^-s  -  prod_{k=1}^{n} (1 - p_k^-s)^-1
//! ```
//!
//! The product expands to the sum of `j^-s` over exactly the integers whose
//! prime factors all lie in the sequence, so the subtraction cancels every
//! smooth term in the window and `B(s)` is dominated by `q^-s` for the
//! smallest non-smooth integer `q` — the next prime — as `s` grows. `E4` is
//! this difference directly; `E1T` is the same bracket multiplied through by
//! `prod (1 - p_k^-s)`, which trades the product inversion for a `- 1`.
//!
//! Both forms evaluate exactly over rationals or as dyadic enclosures; the
//! enclosure always contains the exact value, which the tests pin down.

use num_traits::{One, Zero};

use crate::dyadic::DyadicInterval;
use crate::primes::PrimeSeq;
use crate::rat::{recip_power, Rat};

/// Which algebraic arrangement of the bracket to evaluate. Both have the same
/// sign and the same root behaviour; `E1T` keeps operands smaller at large
/// `s` because nothing is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketForm {
    /// `zeta_partial - euler_product_inverted`
    E4,
    /// `euler_product_plain * zeta_partial - 1`
    E1T,
}

impl BracketForm {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::E4 => "e4",
            Self::E1T => "e1t",
        }
    }
}

/// Exact `sum_{j=1}^{m_top} j^-s`, accumulated in ascending `j` with every
/// intermediate kept in lowest terms.
pub fn zeta_partial_exact(m_top: u64, s: u32) -> Rat {
    assert!(m_top >= 1, "partial sum needs at least one term");
    assert!(s >= 1, "exponent must be a positive integer");
    let mut acc = Rat::zero();
    for j in 1..=m_top {
        acc += recip_power(j, s);
    }
    acc
}

/// Exact `prod (1 - p^-s)` over the sequence, or its reciprocal when
/// `inverted`. Every factor lies in `(0, 1)`, so the inversion is total.
pub fn euler_factor_prod_exact(ps: &PrimeSeq, s: u32, inverted: bool) -> Rat {
    assert!(s >= 1, "exponent must be a positive integer");
    let plain = factor_prod_over(ps.values(), s);
    if inverted {
        plain.recip()
    } else {
        plain
    }
}

fn factor_prod_over(primes: &[u64], s: u32) -> Rat {
    let mut acc = Rat::one();
    for &p in primes {
        acc *= Rat::one() - recip_power(p, s);
    }
    acc
}

/// Exact bracket value for the sequence at exponent `s >= 2`.
pub fn eval_bracket_exact(ps: &PrimeSeq, s: u32, form: BracketForm) -> Rat {
    assert!(s >= 2, "bracket evaluation needs s >= 2");
    let m_top = 2 * ps.last() - 1;
    let zeta = zeta_partial_exact(m_top, s);
    match form {
        BracketForm::E4 => zeta - euler_factor_prod_exact(ps, s, true),
        BracketForm::E1T => euler_factor_prod_exact(ps, s, false) * zeta - Rat::one(),
    }
}

/// Dyadic enclosure of the same bracket. Guaranteed to contain
/// `eval_bracket_exact(ps, s, form)` at any precision; the width scales like
/// `2^-prec` times a factor linear in the window size `2 * last`, so doubling
/// `prec` roughly halves the log-width.
pub fn eval_bracket_dyadic(
    ps: &PrimeSeq,
    s: u32,
    form: BracketForm,
    prec: u32,
) -> DyadicInterval {
    assert!(s >= 2, "bracket evaluation needs s >= 2");
    let m_top = 2 * ps.last() - 1;
    let one = DyadicInterval::exact_int(1, prec);

    let mut zeta = DyadicInterval::exact_int(0, prec);
    for j in 1..=m_top {
        zeta = &zeta + &DyadicInterval::recip_pow(j, s, prec);
    }

    // Product of (1 - p^-s): each factor's lower endpoint stays strictly
    // positive (p^-s <= 1/4 plus one ulp), so the single inversion is safe.
    let mut prod = one.clone();
    for &p in ps.values() {
        let factor = &one - &DyadicInterval::recip_pow(p, s, prec);
        prod = &prod * &factor;
    }

    match form {
        BracketForm::E4 => &zeta - &prod.recip(),
        BracketForm::E1T => &(&prod * &zeta) - &one,
    }
}

/// Checks the telescoping law relating the finite Euler products of a prefix
/// of length `n` and an extension to `big_n` primes:
/// `prod_{k<=n} (1 - p_k^-s) * prod_{k<=N} (1 - p_k^-s)^-1` must equal
/// `prod_{k=n+1}^{N} (1 - p_k^-s)^-1`. Exact, so the return is a plain bool.
pub fn euler_truncation_identity(ps: &PrimeSeq, big_n: usize, s: u32) -> bool {
    assert!(big_n >= ps.len(), "extension must not be shorter");
    assert!(s >= 1, "exponent must be a positive integer");
    let full = PrimeSeq::first_n(big_n).expect("big_n >= len >= 1");
    let lhs = euler_factor_prod_exact(ps, s, false) * euler_factor_prod_exact(&full, s, true);
    let rhs = factor_prod_over(&full.values()[ps.len()..], s).recip();
    lhs == rhs
}

/// Residual of the smooth/non-smooth rearrangement of `E4`, truncated at
/// `cutoff`:
///
/// ```text
/// R = B_e4(s) - sum_{j <= 2p_n - 1, non-smooth} j^-s
///             + sum_{2p_n <= j <= cutoff, smooth} j^-s
/// ```
///
/// Algebraically `R = -sum_{j > cutoff, smooth} j^-s`, so it is nonpositive
/// and `|R|` falls under any valid tail bound starting past the cutoff. The
/// rearrangement is why the bracket isolates the next prime: the non-smooth
/// integers below `2p_n` are precisely the primes in `(p_n, 2p_n)`.
pub fn smooth_decomposition_residual(ps: &PrimeSeq, s: u32, cutoff: u64) -> Rat {
    let m_top = 2 * ps.last() - 1;
    assert!(cutoff >= 2 * ps.last(), "cutoff must reach past the window");
    let mut nonsmooth_window = Rat::zero();
    for j in 2..=m_top {
        if !ps.is_smooth(j) {
            nonsmooth_window += recip_power(j, s);
        }
    }
    let mut smooth_past = Rat::zero();
    for j in (2 * ps.last())..=cutoff {
        if ps.is_smooth(j) {
            smooth_past += recip_power(j, s);
        }
    }
    eval_bracket_exact(ps, s, BracketForm::E4) - nonsmooth_window + smooth_past
}
