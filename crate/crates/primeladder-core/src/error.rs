use core::fmt;

/// Domain and consistency errors for the exact arithmetic and certification
/// paths. Everything that can go wrong here is a precondition violation or an
/// internal soundness breach; there are no IO errors in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `rat_pow` with a zero base and a nonpositive exponent.
    ZeroToNonpositivePower,
    /// A comparison or logarithm was asked of a nonpositive rational.
    NonpositiveOperand,
    /// `bracket_root` requires a bracket value in `(0, 1]`; it was `<= 0`.
    NonpositiveBracket,
    /// `bracket_root` requires a bracket value in `(0, 1]`; it was `> 1`.
    BracketAboveOne,
    /// `tail_bound` needs `s >= 2` for the tail integral to converge.
    TailExponentTooSmall { s: u32 },
    /// A prime sequence failed validation (wrong start, gap, or composite).
    InvalidPrimeSeq(SeqDefect),
    /// A certification candidate fell outside the admissible window.
    CandidateOutsideWindow { m: u64, lo: u64, hi: u64 },
    /// Two distinct candidates certified in one scan. The envelopes prove at
    /// most one integer can pass, so this is an internal soundness breach and
    /// the caller must abort.
    AmbiguousCertificate { first: u64, second: u64 },
}

/// What exactly was wrong with a candidate prime sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqDefect {
    Empty,
    /// The sequence must start at 2.
    WrongStart { got: u64 },
    /// An element is not prime.
    Composite { value: u64 },
    /// Adjacent elements skip over a prime (or are out of order).
    NotConsecutive { after: u64, got: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroToNonpositivePower => {
                write!(f, "zero base cannot be raised to a nonpositive power")
            }
            Self::NonpositiveOperand => write!(f, "operand must be positive"),
            Self::NonpositiveBracket => write!(f, "bracket value must be positive"),
            Self::BracketAboveOne => write!(f, "bracket value must not exceed 1"),
            Self::TailExponentTooSmall { s } => {
                write!(f, "tail bound needs s >= 2, got s = {s}")
            }
            Self::InvalidPrimeSeq(defect) => write!(f, "invalid prime sequence: {defect}"),
            Self::CandidateOutsideWindow { m, lo, hi } => {
                write!(f, "candidate {m} outside window [{lo}, {hi}]")
            }
            Self::AmbiguousCertificate { first, second } => {
                write!(
                    f,
                    "soundness breach: candidates {first} and {second} both certified"
                )
            }
        }
    }
}

impl fmt::Display for SeqDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "sequence is empty"),
            Self::WrongStart { got } => write!(f, "must start at 2, got {got}"),
            Self::Composite { value } => write!(f, "{value} is not prime"),
            Self::NotConsecutive { after, got } => {
                write!(f, "{got} is not the next prime after {after}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
