//! Recursion orchestration: the adaptive exponent schedule, backend
//! selection, ladder construction from the seed `[2]`, and convergence
//! sweeps.
//!
//! The contract with the core crate is simple: at a given exponent `s`,
//! either some window candidate certifies (and is then cross-checked against
//! trial division), or nothing does and the driver doubles `s`. With the
//! interval backend there is a third outcome — "too wide to tell" — which is
//! handled by doubling the precision up to a cap and then handing the
//! decision to the exact evaluator. That referee step is what makes the
//! chosen backend invisible in the results: both backends certify the same
//! prime at the same `s`, or neither does.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use primeladder_core::bracket::{
    eval_bracket_dyadic, eval_bracket_exact, euler_factor_prod_exact,
};
use primeladder_core::certify::{certify_scan, certify_scan_verdict};
use primeladder_core::locator::estimate_from_value;
use primeladder_core::rat::approx_log2;
use primeladder_core::{
    BracketForm, BracketValue, Certificate, DyadicInterval, Error as CoreError, Log2Field,
    PrimeSeq, Rat, ScanVerdict,
};

/// Which evaluator certifies candidates. `Auto` and `Dyadic` both run the
/// interval evaluator with escalating precision and the mandatory exact
/// fallback at the cap; `Exact` skips intervals entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Dyadic,
    Auto,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Dyadic => "dyadic",
            Self::Auto => "auto",
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Self::Exact),
            "dyadic" => Ok(Self::Dyadic),
            "auto" => Ok(Self::Auto),
            other => Err(format!(
                "unknown backend '{other}' (expected exact, dyadic, or auto)"
            )),
        }
    }
}

/// Which evaluator actually settled a step, with the precision that sufficed
/// when it was the interval one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendUsed {
    Exact,
    Dyadic { prec: u32 },
}

impl BackendUsed {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Dyadic { .. } => "dyadic",
        }
    }
}

/// Schedule and backend knobs. The defaults walk `s = 4, 8, ..., 4096` with
/// interval evaluation first.
#[derive(Debug, Clone)]
pub struct DriverOptions {
    pub form: BracketForm,
    pub backend: Backend,
    pub s_start: u32,
    pub s_max: u32,
    /// The interval precision may grow to this multiple of its floor before
    /// the exact fallback takes over.
    pub prec_cap_multiplier: u32,
}

impl Default for DriverOptions {
    fn default() -> Self {
        Self {
            form: BracketForm::E4,
            backend: Backend::Auto,
            s_start: 4,
            s_max: 4096,
            prec_cap_multiplier: 64,
        }
    }
}

impl DriverOptions {
    fn validate(&self) -> Result<(), DriverError> {
        if self.s_start < 2 {
            return Err(DriverError::InvalidOptions(format!(
                "s_start must be at least 2, got {}",
                self.s_start
            )));
        }
        if self.s_max < self.s_start {
            return Err(DriverError::InvalidOptions(format!(
                "s_max ({}) must not be below s_start ({})",
                self.s_max, self.s_start
            )));
        }
        if self.prec_cap_multiplier == 0 {
            return Err(DriverError::InvalidOptions(
                "prec_cap_multiplier must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One settled extension: the certified prime and how it was reached.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub p_next: u64,
    pub s_used: u32,
    pub backend_used: BackendUsed,
    pub certificate: Certificate,
    pub elapsed_ns: u64,
    pub operand_bits: u64,
}

/// A `StepOutcome` annotated with its position: `n` primes were known before
/// this step ran.
#[derive(Debug, Clone)]
pub struct StepReport {
    pub n: usize,
    pub p_next: u64,
    pub s_used: u32,
    pub backend_used: BackendUsed,
    pub certificate: Certificate,
    pub elapsed_ns: u64,
    pub operand_bits: u64,
}

/// The full run from the seed to `n_target` primes.
#[derive(Debug, Clone)]
pub struct LadderReport {
    pub n_target: usize,
    pub steps: Vec<StepReport>,
}

impl LadderReport {
    /// The primes the ladder produced, seed included.
    pub fn primes(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(2);
        out.extend(self.steps.iter().map(|s| s.p_next));
        out
    }
}

/// One diagnostic row of a convergence sweep: how the bracket, the raw root,
/// and certification behave at a fixed `(s, form)` without advancing the
/// ladder.
#[derive(Debug, Clone)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub s: u32,
    pub form: BracketForm,
    pub backend: Backend,
    pub b_log2: Log2Field,
    pub m_raw: Option<u64>,
    pub in_window: bool,
    pub certified_m: Option<u64>,
    pub elapsed_ns: u64,
    pub operand_bits: u64,
}

/// Why a driver call stopped without an answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DriverError {
    /// Malformed schedule or sweep inputs.
    InvalidOptions(String),
    /// The schedule ran out before any certificate passed.
    NotConverged { n: usize, s_max: u32 },
    /// A certificate passed for something other than the trial-division
    /// answer. This cannot happen unless the arithmetic is broken, so the
    /// caller must abort loudly rather than continue on bad primes.
    OracleMismatch {
        n: usize,
        certified: u64,
        oracle: u64,
    },
    /// The core reported an internal soundness breach (ambiguous scan).
    Internal { n: usize, source: CoreError },
}

impl fmt::Display for DriverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidOptions(msg) => write!(f, "invalid options: {msg}"),
            Self::NotConverged { n, s_max } => write!(
                f,
                "no certificate passed for the step at n = {n} up to s_max = {s_max}"
            ),
            Self::OracleMismatch {
                n,
                certified,
                oracle,
            } => write!(
                f,
                "internal inconsistency at n = {n}: certified {certified} but trial division says {oracle}"
            ),
            Self::Internal { n, source } => {
                write!(f, "internal inconsistency at n = {n}: {source}")
            }
        }
    }
}

impl std::error::Error for DriverError {}

/// A ladder failure carries whatever prefix had already been certified, so
/// callers can report partial progress.
#[derive(Debug, Clone)]
pub struct LadderFailure {
    pub error: DriverError,
    pub partial: LadderReport,
}

/// Fractional bits the interval evaluator starts from: enough that every
/// window power `j^-s` keeps headroom below the working precision, plus a
/// fixed reserve for accumulated rounding.
pub fn prec_floor(s: u32, p_last: u64) -> u32 {
    let ceil_log2 = 64 - (2 * p_last - 1).leading_zeros();
    s * ceil_log2 + 32
}

fn rat_bits(q: &Rat) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

fn internal(n: usize) -> impl Fn(CoreError) -> DriverError {
    move |source| DriverError::Internal { n, source }
}

/// Evaluates the requested form exactly and maps it to the plain-difference
/// value the envelopes are stated for. Returns the operand bit size of the
/// evaluated form value.
fn eval_exact_e4(ps: &PrimeSeq, s: u32, form: BracketForm) -> (Rat, u64) {
    let b_form = eval_bracket_exact(ps, s, form);
    let bits = rat_bits(&b_form);
    let b_e4 = match form {
        BracketForm::E4 => b_form,
        // E1T = E4 * prod(1 - p^-s); divide the exact factor product back out.
        BracketForm::E1T => b_form / euler_factor_prod_exact(ps, s, false),
    };
    (b_e4, bits)
}

fn eval_dyadic_e4(ps: &PrimeSeq, s: u32, form: BracketForm, prec: u32) -> (DyadicInterval, u64) {
    let iv_form = eval_bracket_dyadic(ps, s, form, prec);
    let bits = iv_form.mantissa_bits();
    let iv_e4 = match form {
        BracketForm::E4 => iv_form,
        // Multiply by an enclosure of the exact inverted product; the result
        // still contains the exact plain-difference value.
        BracketForm::E1T => {
            let inv = euler_factor_prod_exact(ps, s, true);
            &iv_form * &DyadicInterval::enclosing_rat(&inv, prec)
        }
    };
    (iv_e4, bits)
}

/// Runs certification at one `s` under the chosen backend. `Ok(None)` means
/// nothing certifies at this `s` no matter the backend (interval misses are
/// only reported when they are safe on favorable endpoints too), so the
/// schedule can advance without breaking backend invariance.
fn scan_at(
    ps: &PrimeSeq,
    s: u32,
    opts: &DriverOptions,
) -> Result<Option<(Certificate, BackendUsed, u64)>, DriverError> {
    let n = ps.len();
    match opts.backend {
        Backend::Exact => {
            let (b_e4, bits) = eval_exact_e4(ps, s, opts.form);
            let scanned =
                certify_scan(ps, s, &BracketValue::Exact(b_e4)).map_err(internal(n))?;
            Ok(scanned.map(|c| (c, BackendUsed::Exact, bits)))
        }
        Backend::Dyadic | Backend::Auto => {
            let floor = prec_floor(s, ps.last());
            let cap = floor.saturating_mul(opts.prec_cap_multiplier);
            let mut prec = floor;
            loop {
                let (iv, bits) = eval_dyadic_e4(ps, s, opts.form, prec);
                match certify_scan_verdict(ps, s, &BracketValue::Enclosure(iv))
                    .map_err(internal(n))?
                {
                    ScanVerdict::Certified(cert) => {
                        return Ok(Some((cert, BackendUsed::Dyadic { prec }, bits)))
                    }
                    ScanVerdict::NoCandidate => return Ok(None),
                    ScanVerdict::Indecisive => {
                        let next = prec.saturating_mul(2);
                        if next > cap {
                            // Precision cap reached: the exact evaluator is
                            // the unconditional referee.
                            let (b_e4, bits) = eval_exact_e4(ps, s, opts.form);
                            let scanned = certify_scan(ps, s, &BracketValue::Exact(b_e4))
                                .map_err(internal(n))?;
                            return Ok(scanned.map(|c| (c, BackendUsed::Exact, bits)));
                        }
                        prec = next;
                    }
                }
            }
        }
    }
}

/// Finds and certifies the next prime after the sequence, walking the
/// doubling schedule from `s_start`. The certified value is cross-checked
/// against trial division before being returned.
pub fn next_prime(ps: &PrimeSeq, opts: &DriverOptions) -> Result<StepOutcome, DriverError> {
    opts.validate()?;
    let started = Instant::now();
    let mut s = opts.s_start;
    loop {
        if let Some((certificate, backend_used, operand_bits)) = scan_at(ps, s, opts)? {
            let oracle = ps.oracle_next_prime();
            if certificate.m != oracle {
                return Err(DriverError::OracleMismatch {
                    n: ps.len(),
                    certified: certificate.m,
                    oracle,
                });
            }
            return Ok(StepOutcome {
                p_next: certificate.m,
                s_used: s,
                backend_used,
                certificate,
                elapsed_ns: started.elapsed().as_nanos() as u64,
                operand_bits,
            });
        }
        match s.checked_mul(2) {
            Some(next) if next <= opts.s_max => s = next,
            _ => {
                return Err(DriverError::NotConverged {
                    n: ps.len(),
                    s_max: opts.s_max,
                })
            }
        }
    }
}

/// Grows the ladder from the seed `[2]` until it holds `n_target` primes.
/// On failure the certified prefix comes back alongside the error.
pub fn ladder(n_target: usize, opts: &DriverOptions) -> Result<LadderReport, Box<LadderFailure>> {
    let mut steps = Vec::new();
    let fail = |error, steps: Vec<StepReport>| {
        Box::new(LadderFailure {
            error,
            partial: LadderReport { n_target, steps },
        })
    };
    if n_target == 0 {
        return Err(fail(
            DriverError::InvalidOptions("the ladder needs a target of at least 1".into()),
            steps,
        ));
    }
    let mut ps = PrimeSeq::seed();
    while ps.len() < n_target {
        let n = ps.len();
        match next_prime(&ps, opts) {
            Ok(outcome) => {
                ps = ps
                    .appended(outcome.p_next)
                    .expect("certified and oracle-checked continuation");
                steps.push(StepReport {
                    n,
                    p_next: outcome.p_next,
                    s_used: outcome.s_used,
                    backend_used: outcome.backend_used,
                    certificate: outcome.certificate,
                    elapsed_ns: outcome.elapsed_ns,
                    operand_bits: outcome.operand_bits,
                });
            }
            Err(error) => return Err(fail(error, steps)),
        }
    }
    Ok(LadderReport { n_target, steps })
}

/// Evaluates the bracket across a grid of exponents and forms for one fixed
/// sequence, recording the raw root drift and what (if anything) certifies.
/// `backend` defaults to exact: sweeps are diagnostics, and the raw columns
/// are exact quantities regardless.
pub fn converge_sweep(
    ps: &PrimeSeq,
    s_values: &[u32],
    forms: &[BracketForm],
    backend: Option<Backend>,
) -> Result<Vec<ConvergenceRecord>, DriverError> {
    let backend = backend.unwrap_or(Backend::Exact);
    if let Some(&bad) = s_values.iter().find(|&&s| s < 2) {
        return Err(DriverError::InvalidOptions(format!(
            "sweep exponents must be at least 2, got {bad}"
        )));
    }
    let n = ps.len();
    let oracle = ps.oracle_next_prime();
    let mut records = Vec::with_capacity(s_values.len() * forms.len());
    for &s in s_values {
        for &form in forms {
            let started = Instant::now();
            let b_form = eval_bracket_exact(ps, s, form);
            let mut operand_bits = rat_bits(&b_form);
            let b_log2 = match approx_log2(&b_form) {
                Ok(v) => Log2Field::Value(v),
                Err(_) => Log2Field::Nonpositive,
            };
            let estimate = estimate_from_value(ps, &b_form, s);

            let sweep_opts = DriverOptions {
                form,
                backend,
                ..DriverOptions::default()
            };
            let certified_m = match scan_at(ps, s, &sweep_opts)? {
                Some((cert, _, bits)) => {
                    operand_bits = operand_bits.max(bits);
                    if cert.m != oracle {
                        return Err(DriverError::OracleMismatch {
                            n,
                            certified: cert.m,
                            oracle,
                        });
                    }
                    Some(cert.m)
                }
                None => None,
            };

            records.push(ConvergenceRecord {
                n,
                s,
                form,
                backend,
                b_log2,
                m_raw: estimate.map(|e| e.m_raw),
                in_window: estimate.map(|e| e.in_window).unwrap_or(false),
                certified_m,
                elapsed_ns: started.elapsed().as_nanos() as u64,
                operand_bits,
            });
        }
    }
    Ok(records)
}
