//! `primeladder` — certified next-prime recursion from the command line.
//!
//! Exit codes: 0 success, 1 schedule exhausted before certification,
//! 2 invalid input, 3 internal inconsistency or identity failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::{value_parser, ArgGroup, Args, Parser, Subcommand};

use primeladder_cli::driver::{
    converge_sweep, ladder, next_prime, Backend, DriverError, DriverOptions,
};
use primeladder_cli::emit::{bench_csv, converge_csv, ladder_csv, ladder_json, next_json};
use primeladder_core::bracket::{
    eval_bracket_exact, euler_factor_prod_exact, euler_truncation_identity,
};
use primeladder_core::certify::certify_scan;
use primeladder_core::primes::sieve_upto;
use primeladder_core::{BracketForm, BracketValue, PrimeSeq};

#[derive(Parser)]
#[command(
    name = "primeladder",
    version,
    about = "Certified next-prime recursion over truncated zeta partial sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the next prime after a seed sequence
    Next(NextArgs),
    /// Grow the ladder from [2] to a target number of primes
    Ladder(LadderArgs),
    /// Sweep bracket diagnostics over exponents and forms
    Converge(ConvergeArgs),
    /// Check the exact algebraic identities over a grid
    IdentityCheck(IdentityCheckArgs),
    /// Run the built-in consistency checks
    Selftest(SelftestArgs),
    /// Time ladder runs per backend
    Bench(BenchArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("seed").required(true).args(["primes", "n"])))]
struct NextArgs {
    /// Comma-separated consecutive primes starting at 2, e.g. 2,3,5
    #[arg(long, value_parser = parse_primes)]
    primes: Option<PrimeSeq>,
    /// Seed with the first N primes instead
    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    n: Option<u64>,
    /// Bracket form: e4 or e1t
    #[arg(long, default_value = "e4", value_parser = parse_form)]
    form: BracketForm,
    /// Evaluator: exact, dyadic, or auto
    #[arg(long, default_value = "auto")]
    backend: Backend,
    /// First exponent of the doubling schedule
    #[arg(long = "s-start", default_value_t = 4)]
    s_start: u32,
    /// Largest exponent the schedule may reach
    #[arg(long = "s-max", default_value_t = 4096)]
    s_max: u32,
    /// Emit the outcome and certificate as one JSON object
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LadderArgs {
    /// Target number of primes (seed included)
    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    n: u64,
    /// Output format: csv or json
    #[arg(long, default_value = "csv", value_parser = parse_emit)]
    emit: EmitKind,
    /// Evaluator: exact, dyadic, or auto
    #[arg(long, default_value = "auto")]
    backend: Backend,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Comma-separated consecutive primes starting at 2
    #[arg(long, value_parser = parse_primes)]
    primes: PrimeSeq,
    /// Exponents: K, A:B, A:B:STEP, or a comma list
    #[arg(long = "s-list", value_parser = parse_range_expr)]
    s_list: U32List,
    /// Bracket forms to sweep, e.g. e4,e1t
    #[arg(long, default_value = "e4", value_parser = parse_forms)]
    forms: FormList,
    /// Output format (csv only)
    #[arg(long, default_value = "csv", value_parser = parse_csv_only)]
    emit: EmitKind,
}

#[derive(Args)]
struct IdentityCheckArgs {
    /// Sequence lengths: K, A:B, or A:B:STEP
    #[arg(long, value_parser = parse_range_expr)]
    n: U32List,
    /// Extension lengths; pairs with big-n < n are skipped
    #[arg(long = "big-n", value_parser = parse_range_expr)]
    big_n: U32List,
    /// Exponents (each at least 2)
    #[arg(long, value_parser = parse_range_expr)]
    s: U32List,
    /// Corrupt one operand to prove the failure path reports exit 3
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Ladder length the checks run against
    #[arg(long, default_value_t = 26, value_parser = value_parser!(u64).range(1..))]
    n: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Target number of primes per timed run
    #[arg(long, value_parser = value_parser!(u64).range(1..))]
    n: u64,
    /// Backends to time, e.g. exact,dyadic
    #[arg(long, default_value = "exact,dyadic", value_parser = parse_backends)]
    backends: BackendList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EmitKind {
    Csv,
    Json,
}

#[derive(Clone)]
struct U32List(Vec<u32>);

#[derive(Clone)]
struct FormList(Vec<BracketForm>);

#[derive(Clone)]
struct BackendList(Vec<Backend>);

fn parse_primes(s: &str) -> Result<PrimeSeq, String> {
    let values = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad prime '{}': {e}", t.trim()))
        })
        .collect::<Result<Vec<u64>, String>>()?;
    PrimeSeq::new(values).map_err(|e| e.to_string())
}

fn parse_form(s: &str) -> Result<BracketForm, String> {
    match s {
        "e4" => Ok(BracketForm::E4),
        "e1t" => Ok(BracketForm::E1T),
        other => Err(format!("unknown form '{other}' (expected e4 or e1t)")),
    }
}

fn parse_forms(s: &str) -> Result<FormList, String> {
    let forms = s
        .split(',')
        .map(|t| parse_form(t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FormList(forms))
}

fn parse_backends(s: &str) -> Result<BackendList, String> {
    let backends = s
        .split(',')
        .map(|t| t.trim().parse::<Backend>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BackendList(backends))
}

fn parse_emit(s: &str) -> Result<EmitKind, String> {
    match s {
        "csv" => Ok(EmitKind::Csv),
        "json" => Ok(EmitKind::Json),
        other => Err(format!("unknown format '{other}' (expected csv or json)")),
    }
}

fn parse_csv_only(s: &str) -> Result<EmitKind, String> {
    match s {
        "csv" => Ok(EmitKind::Csv),
        other => Err(format!("convergence sweeps emit csv only, got '{other}'")),
    }
}

/// Accepts `K`, `A:B`, `A:B:STEP`, or `X,Y,Z`.
fn parse_range_expr(s: &str) -> Result<U32List, String> {
    let parse_one = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad integer '{}': {e}", t.trim()))
    };
    if s.contains(':') {
        let parts: Vec<u32> = s.split(':').map(parse_one).collect::<Result<_, _>>()?;
        let (lo, hi, step) = match parts.as_slice() {
            [lo, hi] => (*lo, *hi, 1),
            [lo, hi, step] => (*lo, *hi, *step),
            _ => return Err(format!("range '{s}' must be A:B or A:B:STEP")),
        };
        if step == 0 {
            return Err("range step must be positive".into());
        }
        if lo > hi {
            return Err(format!("range '{s}' is empty (start above end)"));
        }
        Ok(U32List((lo..=hi).step_by(step as usize).collect()))
    } else if s.contains(',') {
        let items = s.split(',').map(parse_one).collect::<Result<_, _>>()?;
        Ok(U32List(items))
    } else {
        Ok(U32List(vec![parse_one(s)?]))
    }
}

/// Command failure carrying the process exit code.
struct CmdFailure {
    code: i32,
    message: String,
}

impl CmdFailure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn failure_from(err: DriverError) -> CmdFailure {
    let code = match &err {
        DriverError::InvalidOptions(_) => 2,
        DriverError::NotConverged { .. } => 1,
        DriverError::OracleMismatch { .. } | DriverError::Internal { .. } => 3,
    };
    CmdFailure::new(code, err.to_string())
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), CmdFailure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CmdFailure::new(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_next(args: NextArgs) -> Result<(), CmdFailure> {
    let ps = match (args.primes, args.n) {
        (Some(ps), None) => ps,
        (None, Some(n)) => PrimeSeq::first_n(n as usize).expect("n >= 1 enforced by clap"),
        _ => unreachable!("clap group enforces exactly one seed flag"),
    };
    let opts = DriverOptions {
        form: args.form,
        backend: args.backend,
        s_start: args.s_start,
        s_max: args.s_max,
        ..DriverOptions::default()
    };
    let outcome = next_prime(&ps, &opts).map_err(failure_from)?;
    if args.json {
        println!("{}", next_json(&outcome));
    } else {
        println!("{}", outcome.p_next);
    }
    Ok(())
}

fn run_ladder(args: LadderArgs) -> Result<(), CmdFailure> {
    let opts = DriverOptions {
        backend: args.backend,
        ..DriverOptions::default()
    };
    let report = ladder(args.n as usize, &opts).map_err(|failure| {
        let mut fail = failure_from(failure.error);
        fail.message = format!(
            "{} (certified prefix: {} of {} primes)",
            fail.message,
            failure.partial.primes().len(),
            args.n
        );
        fail
    })?;
    let text = match args.emit {
        EmitKind::Csv => ladder_csv(&report),
        EmitKind::Json => {
            let mut s = ladder_json(&report);
            s.push('\n');
            s
        }
    };
    write_output(&text, args.out.as_deref())
}

fn run_converge(args: ConvergeArgs) -> Result<(), CmdFailure> {
    let records =
        converge_sweep(&args.primes, &args.s_list.0, &args.forms.0, None).map_err(failure_from)?;
    debug_assert_eq!(args.emit, EmitKind::Csv);
    write_output(&converge_csv(&records), None)
}

fn run_identity_check(args: IdentityCheckArgs) -> Result<(), CmdFailure> {
    if let Some(&bad) = args.s.0.iter().find(|&&s| s < 2) {
        return Err(CmdFailure::new(2, format!("exponents must be at least 2, got {bad}")));
    }
    if args.n.0.iter().chain(args.big_n.0.iter()).any(|&v| v == 0) {
        return Err(CmdFailure::new(2, "sequence lengths must be at least 1"));
    }
    let mut points = 0usize;
    for &n in &args.n.0 {
        let ps = PrimeSeq::first_n(n as usize).expect("n >= 1 checked above");
        for &big_n in &args.big_n.0 {
            if big_n < n {
                continue; // degenerate pair, skipped by contract
            }
            for &s in &args.s.0 {
                let truncation_ok = euler_truncation_identity(&ps, big_n as usize, s);

                let e4 = eval_bracket_exact(&ps, s, BracketForm::E4);
                let e1t = eval_bracket_exact(&ps, s, BracketForm::E1T);
                let plain = if args.inject_fault {
                    // Deliberately wrong operand: the product over one prime
                    // too many. The comparison below must then fail.
                    let longer = PrimeSeq::first_n(n as usize + 1).expect("n + 1 >= 1");
                    euler_factor_prod_exact(&longer, s, false)
                } else {
                    euler_factor_prod_exact(&ps, s, false)
                };
                let forms_ok = e1t == e4 * plain;

                if !(truncation_ok && forms_ok) {
                    return Err(CmdFailure::new(
                        3,
                        format!("identity failed at n={n} big_n={big_n} s={s}"),
                    ));
                }
                points += 1;
            }
        }
    }
    println!("identity-check: {points} grid points, all identities hold");
    Ok(())
}

fn run_selftest(args: SelftestArgs) -> Result<(), CmdFailure> {
    let target = args.n as usize;
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!(
            "check {name}: {} ({detail})",
            if ok { "ok" } else { "FAILED" }
        );
        if !ok {
            failures += 1;
        }
    };

    // Ladder output against the sieve.
    let report = ladder(target, &DriverOptions::default()).map_err(|f| failure_from(f.error))?;
    let primes = report.primes();
    let sieved = sieve_upto(*primes.last().expect("ladder output is never empty"));
    check(
        "ladder-vs-sieve",
        primes == sieved && primes.len() == target,
        format!("{target} primes, last {}", primes.last().expect("nonempty")),
    );

    // Exact certification sweep: every pass must name the trial-division
    // answer.
    let sweep_n = target.min(12);
    let mut scans = 0usize;
    let mut sweep_ok = true;
    for n in 1..=sweep_n {
        let ps = PrimeSeq::first_n(n).expect("n >= 1");
        let oracle = ps.oracle_next_prime();
        for s in [2u32, 4, 8, 16, 32] {
            let b = BracketValue::Exact(eval_bracket_exact(&ps, s, BracketForm::E4));
            match certify_scan(&ps, s, &b) {
                Ok(Some(cert)) => sweep_ok &= cert.m == oracle,
                Ok(None) => {}
                Err(_) => sweep_ok = false,
            }
            scans += 1;
        }
    }
    check("certificate-soundness", sweep_ok, format!("{scans} scans"));

    // Backend agreement on the full ladder.
    let exact = ladder(
        target,
        &DriverOptions {
            backend: Backend::Exact,
            ..DriverOptions::default()
        },
    )
    .map_err(|f| failure_from(f.error))?;
    let dyadic = ladder(
        target,
        &DriverOptions {
            backend: Backend::Dyadic,
            ..DriverOptions::default()
        },
    )
    .map_err(|f| failure_from(f.error))?;
    let agree = exact.primes() == dyadic.primes()
        && exact
            .steps
            .iter()
            .zip(dyadic.steps.iter())
            .all(|(a, b)| a.s_used == b.s_used);
    check(
        "backend-agreement",
        agree,
        format!("{} steps", exact.steps.len()),
    );

    if failures == 0 {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(CmdFailure::new(3, format!("selftest: {failures} check(s) failed")))
    }
}

fn run_bench(args: BenchArgs) -> Result<(), CmdFailure> {
    let mut runs = Vec::with_capacity(args.backends.0.len());
    for &backend in &args.backends.0 {
        let opts = DriverOptions {
            backend,
            ..DriverOptions::default()
        };
        let report = ladder(args.n as usize, &opts).map_err(|f| failure_from(f.error))?;
        runs.push((backend, report));
    }
    write_output(&bench_csv(&runs), None)
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Next(args) => run_next(args),
        Command::Ladder(args) => run_ladder(args),
        Command::Converge(args) => run_converge(args),
        Command::IdentityCheck(args) => run_identity_check(args),
        Command::Selftest(args) => run_selftest(args),
        Command::Bench(args) => run_bench(args),
    };
    if let Err(failure) = result {
        eprintln!("primeladder: {}", failure.message);
        process::exit(failure.code);
    }
}
