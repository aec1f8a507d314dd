//! Stable CSV and JSON layouts.
//!
//! Everything here is byte-deterministic for a given report modulo the
//! `elapsed_ns` columns: comma-separated CSV with LF line endings and a
//! header row always present, JSON with struct-declared key order. Log2
//! magnitudes render as decimals with nine fractional digits; absent
//! optionals render as empty CSV cells; the certificate JSON object carries
//! exactly the documented key set and nothing else.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use primeladder_core::{Certificate, Log2Field};

use crate::driver::{Backend, ConvergenceRecord, LadderReport, StepOutcome, StepReport};

/// CSV cell for a log2 report field: a fixed-point decimal or one of the
/// markers `nonpositive`, `empty-sum`, `skipped`.
pub fn log2_cell(field: Log2Field) -> String {
    match field {
        Log2Field::Value(v) => format!("{v:.9}"),
        Log2Field::Nonpositive => "nonpositive".into(),
        Log2Field::EmptySum => "empty-sum".into(),
        Log2Field::Skipped => "skipped".into(),
    }
}

/// JSON value for the same field: a number with nine fractional digits kept
/// verbatim (`arbitrary_precision`), or the marker string.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum LogJson {
    Num(serde_json::Number),
    Marker(&'static str),
}

fn log2_json(field: Log2Field) -> LogJson {
    match field {
        Log2Field::Value(v) => LogJson::Num(
            serde_json::Number::from_str(&format!("{v:.9}"))
                .expect("fixed-point decimal is a valid JSON number"),
        ),
        Log2Field::Nonpositive => LogJson::Marker("nonpositive"),
        Log2Field::EmptySum => LogJson::Marker("empty-sum"),
        Log2Field::Skipped => LogJson::Marker("skipped"),
    }
}

/// The fixed certificate schema — exactly these keys, in this order.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    n: usize,
    s: u32,
    m: u64,
    b_log2: LogJson,
    ub_next_log2: LogJson,
    lb_prev_log2: LogJson,
    passed_upper: bool,
    passed_lower: bool,
    passed: bool,
}

impl From<&Certificate> for CertificateJson {
    fn from(cert: &Certificate) -> Self {
        Self {
            n: cert.n,
            s: cert.s,
            m: cert.m,
            b_log2: log2_json(cert.b_log2),
            ub_next_log2: log2_json(cert.ub_next_log2),
            lb_prev_log2: log2_json(cert.lb_prev_log2),
            passed_upper: cert.passed_upper,
            passed_lower: cert.passed_lower,
            passed: cert.passed,
        }
    }
}

#[derive(Debug, Serialize)]
struct NextJson<'a> {
    m: u64,
    s_used: u32,
    backend: &'a str,
    elapsed_ns: u64,
    operand_bits: u64,
    certificate: CertificateJson,
}

#[derive(Debug, Serialize)]
struct StepJson {
    n: usize,
    p_next: u64,
    s_used: u32,
    backend: &'static str,
    elapsed_ns: u64,
    operand_bits: u64,
    certificate: CertificateJson,
}

#[derive(Debug, Serialize)]
struct LadderJson {
    n_target: usize,
    primes: Vec<u64>,
    steps: Vec<StepJson>,
}

fn step_json(step: &StepReport) -> StepJson {
    StepJson {
        n: step.n,
        p_next: step.p_next,
        s_used: step.s_used,
        backend: step.backend_used.as_str(),
        elapsed_ns: step.elapsed_ns,
        operand_bits: step.operand_bits,
        certificate: CertificateJson::from(&step.certificate),
    }
}

/// Single-line JSON object for a `next` run.
pub fn next_json(outcome: &StepOutcome) -> String {
    serde_json::to_string(&NextJson {
        m: outcome.p_next,
        s_used: outcome.s_used,
        backend: outcome.backend_used.as_str(),
        elapsed_ns: outcome.elapsed_ns,
        operand_bits: outcome.operand_bits,
        certificate: CertificateJson::from(&outcome.certificate),
    })
    .expect("report serialization is infallible")
}

/// Full ladder report as one JSON object.
pub fn ladder_json(report: &LadderReport) -> String {
    serde_json::to_string(&LadderJson {
        n_target: report.n_target,
        primes: report.primes(),
        steps: report.steps.iter().map(step_json).collect(),
    })
    .expect("report serialization is infallible")
}

/// Ladder CSV: `n,p_next,s_used,backend,elapsed_ns,operand_bits`.
pub fn ladder_csv(report: &LadderReport) -> String {
    let mut out = String::from("n,p_next,s_used,backend,elapsed_ns,operand_bits\n");
    for step in &report.steps {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            step.n,
            step.p_next,
            step.s_used,
            step.backend_used.as_str(),
            step.elapsed_ns,
            step.operand_bits
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Convergence CSV:
/// `n,s,form,backend,b_log2,m_raw,in_window,certified_m,elapsed_ns,operand_bits`.
pub fn converge_csv(records: &[ConvergenceRecord]) -> String {
    let mut out =
        String::from("n,s,form,backend,b_log2,m_raw,in_window,certified_m,elapsed_ns,operand_bits\n");
    for rec in records {
        let m_raw = rec.m_raw.map(|m| m.to_string()).unwrap_or_default();
        let certified = rec.certified_m.map(|m| m.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            rec.n,
            rec.s,
            rec.form.as_str(),
            rec.backend.as_str(),
            log2_cell(rec.b_log2),
            m_raw,
            rec.in_window,
            certified,
            rec.elapsed_ns,
            rec.operand_bits
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Bench CSV, one row per (backend, step):
/// `backend,n,p_next,s_used,elapsed_ns,operand_bits`.
pub fn bench_csv(runs: &[(Backend, LadderReport)]) -> String {
    let mut out = String::from("backend,n,p_next,s_used,elapsed_ns,operand_bits\n");
    for (backend, report) in runs {
        for step in &report.steps {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                backend.as_str(),
                step.n,
                step.p_next,
                step.s_used,
                step.elapsed_ns,
                step.operand_bits
            )
            .expect("writing to a String cannot fail");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use primeladder_core::PrimeSeq;

    use crate::driver::{converge_sweep, ladder, next_prime, DriverOptions};

    #[test]
    fn log2_cells_render_markers_and_decimals() {
        assert_eq!(log2_cell(Log2Field::Value(-5.169_925_001_442_312)), "-5.169925001");
        assert_eq!(log2_cell(Log2Field::Value(10.0)), "10.000000000");
        assert_eq!(log2_cell(Log2Field::Nonpositive), "nonpositive");
        assert_eq!(log2_cell(Log2Field::EmptySum), "empty-sum");
        assert_eq!(log2_cell(Log2Field::Skipped), "skipped");
    }

    #[test]
    fn certificate_json_has_exactly_the_documented_keys() {
        let outcome = next_prime(&PrimeSeq::seed(), &DriverOptions::default()).unwrap();
        let text = serde_json::to_string(&CertificateJson::from(&outcome.certificate)).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = value.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            vec![
                "b_log2",
                "lb_prev_log2",
                "m",
                "n",
                "passed",
                "passed_lower",
                "passed_upper",
                "s",
                "ub_next_log2"
            ]
        );
        assert_eq!(obj["m"], 3);
        assert_eq!(obj["s"], 4);
        assert_eq!(obj["passed"], true);
        // Markers came through as strings, values as numbers.
        assert!(obj["lb_prev_log2"].is_string());
        assert!(obj["b_log2"].is_number());
    }

    #[test]
    fn json_number_keeps_nine_fractional_digits() {
        let text = serde_json::to_string(&log2_json(Log2Field::Value(-6.933_857_643_208_788)))
            .unwrap();
        assert_eq!(text, "-6.933857643");
        let text = serde_json::to_string(&log2_json(Log2Field::Value(10.0))).unwrap();
        assert_eq!(text, "10.000000000");
    }

    #[test]
    fn ladder_csv_layout() {
        let report = ladder(3, &DriverOptions::default()).unwrap();
        let csv = ladder_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,p_next,s_used,backend,elapsed_ns,operand_bits");
        assert_eq!(lines.len(), 3); // header + 2 steps
        assert!(lines[1].starts_with("1,3,4,dyadic,"));
        assert!(lines[2].starts_with("2,5,4,dyadic,"));
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn converge_csv_layout_with_markers_and_blanks() {
        let ps = PrimeSeq::first_n(2).unwrap();
        let records = converge_sweep(
            &ps,
            &[2, 4],
            &[primeladder_core::BracketForm::E4],
            None,
        )
        .unwrap();
        let csv = converge_csv(&records);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "n,s,form,backend,b_log2,m_raw,in_window,certified_m,elapsed_ns,operand_bits"
        );
        // Negative bracket at s = 2: marker cell, blank m_raw/certified_m.
        assert!(lines[1].starts_with("2,2,e4,exact,nonpositive,,false,,"));
        // s = 4 certifies 5 while the raw root is still out of the window.
        assert!(lines[2].starts_with("2,4,e4,exact,-11.472427928,7,false,5,"));
    }
}
