//! End-to-end tests over the `primeladder` binary: exit codes, output
//! layouts, and file emission.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primeladder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Drops the `elapsed_ns` column so CSV comparisons ignore timing jitter.
fn strip_column(csv: &str, header_name: &str) -> String {
    let mut lines = csv.lines();
    let header = lines.next().expect("csv has a header");
    let idx = header
        .split(',')
        .position(|h| h == header_name)
        .expect("column present");
    let strip = |line: &str| {
        line.split(',')
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, f)| f)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut result = strip(header);
    for line in lines {
        result.push('\n');
        result.push_str(&strip(line));
    }
    result.push('\n');
    result
}

#[test]
fn next_json_reports_the_documented_object() {
    let out = run(&["next", "--primes", "2", "--json"]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(value["m"], 3);
    assert_eq!(value["s_used"], 4);
    assert_eq!(value["backend"], "dyadic");
    assert_eq!(value["certificate"]["n"], 1);
    assert_eq!(value["certificate"]["passed"], true);
    assert_eq!(value["certificate"]["ub_next_log2"], "empty-sum");
    assert_eq!(value["certificate"]["lb_prev_log2"], "skipped");
    assert!(value["certificate"]["b_log2"].is_number());
    assert!(value["elapsed_ns"].is_number());
    assert!(value["operand_bits"].is_number());
}

#[test]
fn next_plain_prints_only_the_prime() {
    let out = run(&["next", "--n", "4"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "11\n");
}

#[test]
fn next_rejects_a_gapped_sequence_with_exit_2() {
    let out = run(&["next", "--primes", "2,5"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("not the next prime"));
}

#[test]
fn next_requires_exactly_one_seed_flag() {
    assert_eq!(code_of(&run(&["next"])), 2);
    assert_eq!(code_of(&run(&["next", "--primes", "2", "--n", "1"])), 2);
}

#[test]
fn next_reports_schedule_exhaustion_with_exit_1() {
    let out = run(&["next", "--primes", "2,3", "--s-start", "2", "--s-max", "2"]);
    assert_eq!(code_of(&out), 1);
    let err = stderr_of(&out);
    assert!(err.contains("no certificate passed"), "stderr: {err}");
    assert!(err.contains("s_max = 2"), "stderr: {err}");
}

#[test]
fn next_rejects_unknown_forms_and_backends() {
    assert_eq!(code_of(&run(&["next", "--primes", "2", "--form", "e9"])), 2);
    assert_eq!(
        code_of(&run(&["next", "--primes", "2", "--backend", "fast"])),
        2
    );
}

#[test]
fn ladder_csv_matches_the_frozen_layout() {
    let out = run(&["ladder", "--n", "4"]);
    assert_eq!(code_of(&out), 0);
    let stable = strip_column(&stdout_of(&out), "elapsed_ns");
    let mut lines = stable.lines();
    assert_eq!(lines.next(), Some("n,p_next,s_used,backend,operand_bits"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1,3,4,dyadic,"), "row: {}", rows[0]);
    assert!(rows[1].starts_with("2,5,4,dyadic,"), "row: {}", rows[1]);
    assert!(rows[2].starts_with("3,7,8,dyadic,"), "row: {}", rows[2]);
    // LF endings only.
    assert!(!stdout_of(&out).contains('\r'));
}

#[test]
fn ladder_json_lists_primes_and_steps() {
    let out = run(&["ladder", "--n", "5", "--emit", "json", "--backend", "exact"]);
    assert_eq!(code_of(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(value["n_target"], 5);
    let primes: Vec<u64> = value["primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(primes, [2, 3, 5, 7, 11]);
    let steps = value["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 4);
    assert_eq!(steps[0]["backend"], "exact");
    assert_eq!(steps[3]["p_next"], 11);
    assert_eq!(steps[3]["certificate"]["passed"], true);
}

#[test]
fn ladder_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ladder.json");
    let out = run(&[
        "ladder",
        "--n",
        "3",
        "--emit",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "");
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(value["primes"].as_array().unwrap().len(), 3);
}

#[test]
fn ladder_rejects_unwritable_output_paths() {
    let out = run(&["ladder", "--n", "2", "--out", "/nonexistent-dir/report.csv"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("cannot write"));
}

#[test]
fn ladder_rejects_a_zero_target() {
    let out = run(&["ladder", "--n", "0"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn converge_renders_markers_and_blank_cells() {
    let out = run(&["converge", "--primes", "2,3", "--s-list", "2", "--forms", "e4"]);
    assert_eq!(code_of(&out), 0);
    let stable = strip_column(&stdout_of(&out), "elapsed_ns");
    let mut lines = stable.lines();
    assert_eq!(
        lines.next(),
        Some("n,s,form,backend,b_log2,m_raw,in_window,certified_m,operand_bits")
    );
    let row = lines.next().unwrap();
    assert!(
        row.starts_with("2,2,e4,exact,nonpositive,,false,,"),
        "row: {row}"
    );
    assert_eq!(lines.next(), None);
}

#[test]
fn converge_sweeps_the_full_form_by_exponent_grid() {
    let out = run(&[
        "converge",
        "--primes",
        "2,3",
        "--s-list",
        "2:4:2",
        "--forms",
        "e4,e1t",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("2,2,e4,"));
    assert!(rows[1].starts_with("2,2,e1t,"));
    assert!(rows[2].starts_with("2,4,e4,exact,-11.472427928,7,false,5,"));
    assert!(rows[3].starts_with("2,4,e1t,"));
}

#[test]
fn converge_rejects_json_and_small_exponents() {
    let out = run(&[
        "converge", "--primes", "2", "--s-list", "4", "--emit", "json",
    ]);
    assert_eq!(code_of(&out), 2);
    let out = run(&["converge", "--primes", "2", "--s-list", "1"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("at least 2"));
}

#[test]
fn identity_check_covers_the_grid_and_skips_degenerate_pairs() {
    let out = run(&[
        "identity-check",
        "--n",
        "1:5",
        "--big-n",
        "1:8",
        "--s",
        "2:6",
    ]);
    assert_eq!(code_of(&out), 0);
    // Pairs with big_n >= n: 8 + 7 + 6 + 5 + 4 = 30, times 5 exponents.
    assert!(stdout_of(&out).contains("150 grid points"));
}

#[test]
fn identity_check_reports_an_injected_fault_with_exit_3() {
    let out = run(&[
        "identity-check",
        "--n",
        "2",
        "--big-n",
        "4",
        "--s",
        "4",
        "--inject-fault",
    ]);
    assert_eq!(code_of(&out), 3);
    assert!(stderr_of(&out).contains("identity failed at n=2 big_n=4 s=4"));
}

#[test]
fn selftest_prints_one_line_per_check() {
    let out = run(&["selftest", "--n", "5"]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("check ladder-vs-sieve: ok"));
    assert!(text.contains("check certificate-soundness: ok"));
    assert!(text.contains("check backend-agreement: ok"));
    assert!(text.contains("selftest: all checks passed"));
}

#[test]
fn bench_emits_backend_major_rows() {
    let out = run(&["bench", "--n", "3", "--backends", "exact,dyadic"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("backend,n,p_next,s_used,elapsed_ns,operand_bits")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("exact,1,3,4,"));
    assert!(rows[1].starts_with("exact,2,5,4,"));
    assert!(rows[2].starts_with("dyadic,1,3,4,"));
    assert!(rows[3].starts_with("dyadic,2,5,4,"));
}

#[test]
fn bench_rejects_unknown_backends() {
    let out = run(&["bench", "--n", "2", "--backends", "exact,nosuch"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("unknown backend"));
}

#[test]
fn range_expressions_accept_lists_and_stepped_spans() {
    // Comma list.
    let out = run(&["converge", "--primes", "2", "--s-list", "2,4", "--forms", "e4"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out).lines().count(), 3);
    // Malformed range.
    let out = run(&["converge", "--primes", "2", "--s-list", "6:2"]);
    assert_eq!(code_of(&out), 2);
    let out = run(&["converge", "--primes", "2", "--s-list", "2:8:0"]);
    assert_eq!(code_of(&out), 2);
}
