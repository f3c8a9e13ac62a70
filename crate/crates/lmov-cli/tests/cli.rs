//! End-to-end behavior of the `lmov` binary: exit codes, machine formats,
//! and exact round-trips of serialized values.

use std::process::Command;

use num_rational::BigRational;
use num_traits::FromPrimitive;

use lmov_cli::format::parse_cell;
use lmov_core::invariant::n_ml;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_lmov"))
        .args(args)
        .output()
        .expect("binary spawns");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn usage_errors_exit_with_code_two() {
    let (_, err, code) = run(&["extremal", "--p", "1", "--max-r", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("usage error"), "stderr: {err}");

    let (_, err, code) = run(&["extremal", "--p", "0", "--max-r", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("regime"), "stderr: {err}");

    let (_, _, code) = run(&["genus0", "--tau", "1", "--max-m", "0"]);
    assert_eq!(code, 2);

    let (_, _, code) = run(&["genus0", "--tau", "1", "--jobs", "0"]);
    assert_eq!(code, 2);

    let (_, err, code) = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("available"), "stderr: {err}");

    // clap rejects a missing required argument with the same usage code
    let (_, _, code) = run(&["genus0"]);
    assert_eq!(code, 2);
}

#[test]
fn bps_json_at_zero_framing_is_the_defining_table() {
    let (out, _, code) = run(&["bps", "--tau", "0", "--m", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("valid json");

    assert_eq!(doc["meta"]["command"], "bps");
    assert_eq!(doc["meta"]["tau"].as_i64(), Some(0));
    let orientation = doc["meta"]["orientation"].as_str().expect("orientation string");
    assert!(orientation.contains("z^2 g_m"), "orientation: {orientation}");

    let rows = doc["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["m"].as_i64(), Some(1));
        assert_eq!(row["g"].as_i64(), Some(0));
        assert_eq!(row["flagged"], serde_json::Value::Bool(false));
        let two_q = row["two_q"].as_i64().expect("doubled charge");
        let n = row["n"].as_i64().expect("integral entry");
        // the only nonzero entries sit at Q = 1/2 and Q = -1/2 with values 1 and -1
        assert_eq!(n, two_q, "row: {row}");
        assert_eq!(two_q.abs(), 1, "row: {row}");
    }
}

#[test]
fn genus0_json_contains_the_pinned_cell() {
    let (out, _, code) = run(&["genus0", "--tau", "1", "--max-m", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("valid json");
    let rows = doc["rows"].as_array().expect("rows array");
    let hit = rows.iter().any(|row| {
        row["m"].as_i64() == Some(2) && row["l"].as_i64() == Some(1) && row["n"].as_i64() == Some(1)
    });
    assert!(hit, "expected the (m, l) = (2, 1) entry to equal 1 at framing 1");
}

#[test]
fn csv_round_trips_through_exact_parsing() {
    let (out, _, code) = run(&["genus0", "--tau", "-1", "--max-m", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines().filter(|line| !line.starts_with('#'));
    assert_eq!(lines.next(), Some("m,l,n,flagged"));
    let mut seen = 0usize;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4, "line: {line}");
        let m: u64 = cols[0].parse().expect("m column");
        let l: u64 = cols[1].parse().expect("l column");
        let parsed = parse_cell(cols[2]).expect("n column parses exactly");
        assert_eq!(parsed, n_ml(m, l, -1), "entry ({m}, {l})");
        assert_eq!(cols[3], "false");
        seen += 1;
    }
    // rows for every 1 <= m <= 4, 0 <= l <= m
    assert_eq!(seen, 2 + 3 + 4 + 5);
}

#[test]
fn pretty_bps_shows_half_integer_charges() {
    let (out, _, code) = run(&["bps", "--tau", "0", "--m", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("1/2"), "output: {out}");
    assert!(out.contains("-1/2"), "output: {out}");
}

#[test]
fn parse_cell_inverts_cell_text() {
    let half = BigRational::from_f64(0.5).expect("exact half");
    assert_eq!(parse_cell("1/2"), Some(half));
    assert_eq!(parse_cell("-7"), Some(BigRational::from_integer((-7).into())));
    assert_eq!(parse_cell("3/0"), None);
    assert_eq!(parse_cell("x"), None);
}
