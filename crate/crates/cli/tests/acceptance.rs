//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1 to 11 come from a single end-to-end `nmqubits verify` run;
//! criterion 12 times that run together with regeneration of all four panels.
//! A criterion listed in `KNOWN_RED` is reported as failing and must keep
//! failing; any other failure fails the suite.

use std::process::{Command, ExitCode};
use std::time::Instant;

const KNOWN_RED: [&str; 1] = ["9b"];
const EXPECTED_IDS: [&str; 12] = [
    "1", "2", "3", "4", "5", "6", "7", "8", "9a", "9b", "10", "11",
];

fn main() -> ExitCode {
    let bin = env!("CARGO_BIN_EXE_nmqubits");
    let dir = tempfile::tempdir().expect("temp dir");
    let report_path = dir.path().join("report.txt");

    let start = Instant::now();
    let out = Command::new(bin)
        .args(["verify", "--report"])
        .arg(&report_path)
        .output()
        .expect("verify runs");
    let verify_secs = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let report = std::fs::read_to_string(&report_path).unwrap_or_default();

    let mut problems = Vec::new();
    let mut any_failed = false;
    let mut seen = Vec::new();
    for line in stdout.lines() {
        let passed = match &line.get(..6) {
            Some("[PASS]") => true,
            Some("[FAIL]") => false,
            _ => continue,
        };
        let id = line[6..]
            .split_whitespace()
            .next()
            .unwrap_or("")
            .to_string();
        println!("{line}");
        any_failed |= !passed;
        match (passed, KNOWN_RED.contains(&id.as_str())) {
            (false, false) => problems.push(format!("criterion {id} failed")),
            (true, true) => {
                problems.push(format!("criterion {id} is listed as known red but passed"))
            }
            _ => {}
        }
        seen.push(id);
    }
    if seen != EXPECTED_IDS {
        problems.push(format!("criteria reported: {seen:?}"));
    }
    let expected_code = if any_failed { 1 } else { 0 };
    if out.status.code() != Some(expected_code) {
        problems.push(format!(
            "verify exited with {:?}, expected {expected_code}",
            out.status.code()
        ));
    }
    if report != stdout {
        problems.push("--report contents differ from stdout".into());
    }
    if !report.contains("oracle vs reduced propagator") {
        problems.push("adjudication breakdown missing from the report".into());
    }

    let start = Instant::now();
    let mut panels_ok = true;
    for panel in ["a", "b", "c", "d"] {
        let st = Command::new(bin)
            .args(["figure", "--panel", panel, "--out"])
            .arg(dir.path())
            .status()
            .expect("figure runs");
        let rows = std::fs::read_to_string(dir.path().join(format!("panel_{panel}.csv")))
            .map(|t| t.lines().count() - 1)
            .unwrap_or(0);
        panels_ok &= st.success() && rows == 4 * 500;
    }
    let panel_secs = start.elapsed().as_secs_f64();
    let timing_ok = panels_ok && panel_secs < 30.0 && verify_secs < 60.0;
    println!(
        "[{}]  12 end-to-end runtime: four panels ({}) in {panel_secs:.2} s (<30 s), verify in {verify_secs:.2} s (<60 s)",
        if timing_ok { "PASS" } else { "FAIL" },
        if panels_ok { "4 x 4 x 500 rows" } else { "incomplete" },
    );
    if !timing_ok {
        problems.push("criterion 12 failed".into());
    }

    println!("known red: {}", KNOWN_RED.join(", "));
    if problems.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            println!("acceptance problem: {p}");
        }
        ExitCode::FAILURE
    }
}
