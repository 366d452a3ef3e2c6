//! Acceptance run: one line per criterion, exit status 1 if any fails.
//!
//! Criteria 1 to 8 run the validation suite in process with the default
//! seed and box. Criterion 9 drives the binary.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use tdsts::validate::{run_criterion, SuiteConfig, CRITERIA};

fn tdsts(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tdsts"))
        .args(args)
        .env_remove("TDSTS_FOCK_CUTOFF")
        .output()
        .expect("binary runs")
}

/// The command-line contract. Returns the reasons it fails, if any.
fn cli_contract() -> Vec<String> {
    let mut problems = Vec::new();

    let o = tdsts(&["validate"]);
    if o.status.code() != Some(0) {
        let text = String::from_utf8_lossy(&o.stdout);
        let tags = text.lines().find_map(|l| l.strip_prefix("failing tags: ")).unwrap_or("none listed");
        problems.push(format!("validate exited {:?} (failing tags: {tags})", o.status.code()));
    }

    let vacuum = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/vacuum.json");
    let run = || tdsts(&["evaluate", "--config", vacuum.to_str().unwrap()]);
    let (first, second) = (run(), run());
    if !first.status.success() {
        problems.push(format!("evaluate exited {:?}", first.status.code()));
        return problems;
    }
    if first.stdout != second.stdout {
        problems.push("evaluate reruns differ".into());
    }
    let text = String::from_utf8_lossy(&first.stdout);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let field = |name: &str| -> Option<f64> {
        let k = header.iter().position(|h| *h == name)?;
        row.get(k)?.parse().ok()
    };
    for (name, expected) in [("var_x", "0.5000000"), ("var_p", "0.5000000"), ("entropy_sum", "2.1447299")] {
        match field(name) {
            Some(v) if format!("{v:.7}") == expected => {}
            other => problems.push(format!("{name} = {other:?}, expected {expected}")),
        }
    }
    problems
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut all = true;
    for id in CRITERIA {
        match run_criterion(id, &cfg) {
            Ok(report) => {
                let verdict = if report.passed() { "PASS" } else { "FAIL" };
                let mut line =
                    format!("criterion {id}: {verdict} {} ({:.2}s)", report.title, report.elapsed.as_secs_f64());
                let tags = report.failing_tags();
                if !tags.is_empty() {
                    let names: Vec<&str> = tags.iter().map(|t| t.name()).collect();
                    line.push_str(&format!(" failing: {}", names.join(", ")));
                }
                if !report.within_time() {
                    line.push_str(" over time");
                }
                all &= report.passed();
                println!("{line}");
            }
            Err(e) => {
                all = false;
                println!("criterion {id}: FAIL {e}");
            }
        }
    }

    let start = Instant::now();
    let problems = cli_contract();
    let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("criterion 9: {verdict} command-line contract ({:.2}s)", start.elapsed().as_secs_f64());
    if !problems.is_empty() {
        line.push_str(&format!(" {}", problems.join("; ")));
    }
    println!("{line}");
    all &= problems.is_empty();

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
