//! Full-size acceptance battery. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use ferroflow_cli::checks::{self, CheckOutcome};
use ferroflow_cli::{cmd_flow, cmd_majorant, RunConfig};

const SEED: u64 = 20_240_611;

fn timed<F>(limit: Option<Duration>, run: F) -> CheckOutcome
where
    F: FnOnce() -> ferroflow::Result<CheckOutcome>,
{
    let start = Instant::now();
    let mut out = match run() {
        Ok(o) => o,
        Err(e) => CheckOutcome {
            name: "error".into(),
            passed: false,
            metric: f64::NAN,
            threshold: f64::NAN,
            detail: e.to_string(),
            counterexample: None,
        },
    };
    let elapsed = start.elapsed();
    out.detail = format!("{}, {:.2} s", out.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            out.passed = false;
            out.detail = format!("{} exceeds {} s", out.detail, limit.as_secs());
        }
    }
    out
}

fn determinism() -> ferroflow::Result<CheckOutcome> {
    let cfg = RunConfig {
        seed: SEED,
        ..RunConfig::default()
    };
    let run = |c: &RunConfig| -> Result<(String, String), String> {
        let flow = cmd_flow(c).map_err(|e| e.to_string())?;
        let maj = cmd_majorant(c).map_err(|e| e.to_string())?.csv;
        Ok((flow, maj))
    };
    let first = run(&cfg);
    let second = run(&cfg);
    let mut same = matches!((&first, &second), (Ok(a), Ok(b)) if a == b);

    let dir = tempfile::tempdir().map_err(|e| ferroflow::Error::Configuration(e.to_string()))?;
    let mut files = Vec::new();
    for k in 0..2 {
        for cmd in ["flow", "majorant"] {
            let path = dir.path().join(format!("{cmd}-{k}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_ferroflow"))
                .args([cmd, "--seed", &SEED.to_string(), "--out"])
                .arg(&path)
                .output()
                .map_err(|e| ferroflow::Error::Configuration(e.to_string()))?
                .status;
            same &= status.success();
            files.push(std::fs::read(&path).unwrap_or_default());
        }
    }
    same &= files[0] == files[2] && files[1] == files[3] && !files[0].is_empty();
    if let Ok((flow, maj)) = &first {
        same &= files[0] == flow.as_bytes() && files[1] == maj.as_bytes();
    }
    Ok(CheckOutcome {
        name: "determinism".into(),
        passed: same,
        metric: if same { 0.0 } else { 1.0 },
        threshold: 0.0,
        detail: "flow and majorant CSVs, in process and through the binary".into(),
        counterexample: (!same).then(|| format!("seed {SEED}")),
    })
}

#[test]
fn acceptance() {
    let results = [
        ("1", timed(Some(Duration::from_secs(5)), || Ok(checks::pfaffian_identity(SEED, 200, 12, false)))),
        ("2", timed(Some(Duration::from_secs(10)), || checks::moment_oracle(SEED, 10))),
        ("3", timed(None, || checks::heat_kernel_split(SEED, 50, 8))),
        ("4", timed(None, || checks::semigroup_parity(SEED, 20, 8))),
        ("5", timed(None, || checks::gram_bound(SEED, 20))),
        ("6", {
            let start = Instant::now();
            match checks::flow_vs_exact(SEED, 0.05, 1.0, 400) {
                Ok((dev, order)) => {
                    let both = dev.passed && order.passed;
                    CheckOutcome {
                        name: "flow-vs-exact".into(),
                        passed: both,
                        metric: dev.metric,
                        threshold: dev.threshold,
                        detail: format!("{}; order {:.3} ({}), {:.2} s", dev.detail, order.metric, order.detail, start.elapsed().as_secs_f64()),
                        counterexample: if both { None } else { dev.counterexample.or(order.counterexample) },
                    }
                }
                Err(e) => panic!("criterion 6 errored: {e}"),
            }
        }),
        ("7", timed(None, || checks::coefficient_bound(SEED, 10, 10))),
        ("8", timed(Some(Duration::from_secs(120)), || checks::majorant_domination(SEED, 10, 10))),
        ("9", timed(None, || checks::existence_boundary(SEED))),
        ("10", timed(None, || checks::hopf_lax(SEED, 20, 1001))),
        ("11", timed(None, checks::psi4_closed_forms)),
        ("12", timed(None, determinism)),
    ];
    for (id, r) in &results {
        println!("criterion {id:>2}: {}", r.line());
        if let Some(c) = r.counterexample.as_ref().filter(|_| !r.passed) {
            println!("              counterexample: {c}");
        }
    }
    let failed: Vec<&str> = results.iter().filter(|(_, r)| !r.passed).map(|(id, _)| *id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
