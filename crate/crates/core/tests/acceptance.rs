//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use reflekt::suites::{run_suite, SuiteConfig, SUITES};

/// `(suite, minimum instance count, time limit in seconds)` per criterion.
const CRITERIA: [(&str, usize, u64); 11] = [
    ("amalgam-confluence", 1000, 60),
    ("amalgam-soundness", 1000, 60),
    ("gluing-lemma", 500, 60),
    ("adjunction", 200, 120),
    ("extension-by-zero", 1, 30),
    ("epi-shadow", 100, 180),
    ("slice-classes", 100, 60),
    ("roundtrip", 220, 300),
    ("bgp", 203, 10),
    ("clock", 5, 60),
    ("r-table", 1, 5),
];

fn main() -> ExitCode {
    assert_eq!(CRITERIA.map(|c| c.0), SUITES);
    let mut failed = 0;
    for (i, (suite, min, limit)) in CRITERIA.into_iter().enumerate() {
        let start = Instant::now();
        let result = run_suite(suite, &SuiteConfig::default());
        let took = start.elapsed();
        let within = took < Duration::from_secs(limit);
        let (ok, detail) = match &result {
            Ok(o) if !o.ok() => (false, format!("{} of {} instances failed", o.instances - o.passed, o.instances)),
            Ok(o) if o.instances < min => (false, format!("only {} instances, need {min}", o.instances)),
            Ok(o) => (true, format!("{} instances, {} checks", o.instances, o.checks)),
            Err(e) => (false, e.to_string()),
        };
        let pass = ok && within;
        failed += usize::from(!pass);
        println!(
            "criterion {}: {} {suite} ({detail}; {:.1}s {} {limit}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            if within { "<" } else { ">=" },
        );
        if let Ok(o) = &result {
            if let Some(c) = &o.counterexample {
                println!("  counterexample: {c}");
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
