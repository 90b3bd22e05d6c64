//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use ramification::verify::{run_suite, summary, SuiteConfig};

fn main() -> ExitCode {
    let start = Instant::now();
    let outcomes = run_suite(&SuiteConfig::default());
    let (passed, report) = summary(&outcomes);
    println!("{report}");
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        outcomes.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
