//! Prints one pass/fail line per acceptance criterion and exits nonzero if any fails.

use std::process::ExitCode;

use elastica_core::verify::{verify, VerifyOptions};

fn main() -> ExitCode {
    let report = verify(&VerifyOptions::default());
    println!("{report}");
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
