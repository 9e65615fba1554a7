//! Runs every acceptance check and prints one pass/fail line per check.

use std::process::ExitCode;

use clonekit::acceptance::{run_all, CRITERIA};
use clonekit::Limits;

fn main() -> ExitCode {
    let outcomes = run_all(&Limits::default());
    assert_eq!(outcomes.len(), CRITERIA.len());
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
