//! One line per acceptance criterion at full scale; exits nonzero on any failure.

use std::process::ExitCode;

use umm_core::validation::{run_criterion, tolerance, Scale, CRITERIA, DEFAULT_SEED};

fn pinned_tolerances() -> bool {
    tolerance::SIGMAS == 3.0
        && tolerance::ORACLE_SECONDS == 60.0
        && tolerance::HCIZ_SECONDS == 600.0
        && tolerance::FREE_ENERGY_FLOOR == 5e-3
        && tolerance::SAMPLES == 10_000
}

fn main() -> ExitCode {
    if !pinned_tolerances() {
        println!("acceptance tolerances differ from the pinned values");
        return ExitCode::FAILURE;
    }
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let outcome = run_criterion(id, Scale::Full, DEFAULT_SEED);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        ExitCode::FAILURE
    }
}
