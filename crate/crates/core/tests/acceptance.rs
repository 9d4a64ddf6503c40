//! Runs every acceptance criterion on the default configuration and prints
//! one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use crscatter::checks::{run_check, CRITERIA};
use crscatter::config::RunConfig;

/// Wall-clock budgets for the criteria that carry one.
fn budget(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(30)),
        5 => Some(Duration::from_secs(600)),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    if let Err(e) = cfg.validate() {
        eprintln!("invalid default configuration: {e}");
        return ExitCode::FAILURE;
    }
    let mut failures = 0;
    for (id, name) in CRITERIA {
        let start = Instant::now();
        let Some(outcome) = run_check(id, &cfg) else {
            println!("FAIL [{id}] {name}: not implemented");
            failures += 1;
            continue;
        };
        let elapsed = start.elapsed();
        let over = budget(id).filter(|b| elapsed > *b);
        if outcome.passed && over.is_none() {
            println!("{} [{:.2?}]", outcome.line(), elapsed);
        } else {
            failures += 1;
            match over {
                Some(b) => println!("FAIL [{id}] {name}: took {elapsed:.2?}, budget {b:.0?}"),
                None => println!("{} [{:.2?}]", outcome.line(), elapsed),
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
