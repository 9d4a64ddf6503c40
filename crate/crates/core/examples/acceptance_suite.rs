//! Running selected acceptance criteria from library code.
//!
//! ```bash
//! cargo run --release --example acceptance_suite
//! ```

use crscatter::checks::run_check;
use crscatter::config::RunConfig;
use crscatter::Result;

pub fn run_example() -> Result<()> {
    let cfg = RunConfig {
        digits: 40,
        ..RunConfig::default()
    };
    cfg.validate()?;
    for id in [1, 2, 9] {
        let outcome = run_check(id, &cfg).expect("known criterion");
        println!("{}", outcome.line());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
