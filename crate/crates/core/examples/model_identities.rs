//! The geometric identities of the ball that everything else relies on.
//!
//! ```bash
//! cargo run --example model_identities
//! ```

use crscatter::geometry::{rescale, verify_model_identities, ModelGeometry};
use crscatter::mp::Precision;
use crscatter::Result;
use rug::Rational;

pub fn run_example() -> Result<()> {
    let prec = Precision::new(40);
    for geom in [ModelGeometry::new(2)?, rescale(&ModelGeometry::new(3)?, &Rational::from((3, 10)))] {
        println!("m = {}, c = {}", geom.m(), geom.conf_const());
        let report = verify_model_identities(&geom, &prec)?;
        for c in &report.checks {
            println!("  {:<32} {:.2e}", c.name, c.deviation);
        }
        report.into_result()?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
