//! Behavior of the scattering data under the constant rescale `θ̂ = e^c θ`.
//!
//! ```bash
//! cargo run --release --example transformation_laws
//! ```

use crscatter::curvature::{check_transformation_laws, SpectralSettings};
use crscatter::geometry::ModelGeometry;
use crscatter::Result;
use rug::Rational;

pub fn run_example() -> Result<()> {
    let geom = ModelGeometry::new(2)?;
    let report = check_transformation_laws(
        &geom,
        &Rational::from((3, 10)),
        1,
        &SpectralSettings::with_digits(40),
        1e-8,
        1e-6,
    )?;
    for c in &report.checks {
        println!("{:<24} deviation {:.2e}  {}", c.name, c.deviation, if c.passed { "ok" } else { "FAILED" });
    }
    report.into_result().map(|_| ())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
