//! Improving a perturbed defining function `x′ = x(1 + x)` so that
//! `Δ log x̃ = m` to the order the equation determines.
//!
//! ```bash
//! cargo run --example defining_function
//! ```

use crscatter::geometry::{improve_defining_function, log_laplacian_defect, ModelGeometry};
use crscatter::series::LogSeries;
use crscatter::Result;
use rug::Rational;

pub fn run_example() -> Result<()> {
    let geom = ModelGeometry::new(2)?;
    let one = Rational::from(1);
    let before = LogSeries::from_powers(&[one.clone(), one.clone()], 10);
    let improved = improve_defining_function(&geom, &before)?;
    println!("x~/x terms (doubled grade, log power, coefficient):");
    for (j2, k, c) in improved.terms() {
        println!("  {j2:>2} {k} {c}");
    }
    let defect = log_laplacian_defect(&geom, &improved)?;
    println!("Δ log x~ − m starts at doubled grade {:?}", defect.lowest_grade());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
