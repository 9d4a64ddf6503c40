//! The graded indicial engine: indicial factors, the action of the model
//! operator on `x^{m−s+j/2}(log x)^k`, and exact resonance detection.
//!
//! ```bash
//! cargo run --example indicial_engine
//! ```

use crscatter::geometry::{radial_ode, ModeSpec, ModelGeometry};
use crscatter::series::{indicial_factor, solve_order_by_order, Exponent, LogSeries, MeromorphicScalar};
use crscatter::{Error, Result};
use rug::Rational;

pub fn run_example() -> Result<()> {
    let m = 2;
    let s = MeromorphicScalar::s();
    for j in 0..=4 {
        println!("indicial factor, j = {j}: {}", indicial_factor(m, &s, j));
    }

    let geom = ModelGeometry::new(m)?;
    let op = radial_ode(&geom, ModeSpec::new(0, 0, 1)).to_graded(&s)?;
    for k in 0..=2 {
        let mut u = LogSeries::new(Exponent::m_minus_s(m), 4);
        u.set(0, k, MeromorphicScalar::constant(Rational::from(1)));
        let image = op.apply(&u)?;
        let leading: Vec<String> = (0..=k)
            .map(|kk| format!("log^{kk}: {}", image.coeff_or(0, kk, &MeromorphicScalar::constant(Rational::new()))))
            .collect();
        println!("(Δ − s(m−s)) x^(m−s) log^{k} x, grade 0 -> {}", leading.join(", "));
    }

    // At s = 5/2 the factor vanishes at j = 2(2s − m) = 6: a resonance.
    let op = radial_ode(&geom, ModeSpec::new(1, 1, 1)).to_graded(&Rational::from((5, 2)))?;
    match solve_order_by_order(&op, &Rational::from(1), 10) {
        Err(Error::Resonance { k, s }) => println!("resonance detected exactly: k = {k} at s = {s}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
