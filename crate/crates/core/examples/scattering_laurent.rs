//! The scattering eigenvalue `λ(s)` from the global matching solve and its
//! Laurent data at `s = m` from contour integrals.
//!
//! ```bash
//! CRSCATTER_DIGITS=40 cargo run --release --example scattering_laurent
//! ```

use crscatter::field::c_m;
use crscatter::geometry::{ModeSpec, ModelGeometry};
use crscatter::scattering::{laurent_at_m, scattering_eigenvalue, ContourOptions, NumericOptions};
use crscatter::Result;
use rug::Complex;

pub fn run_example() -> Result<()> {
    let geom = ModelGeometry::new(2)?;
    let opts = NumericOptions::with_digits(40);
    let mode = ModeSpec::new(1, 1, 1);
    let s = Complex::with_val(opts.precision.bits(), (2.3, 0.2));
    let sample = scattering_eigenvalue(&geom, mode, &s, &opts)?;
    println!(
        "λ(2.3 + 0.2i) = {:.15} (matching residual {:.1e}, condition {:.1e})",
        sample.lambda, sample.match_residual, sample.condition
    );

    let cm = c_m(2).to_f64();
    for mode in [ModeSpec::new(0, 0, 1), ModeSpec::new(1, 0, 1), ModeSpec::new(1, 1, 1)] {
        let d = laurent_at_m(&geom, mode, &ContourOptions::default(), &opts)?;
        println!(
            "({}, {}): res {:+.12e}  const {:+.12e}  deriv {:+.12e}  P = {:.12}  error {:.1e}",
            mode.p,
            mode.q,
            d.res.to_f64(),
            d.constant.to_f64(),
            d.deriv.to_f64(),
            -d.res.to_f64() / cm,
            d.est_error
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
