//! Q, Q′ and the P, P′ spectra of the standard contact form.
//!
//! ```bash
//! cargo run --release --example curvature
//! ```

use crscatter::curvature::{curvature_report, SpectralSettings};
use crscatter::geometry::ModelGeometry;
use crscatter::Result;

pub fn run_example() -> Result<()> {
    let geom = ModelGeometry::new(2)?;
    let report = curvature_report(&geom, 2, &SpectralSettings::with_digits(40))?;
    println!("Q = {:.3e}, Q' = {:.15}, total Q' = {:.15}", report.q, report.qprime, report.total_qprime);
    for ((p, c), pp) in report.p_spec.iter().zip(&report.p_spec_contour).zip(&report.pprime_spec) {
        println!(
            "({}, {}): P exact {:>6}  P contour {:+.12}  P' {:+.12}",
            p.p, p.q, p.val, c.val, pp.val
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
