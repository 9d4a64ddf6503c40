//! The volume expansion of `{x > ε}` and the comparison of its constant
//! term with the scattering Q′.
//!
//! ```bash
//! cargo run --release --example renormalized_volume
//! ```

use crscatter::curvature::SpectralSettings;
use crscatter::geometry::ModelGeometry;
use crscatter::volume::{fit_expansion, renormalized_volume_identity, EpsGrid};
use crscatter::Result;

pub fn run_example() -> Result<()> {
    let settings = SpectralSettings::with_digits(40);
    let prec = settings.numeric.precision;
    for m in [2, 3] {
        let geom = ModelGeometry::new(m)?;
        let e = fit_expansion(&geom, &EpsGrid::default().values(&prec), &prec)?;
        println!("m = {m}: b = {:?}, L = {:.2e}, V = {:.15}", e.b, e.log_coeff, e.v);
        let id = renormalized_volume_identity(&geom, &settings, &EpsGrid::default())?;
        println!(
            "       scattering route {:.15}, relative deviation {:.1e}",
            id.rhs, id.relative_deviation
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
