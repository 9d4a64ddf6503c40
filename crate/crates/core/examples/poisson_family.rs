//! The Poisson coefficients `p_{j,s}` as exact rational functions of `s`,
//! their poles, and the residue identity at `s = m`.
//!
//! ```bash
//! cargo run --example poisson_family
//! ```

use crscatter::geometry::ModeSpec;
use crscatter::scattering::{poisson_family, residue_identity};
use crscatter::Result;

pub fn run_example() -> Result<()> {
    let (m, mode) = (2, ModeSpec::new(1, 1, 1));
    for (j, p) in poisson_family(m, mode, 6)?.iter().enumerate() {
        println!("p_{j},s = {p}    poles {:?}", p.pole_set());
    }
    for row in residue_identity(m, ModeSpec::new(1, 2, 1), 4)? {
        println!("j = {}: Res p_(2m+j) = {}  p_j(0) Res p_2m = {}  holds: {}", row.j2, row.lhs, row.rhs, row.holds);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
