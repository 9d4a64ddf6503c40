//! The critical GJMS eigenvalues on `H_{p,q}` from the exact formal routes.
//!
//! ```bash
//! cargo run --example gjms_spectrum
//! ```

use crscatter::geometry::ModeSpec;
use crscatter::scattering::{gjms_eigenvalue_exact, gjms_eigenvalue_log_route};
use crscatter::Result;

pub fn run_example() -> Result<()> {
    for m in [2, 3] {
        println!("m = {m}");
        for mode in ModeSpec::grid(3, m - 1) {
            let residue = gjms_eigenvalue_exact(mode, m)?;
            let log = gjms_eigenvalue_log_route(mode, m)?;
            println!("  ({}, {}): P = {residue:>8}   log route {log}", mode.p, mode.q);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
