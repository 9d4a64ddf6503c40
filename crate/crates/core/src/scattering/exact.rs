//! Exact formal route: the Poisson family `p_{j,s}` as rational functions
//! of `s` and the GJMS eigenvalue from its residue at `s = m`.

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::c_m;
use crate::geometry::{radial_ode, ModeSpec, ModelGeometry};
use crate::series::{solve_order_by_order, MeromorphicScalar};

/// `p_{j,s}` for doubled grades `j = 0..=order` on one mode, with
/// `p_{0,s} = 1`.
pub fn poisson_family(m: u32, mode: ModeSpec, order: u32) -> Result<Vec<MeromorphicScalar>> {
    let geom = ModelGeometry::new(m)?;
    let s = MeromorphicScalar::s();
    let one = MeromorphicScalar::constant(Rational::from(1));
    let op = radial_ode(&geom, mode).to_graded(&s)?;
    let sol = solve_order_by_order(&op, &one, order)?;
    let zero = MeromorphicScalar::constant(Rational::new());
    Ok((0..=order).map(|j| sol.f.coeff_or(j, 0, &zero)).collect())
}

/// One row of the residue identity `Res_{s=m} p_{2m+j,s} = p_{j,0} Res_{s=m} p_{2m,s}`.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueRow {
    pub j2: u32,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Both sides of the residue identity for `j2 = 0..=jmax`.
pub fn residue_identity(m: u32, mode: ModeSpec, jmax: u32) -> Result<Vec<ResidueRow>> {
    let family = poisson_family(m, mode, 2 * m + jmax)?;
    let at = Rational::from(m);
    let base = family[(2 * m) as usize].residue(&at);
    (0..=jmax)
        .map(|j| {
            let lhs = family[(2 * m + j) as usize].residue(&at);
            let pj0 = family[j as usize].eval(&Rational::new())?;
            let rhs = pj0 * &base;
            Ok(ResidueRow {
                j2: j,
                holds: lhs == rhs,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            })
        })
        .collect()
}

/// The GJMS eigenvalue on `H_{p,q}`: `−c_m^{−1}` times the boundary value of
/// `𝒢_m = −Res_{s=m} p_{2m,s}`.
pub fn gjms_eigenvalue_exact(mode: ModeSpec, m: u32) -> Result<Rational> {
    let family = poisson_family(m, mode, 2 * m)?;
    let g = -family[(2 * m) as usize].residue(&Rational::from(m));
    Ok(-g / c_m(m))
}

/// The same eigenvalue from the logarithmic coefficient of the resonant
/// solution at `s = m`: `G|₀ = −2 c_m P`.
pub fn gjms_eigenvalue_log_route(mode: ModeSpec, m: u32) -> Result<Rational> {
    let geom = ModelGeometry::new(m)?;
    let s = Rational::from(m);
    let op = radial_ode(&geom, mode).to_graded(&s)?;
    let sol = solve_order_by_order(&op, &Rational::from(1), 2 * m + 2)?;
    let g0 = sol.g.coeff_or(0, 0, &Rational::new());
    let denom = Rational::from(-2) * c_m(m);
    if denom == 0 {
        return Err(Error::DivisionByZero("c_m"));
    }
    Ok(g0 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_first_nontrivial_mode() {
        assert_eq!(gjms_eigenvalue_exact(ModeSpec::new(0, 0, 1), 2).unwrap(), 0);
        for p in 1..=3 {
            assert_eq!(gjms_eigenvalue_exact(ModeSpec::new(p, 0, 1), 2).unwrap(), 0);
        }
        assert_eq!(gjms_eigenvalue_exact(ModeSpec::new(1, 1, 1), 2).unwrap(), 4);
        assert_eq!(gjms_eigenvalue_log_route(ModeSpec::new(1, 1, 1), 2).unwrap(), 4);
    }

    #[test]
    fn residue_identity_on_a_mode() {
        for row in residue_identity(2, ModeSpec::new(1, 2, 1), 4).unwrap() {
            assert!(row.holds, "{row:?}");
        }
    }
}
