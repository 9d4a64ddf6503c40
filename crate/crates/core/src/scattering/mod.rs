//! Scattering on the ball: the eigenvalue `λ(s)` of the scattering operator
//! per mode, its Laurent data at `s = m`, and the exact formal residue route.

pub mod exact;
pub mod laurent;
pub mod numeric;

pub use exact::{gjms_eigenvalue_exact, gjms_eigenvalue_log_route, poisson_family, residue_identity, ResidueRow};
pub use laurent::{circle_coefficients, contour_samples, laurent_at_m, laurent_of, ContourOptions, LaurentData};
pub use numeric::{
    check_exclusion, dirichlet_coefficient, interior_solution, scattering_eigenvalue, InteriorSolution,
    NumericOptions, SampleRow, ScatteringSample,
};
