//! Graded logarithmic series and the order-by-order indicial recursion.

pub mod graded;
pub mod log_series;
pub mod meromorphic;
pub mod poly;
pub mod solve;

pub use graded::{apply_graded, indicial_factor, GradedOperator, Rule};
pub use log_series::{Exponent, LogSeries, DEFAULT_TRUNC, MAX_LOG_DEPTH};
pub use meromorphic::{LaurentExpansion, MeromorphicScalar};
pub use poly::Poly;
pub use solve::{
    frobenius, solve_grades, solve_order_by_order, solve_with_source, FormalSolution, LogPolicy,
    SourceSolution, EXCLUSION_RADIUS,
};
