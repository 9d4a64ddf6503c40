pub mod checks;
pub mod config;
pub mod curvature;
pub mod error;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod mp;
pub mod quad;
pub mod report;
pub mod scattering;
pub mod series;
pub mod volume;

pub use error::{Error, Result};
