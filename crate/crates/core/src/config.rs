//! Run configuration shared by the command line and the check suite.

use std::path::PathBuf;

use rug::Rational;
use serde::Serialize;

use crate::curvature::SpectralSettings;
use crate::error::{Error, Result};
use crate::geometry::ModelGeometry;
use crate::mp::Precision;
use crate::scattering::{ContourOptions, NumericOptions};
use crate::series::DEFAULT_TRUNC;
use crate::volume::EpsGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub m: u32,
    pub conf_const: Rational,
    pub max_pq: u32,
    pub digits: u32,
    /// Truncation of the exact formal series, in doubled grades.
    pub trunc_order: u32,
    pub contour_radius: Rational,
    pub contour_points: usize,
    pub eps_grid: EpsGrid,
    /// Matching point in the unscaled `x`.
    pub t_match: Rational,
    /// Replaces the tolerance of every numeric check when set.
    pub numeric_tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 2,
            conf_const: Rational::new(),
            max_pq: 3,
            digits: Precision::from_env().digits,
            trunc_order: DEFAULT_TRUNC,
            contour_radius: Rational::from((1, 10)),
            contour_points: 32,
            eps_grid: EpsGrid::default(),
            t_match: Rational::from((1, 2)),
            numeric_tol: None,
            output: None,
            format: OutputFormat::Json,
        }
    }
}

pub const MIN_DIGITS: u32 = 30;
pub const MAX_PQ: u32 = 6;

impl RunConfig {
    /// Rejects configurations outside the supported envelope.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.m < 2 {
            return bad(format!("m = {} but m = n + 1 >= 2 is required", self.m));
        }
        if self.digits < MIN_DIGITS {
            return bad(format!("digits = {} is below the minimum {MIN_DIGITS}", self.digits));
        }
        if self.max_pq > MAX_PQ {
            return bad(format!("max-pq = {} exceeds {MAX_PQ}", self.max_pq));
        }
        let r = self.contour_radius.to_f64();
        if !(r > 0.0 && r < 0.25) {
            return bad(format!("contour-radius = {r} must lie in (0, 0.25)"));
        }
        if self.contour_points < 16 {
            return bad(format!("contour-points = {} must be at least 16", self.contour_points));
        }
        if self.t_match <= 0 || self.t_match >= 1 {
            return bad(format!("t-match = {} must lie in (0, 1)", self.t_match));
        }
        if self.trunc_order < 2 * self.m + 4 {
            return bad(format!(
                "trunc-order = {} must be at least 2m + 4 = {}",
                self.trunc_order,
                2 * self.m + 4
            ));
        }
        let g = &self.eps_grid;
        let need = 2 * (self.m as usize + 2);
        if g.points < need {
            return bad(format!("eps grid needs at least {need} points, got {}", g.points));
        }
        if g.log10_max - g.log10_min < 2.0 {
            return bad("eps grid must span at least two decades".into());
        }
        let top = 10f64.powf(g.log10_max);
        if top >= self.conf_const.to_f64().exp() {
            return bad(format!("largest eps {top} must be below e^c"));
        }
        if let Some(t) = self.numeric_tol {
            if !(t > 0.0) {
                return bad(format!("numeric-tol = {t} must be positive"));
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<ModelGeometry> {
        ModelGeometry::with_conf_const(self.m, self.conf_const.clone())
    }

    pub fn precision(&self) -> Precision {
        Precision::new(self.digits)
    }

    pub fn settings(&self) -> SpectralSettings {
        SpectralSettings {
            numeric: NumericOptions {
                precision: self.precision(),
                t_match: self.t_match.clone(),
                ..NumericOptions::default()
            },
            contour: ContourOptions {
                radius: self.contour_radius.clone(),
                npoints: self.contour_points,
                ..ContourOptions::default()
            },
        }
    }

    /// `tol` unless a numeric override is configured.
    pub fn numeric(&self, tol: f64) -> f64 {
        self.numeric_tol.unwrap_or(tol)
    }
}
