//! Volume of `{x > ε}` and its renormalized constant term.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::curvature::{curvature_report, model_corrections, SpectralSettings};
use crate::error::{Error, Result};
use crate::field::factorial;
use crate::geometry::{IdentityCheck, IdentityReport, ModelGeometry};
use crate::linalg::least_squares;
use crate::mp::Precision;
use crate::quad::PanelQuadrature;

/// Volume of `{x > ε}` for the Kähler–Einstein metric: after integrating
/// over spheres,
/// `(2π)^m/(m−1)! ∫_{ε e^{−c}}^1 x^{−m−1} (1−x)^{m−1} dx`.
pub fn volume_of_sublevel(geom: &ModelGeometry, eps: &Float, prec: &Precision) -> Result<Float> {
    let bits = prec.bits();
    let eps = Float::with_val(bits, eps);
    let lo = geom.unscaled_threshold(&eps);
    if eps <= 0 || lo >= 1 {
        return Err(Error::Domain(format!(
            "eps = {} must lie in (0, e^c) for a nonempty sublevel set",
            eps.to_f64()
        )));
    }
    let m = geom.m();
    let one = Float::with_val(bits, 1);
    let tol = Float::with_val(bits, Float::u_pow_u(10, prec.digits + 4)).recip();
    let (integral, _) = PanelQuadrature::new(bits).integrate(&lo, &one, &tol, &|x: &Float| {
        let y = Float::with_val(bits, 1 - x);
        let num = y.pow(m - 1);
        let den = Float::with_val(bits, x.pow(m + 1));
        num / den
    })?;
    let two_pi = Float::with_val(bits, prec.pi() * 2u32);
    let coeff = two_pi.pow(m) / Float::with_val(bits, &factorial(m - 1));
    Ok(integral * coeff)
}

/// Fitted `Σ_j b_j ε^{−(m+1−j)} + L log ε + V`.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeExpansion {
    pub m: u32,
    /// `b_1, …, b_m`, the coefficients of `ε^{−m}, …, ε^{−1}`.
    pub b: Vec<f64>,
    #[serde(rename = "L")]
    pub log_coeff: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub fit_residual: f64,
    pub condition: f64,
    /// Largest relative change of any coefficient when the smallest `ε`
    /// is dropped from the grid.
    pub stability: f64,
    pub eps_grid: Vec<f64>,
}

/// A grid of `ε` values, geometric between two decimal exponents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsGrid {
    pub points: usize,
    pub log10_max: f64,
    pub log10_min: f64,
}

impl Default for EpsGrid {
    fn default() -> Self {
        Self {
            points: 24,
            log10_max: -1.0,
            log10_min: -3.5,
        }
    }
}

impl EpsGrid {
    /// Grid values from the largest to the smallest.
    pub fn values(&self, prec: &Precision) -> Vec<Float> {
        let bits = prec.bits();
        let n = self.points.max(2) - 1;
        (0..self.points)
            .map(|i| {
                let t = self.log10_max + (self.log10_min - self.log10_max) * i as f64 / n as f64;
                // Exact decimal exponent at the working precision.
                let e = Float::with_val(bits, Float::with_val(bits, t) * Float::with_val(bits, 10).ln());
                e.exp()
            })
            .collect()
    }
}

const STABILITY_LIMIT: f64 = 1e-6;

fn validate_grid(m: u32, eps: &[Float]) -> Result<()> {
    let need = 2 * (m as usize + 2);
    if eps.len() < need {
        return Err(Error::Config(format!(
            "eps grid has {} points; at least {need} are needed for m = {m}",
            eps.len()
        )));
    }
    let logs: Vec<f64> = eps.iter().map(|e| e.to_f64().log10()).collect();
    let step = logs[1] - logs[0];
    if step == 0.0 || logs.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs()) {
        return Err(Error::Config("eps grid must be geometric".into()));
    }
    if (logs[0] - logs[logs.len() - 1]).abs() < 2.0 {
        return Err(Error::Config("eps grid must span at least two decades".into()));
    }
    Ok(())
}

fn fit(m: u32, eps: &[Float], vols: &[Float]) -> Result<(Vec<Float>, f64, f64)> {
    let rows: Vec<Vec<Float>> = eps
        .iter()
        .map(|e| {
            let bits = e.prec();
            let mut row: Vec<Float> = (1..=m)
                .map(|j| Float::with_val(bits, e.pow(-((m + 1 - j) as i32))))
                .collect();
            row.push(Float::with_val(bits, e.ln_ref()));
            row.push(Float::with_val(bits, 1));
            row
        })
        .collect();
    let ls = least_squares(&rows, vols)?;
    let scale = vols.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    Ok((ls.x, ls.residual.to_f64() / scale, ls.condition))
}

/// Least-squares fit of the volume expansion over `eps`.
pub fn fit_expansion(geom: &ModelGeometry, eps: &[Float], prec: &Precision) -> Result<VolumeExpansion> {
    let m = geom.m();
    validate_grid(m, eps)?;
    let vols = eps
        .par_iter()
        .map(|e| volume_of_sublevel(geom, e, prec))
        .collect::<Result<Vec<_>>>()?;
    let (x, fit_residual, condition) = fit(m, eps, &vols)?;
    if condition > 10f64.powi(prec.digits as i32 / 2) {
        return Err(Error::Precision(format!(
            "volume fit condition {condition:.2e}; widen the eps grid or raise digits"
        )));
    }
    let smallest = eps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite grid"))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    let keep = |v: &[Float]| -> Vec<Float> {
        v.iter()
            .enumerate()
            .filter(|(i, _)| *i != smallest)
            .map(|(_, x)| x.clone())
            .collect()
    };
    let (x2, _, _) = fit(m, &keep(eps), &keep(&vols))?;
    let v = x[m as usize + 1].to_f64();
    let stability = x
        .iter()
        .zip(&x2)
        .map(|(a, b)| (a.to_f64() - b.to_f64()).abs() / a.to_f64().abs().max(v.abs()))
        .fold(0.0, f64::max);
    if stability > STABILITY_LIMIT {
        return Err(Error::Convergence {
            what: "volume expansion under dropping the smallest eps".into(),
            estimate: stability,
            threshold: STABILITY_LIMIT,
        });
    }
    Ok(VolumeExpansion {
        m,
        b: x[..m as usize].iter().map(Float::to_f64).collect(),
        log_coeff: x[m as usize].to_f64(),
        v,
        fit_residual,
        condition,
        stability,
        eps_grid: eps.iter().map(Float::to_f64).collect(),
    })
}

/// Both sides of `V = (1/n!) c_m ∫Q′ − (1/n!) ∫A|_M`.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeIdentity {
    #[serde(rename = "V")]
    pub v: f64,
    pub rhs: f64,
    pub total_qprime: f64,
    pub a_integral: f64,
    pub pi_integral: f64,
    pub relative_deviation: f64,
}

/// Compares the fitted renormalized volume with the scattering route.
pub fn renormalized_volume_identity(
    geom: &ModelGeometry,
    settings: &SpectralSettings,
    grid: &EpsGrid,
) -> Result<VolumeIdentity> {
    let prec = &settings.numeric.precision;
    let expansion = fit_expansion(geom, &grid.values(prec), prec)?;
    let report = curvature_report(geom, 0, settings)?;
    let corrections = model_corrections(geom, settings)?;
    let area = geom.boundary_volume(prec).to_f64();
    let a_integral = corrections.a_boundary * area;
    let nfact = factorial(geom.n()).to_f64();
    let cm = geom.c_m().to_f64();
    let rhs = (cm * report.total_qprime - a_integral) / nfact;
    Ok(VolumeIdentity {
        v: expansion.v,
        rhs,
        total_qprime: report.total_qprime,
        a_integral,
        pi_integral: geom.pi_form_trace().to_f64() * area,
        relative_deviation: (expansion.v - rhs).abs() / expansion.v.abs(),
    })
}

/// `|V − RHS| ≤ tolerance·|V|`, with `∫A|_M` and `∫Π^m` reported.
pub fn check_renormalized_volume_identity(
    geom: &ModelGeometry,
    settings: &SpectralSettings,
    grid: &EpsGrid,
    tolerance: f64,
) -> Result<IdentityReport> {
    let id = renormalized_volume_identity(geom, settings, grid)?;
    Ok(IdentityReport {
        checks: vec![
            IdentityCheck::new("renormalized volume", id.relative_deviation, tolerance),
            IdentityCheck::new("integral of A", id.a_integral.abs(), 1e-8),
            IdentityCheck::new("integral of Pi^m", id.pi_integral.abs(), 0.0),
        ],
    })
}
