//! Laurent coefficients at `s = m` from discrete Cauchy integrals.

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float, Rational};

use super::numeric::{scattering_eigenvalue, NumericOptions, ScatteringSample};
use crate::error::{Error, Result};
use crate::geometry::{ModeSpec, ModelGeometry};
use crate::mp::abs;

/// Contour settings.
#[derive(Clone, Debug)]
pub struct ContourOptions {
    pub radius: Rational,
    pub npoints: usize,
    /// Largest accepted disagreement between radius `r` and `r/2`.
    pub threshold: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            radius: Rational::from((1, 10)),
            npoints: 32,
            threshold: 1e-15,
        }
    }
}

/// Coefficients of `(s−m)^{-1}`, `(s−m)^0` and `(s−m)^1`.
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub res: Float,
    pub constant: Float,
    pub deriv: Float,
    pub contour_radius: f64,
    /// Largest change under radius halving, including imaginary parts.
    pub est_error: f64,
}

/// The three central coefficients on one circle, as complex numbers.
#[derive(Clone, Debug)]
pub struct CircleCoefficients {
    pub res: Complex,
    pub constant: Complex,
    pub deriv: Complex,
}

/// Trapezoid rule for `(1/2πi) ∮ f(s) (s−c)^{−k−1} ds`, `k = −1, 0, 1`, on
/// `|s − c| = r`. Samples run in parallel; the reduction is sequential so
/// results do not depend on scheduling.
pub fn circle_coefficients<F>(center: &Rational, radius: &Float, npoints: usize, f: F) -> Result<CircleCoefficients>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    if npoints < 16 {
        return Err(Error::Config(format!("contour needs at least 16 points, got {npoints}")));
    }
    let prec = radius.prec();
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let nodes: Vec<Complex> = (0..npoints)
        .map(|j| {
            let phi = Float::with_val(prec, &two_pi * j as u32) / npoints as u32;
            Complex::with_val(prec, (phi.clone().cos(), phi.sin()))
        })
        .collect();
    let values: Vec<Complex> = nodes
        .par_iter()
        .map(|w| {
            let s = Complex::with_val(prec, w * radius) + center;
            f(&s)
        })
        .collect::<Result<_>>()?;
    let mut res = Complex::new(prec);
    let mut constant = Complex::new(prec);
    let mut deriv = Complex::new(prec);
    for (w, v) in nodes.iter().zip(&values) {
        // (s − c)^{−k} = r^{−k} w^{−k}, w^{−1} = conj(w) on the unit circle.
        let wc = Complex::with_val(prec, w.conj_ref());
        res += Complex::with_val(prec, v * w);
        constant += v;
        deriv += Complex::with_val(prec, v * &wc);
    }
    let n = npoints as u32;
    Ok(CircleCoefficients {
        res: Complex::with_val(prec, res * radius) / n,
        constant: constant / n,
        deriv: Complex::with_val(prec, deriv / radius) / n,
    })
}

/// Laurent coefficients of `f` at `center`, confirmed on the half radius.
pub fn laurent_of<F>(center: &Rational, contour: &ContourOptions, prec: u32, f: F) -> Result<LaurentData>
where
    F: Fn(&Complex) -> Result<Complex> + Sync,
{
    let r = Float::with_val(prec, &contour.radius);
    let half = Float::with_val(prec, &r / 2u32);
    let a = circle_coefficients(center, &r, contour.npoints, &f)?;
    let b = circle_coefficients(center, &half, contour.npoints, &f)?;
    let diff = |x: &Complex, y: &Complex| abs(&Complex::with_val(prec, x - y)).to_f64();
    let imag = |x: &Complex| x.imag().to_f64().abs();
    let est_error = [
        diff(&a.res, &b.res),
        diff(&a.constant, &b.constant),
        diff(&a.deriv, &b.deriv),
        imag(&a.res),
        imag(&a.constant),
        imag(&a.deriv),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if est_error > contour.threshold {
        return Err(Error::Convergence {
            what: format!("Laurent coefficients at s = {center}"),
            estimate: est_error,
            threshold: contour.threshold,
        });
    }
    Ok(LaurentData {
        res: a.res.real().clone(),
        constant: a.constant.real().clone(),
        deriv: a.deriv.real().clone(),
        contour_radius: r.to_f64(),
        est_error,
    })
}

/// Laurent data of the scattering eigenvalue of `mode` at `s = m`.
pub fn laurent_at_m(
    geom: &ModelGeometry,
    mode: ModeSpec,
    contour: &ContourOptions,
    opts: &NumericOptions,
) -> Result<LaurentData> {
    let r = contour.radius.to_f64();
    if !(r > 0.0 && r < 0.25) {
        return Err(Error::Config(format!(
            "contour radius {r} must lie in (0, 0.25) to avoid the neighboring poles"
        )));
    }
    let center = Rational::from(geom.m());
    laurent_of(&center, contour, opts.precision.bits(), |s| {
        Ok(scattering_eigenvalue(geom, mode, s, opts)?.lambda)
    })
}

/// The eigenvalue samples on the contour `|s − m| = r`, in angular order.
pub fn contour_samples(
    geom: &ModelGeometry,
    mode: ModeSpec,
    contour: &ContourOptions,
    opts: &NumericOptions,
) -> Result<Vec<ScatteringSample>> {
    let bits = opts.precision.bits();
    let r = Float::with_val(bits, &contour.radius);
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let n = contour.npoints;
    (0..n)
        .into_par_iter()
        .map(|j| {
            let phi = Float::with_val(bits, &two_pi * j as u32) / n as u32;
            let w = Complex::with_val(bits, (phi.clone().cos(), phi.sin()));
            let s = Complex::with_val(bits, &w * &r) + geom.m();
            scattering_eigenvalue(geom, mode, &s, opts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::c_m;
    use crate::scattering::exact::gjms_eigenvalue_exact;

    #[test]
    fn contour_residue_matches_exact_route() {
        let geom = ModelGeometry::new(2).unwrap();
        let opts = NumericOptions::with_digits(40);
        let mode = ModeSpec::new(1, 1, 1);
        let data = laurent_at_m(&geom, mode, &ContourOptions::default(), &opts).unwrap();
        let cm = c_m(2).to_f64();
        let p = -data.res.to_f64() / cm;
        let exact = gjms_eigenvalue_exact(mode, 2).unwrap().to_f64();
        assert!((p - exact).abs() < 1e-8, "{p} vs {exact}");
        assert!(data.est_error < 1e-15);
    }

    #[test]
    fn constant_mode_q_prime() {
        let geom = ModelGeometry::new(2).unwrap();
        let opts = NumericOptions::with_digits(40);
        let data = laurent_at_m(&geom, ModeSpec::new(0, 0, 1), &ContourOptions::default(), &opts).unwrap();
        assert!(data.res.to_f64().abs() < 1e-10);
        assert!(data.constant.to_f64().abs() < 1e-10);
        let qprime = -2.0 * data.deriv.to_f64() / c_m(2).to_f64();
        assert!((qprime - 2.0).abs() < 1e-10, "{qprime}");
    }
}
