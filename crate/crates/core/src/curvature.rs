//! Q, Q′, the P and P′ spectra, and their behavior under a constant
//! rescaling of the contact form.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::error::Result;
use crate::field::c_m;
use crate::geometry::{rescale, IdentityCheck, IdentityReport, ModeSpec, ModelGeometry};
use crate::scattering::{
    dirichlet_coefficient, gjms_eigenvalue_exact, laurent_at_m, laurent_of, scattering_eigenvalue, ContourOptions,
    LaurentData, NumericOptions,
};

/// Everything a spectral computation needs besides the geometry.
#[derive(Clone, Debug, Default)]
pub struct SpectralSettings {
    pub numeric: NumericOptions,
    pub contour: ContourOptions,
}

impl SpectralSettings {
    pub fn with_digits(digits: u32) -> Self {
        Self {
            numeric: NumericOptions::with_digits(digits),
            contour: ContourOptions::default(),
        }
    }
}

/// Laurent data of the scattering eigenvalue at `s = m` on one mode.
#[derive(Clone, Debug)]
pub struct ModeLaurent {
    pub mode: ModeSpec,
    pub data: LaurentData,
}

impl ModeLaurent {
    /// `P = −c_m⁻¹ res`.
    pub fn gjms(&self, m: u32) -> f64 {
        -self.data.res.to_f64() / c_m(m).to_f64()
    }

    /// `P′ = c_m⁻¹ const`.
    pub fn pprime(&self, m: u32) -> f64 {
        self.data.constant.to_f64() / c_m(m).to_f64()
    }
}

/// Laurent data on every mode `p, q ≤ max_pq`, computed in parallel and
/// returned in mode order.
pub fn mode_table(geom: &ModelGeometry, max_pq: u32, settings: &SpectralSettings) -> Result<Vec<ModeLaurent>> {
    ModeSpec::grid(max_pq, geom.n())
        .into_par_iter()
        .map(|mode| {
            let data = laurent_at_m(geom, mode, &settings.contour, &settings.numeric)?;
            Ok(ModeLaurent { mode, data })
        })
        .collect()
}

/// `(Q, Q′)` from the constant mode: `Q = c_m⁻¹ const`, `Q′ = −2 c_m⁻¹ deriv`.
pub fn q_and_qprime(geom: &ModelGeometry, settings: &SpectralSettings) -> Result<(f64, f64)> {
    let data = laurent_at_m(geom, ModeSpec::new(0, 0, geom.n()), &settings.contour, &settings.numeric)?;
    Ok(q_pair(geom.m(), &data))
}

fn q_pair(m: u32, data: &LaurentData) -> (f64, f64) {
    let cm = c_m(m).to_f64();
    (data.constant.to_f64() / cm, -2.0 * data.deriv.to_f64() / cm)
}

/// One spectral value.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ModeValue {
    pub p: u32,
    pub q: u32,
    pub val: f64,
}

/// P′ eigenvalue on every mode `p, q ≤ max_pq`.
pub fn pprime_spectrum(geom: &ModelGeometry, max_pq: u32, settings: &SpectralSettings) -> Result<Vec<ModeValue>> {
    let m = geom.m();
    Ok(mode_table(geom, max_pq, settings)?
        .iter()
        .map(|e| ModeValue {
            p: e.mode.p,
            q: e.mode.q,
            val: e.pprime(m),
        })
        .collect())
}

/// Assembled curvature quantities of one geometry.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub m: u32,
    pub conf_const: f64,
    pub q: f64,
    pub qprime: f64,
    /// GJMS eigenvalues from the exact residue route, carried to the
    /// geometry's contact form.
    pub p_spec: Vec<ModeValue>,
    /// GJMS eigenvalues from the contour residue.
    pub p_spec_contour: Vec<ModeValue>,
    pub pprime_spec: Vec<ModeValue>,
    /// `Q′ ∫ θ ∧ (dθ)^n`.
    pub total_qprime: f64,
    /// Largest contour error estimate over all modes.
    pub contour_error: f64,
    pub routes: BTreeMap<String, String>,
}

/// Runs both routes on all modes `p, q ≤ max_pq`.
pub fn curvature_report(geom: &ModelGeometry, max_pq: u32, settings: &SpectralSettings) -> Result<CurvatureReport> {
    let m = geom.m();
    let table = mode_table(geom, max_pq, settings)?;
    let constant = table
        .iter()
        .find(|e| e.mode.p == 0 && e.mode.q == 0)
        .expect("grid contains the constant mode");
    let (q, qprime) = q_pair(m, &constant.data);
    let prec = &settings.numeric.precision;
    let scale = (-(prec.rational(geom.conf_const()) * m)).exp().to_f64();
    let p_spec = table
        .iter()
        .map(|e| {
            Ok(ModeValue {
                p: e.mode.p,
                q: e.mode.q,
                val: gjms_eigenvalue_exact(e.mode, m)?.to_f64() * scale,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = |f: &dyn Fn(&ModeLaurent) -> f64| -> Vec<ModeValue> {
        table
            .iter()
            .map(|e| ModeValue {
                p: e.mode.p,
                q: e.mode.q,
                val: f(e),
            })
            .collect()
    };
    let routes = [
        ("q", "contour constant term, mode (0,0)"),
        ("qprime", "contour first-order term, mode (0,0)"),
        ("p_spec", "exact formal residue"),
        ("p_spec_contour", "contour residue"),
        ("pprime_spec", "contour constant term"),
        ("total_qprime", "qprime times boundary volume"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    Ok(CurvatureReport {
        m,
        conf_const: geom.conf_const().to_f64(),
        q,
        qprime,
        p_spec,
        p_spec_contour: value(&|e| e.gjms(m)),
        pprime_spec: value(&|e| e.pprime(m)),
        total_qprime: qprime * geom.boundary_volume(prec).to_f64(),
        contour_error: table.iter().map(|e| e.data.est_error).fold(0.0, f64::max),
        routes,
    })
}

/// Point off the real axis where the scattering law is tested directly.
fn test_point(m: u32, prec: u32) -> Complex {
    Complex::with_val(prec, (m as f64 + 0.37, 0.11))
}

/// Checks the constant-`Υ = c` laws on every mode `p, q ≤ max_pq`:
///
/// * `λ̂(s) = e^{(m−2s)c} λ(s)` at a test point,
/// * `e^{mc} P̂ = P` and `e^{mc} P̂′ = P′ + 2c P`,
/// * `e^{mc} Q̂′ = Q′ + 2c P′1 + c² P1 + 2c e^{mc} Q̂` and equality of the
///   total Q′.
pub fn check_transformation_laws(
    geom: &ModelGeometry,
    c: &Rational,
    max_pq: u32,
    settings: &SpectralSettings,
    tolerance: f64,
    total_tolerance: f64,
) -> Result<IdentityReport> {
    let m = geom.m();
    let hat = rescale(geom, c);
    let base_table = mode_table(geom, max_pq, settings)?;
    let hat_table = mode_table(&hat, max_pq, settings)?;
    let prec = &settings.numeric.precision;
    let bits = prec.bits();
    let cf = prec.rational(c);
    let emc = Float::with_val(bits, &cf * m).exp().to_f64();
    let cv = cf.to_f64();
    let mut checks = Vec::new();

    let s = test_point(m, bits);
    let lambda_checks = base_table
        .par_iter()
        .map(|e| {
            let lam = scattering_eigenvalue(geom, e.mode, &s, &settings.numeric)?.lambda;
            let lam_hat = scattering_eigenvalue(&hat, e.mode, &s, &settings.numeric)?.lambda;
            // e^{(m−2s)c}
            let factor = (Complex::with_val(bits, -(s.clone() * 2u32) + m) * &cf).exp();
            let diff = Complex::with_val(bits, &lam_hat - Complex::with_val(bits, &lam * &factor));
            let dev = crate::mp::abs(&diff).to_f64() / crate::mp::abs(&lam_hat).to_f64().max(f64::MIN_POSITIVE);
            Ok(IdentityCheck::new(
                &format!("scattering law ({},{})", e.mode.p, e.mode.q),
                dev,
                tolerance,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    checks.extend(lambda_checks);

    let mut base_const = None;
    for (b, h) in base_table.iter().zip(&hat_table) {
        let (p, q) = (b.mode.p, b.mode.q);
        let pb = b.gjms(m);
        checks.push(IdentityCheck::new(
            &format!("P law ({p},{q})"),
            (emc * h.gjms(m) - pb).abs(),
            tolerance,
        ));
        checks.push(IdentityCheck::new(
            &format!("P' law ({p},{q})"),
            (emc * h.pprime(m) - (b.pprime(m) + 2.0 * cv * pb)).abs(),
            tolerance,
        ));
        if p == 0 && q == 0 {
            base_const = Some((b, h));
        }
    }

    let (b, h) = base_const.expect("grid contains the constant mode");
    let (q0, qp0) = q_pair(m, &b.data);
    let (qh, qph) = q_pair(m, &h.data);
    let rhs = qp0 + 2.0 * cv * b.pprime(m) + cv * cv * b.gjms(m) + 2.0 * cv * emc * qh;
    checks.push(IdentityCheck::new("Q' law", (emc * qph - rhs).abs(), tolerance));
    checks.push(IdentityCheck::new("Q law", (emc * qh - q0).abs(), tolerance));
    let total = qp0 * geom.boundary_volume(prec).to_f64();
    let total_hat = qph * hat.boundary_volume(prec).to_f64();
    checks.push(IdentityCheck::new(
        "total Q' invariance",
        (total_hat - total).abs() / total.abs().max(f64::MIN_POSITIVE),
        total_tolerance,
    ));
    Ok(IdentityReport { checks })
}

/// Boundary data of `−(d/ds)|_{s=m} 𝒫(s)1 = log x + A x^m + B x^m log x + …`.
#[derive(Clone, Debug, Serialize)]
pub struct ModelCorrections {
    pub a_boundary: f64,
    pub b_boundary: f64,
    /// Largest `|c_i(m)|` or `|ċ_i(m)|` below grade `m`; these must vanish
    /// for the expansion to have the stated shape.
    pub lower_order_defect: f64,
    pub pi_trace: f64,
}

/// Reconstructs `A|_M` and `B|_M` from the Dirichlet coefficients `c_i(s)` of
/// the constant mode and `λ(s)`:
/// `A = −ċ_m(m) − λ′(m)`, `B = c_m(m) − λ(m)`.
pub fn model_corrections(geom: &ModelGeometry, settings: &SpectralSettings) -> Result<ModelCorrections> {
    let m = geom.m();
    let mode = ModeSpec::new(0, 0, geom.n());
    let center = Rational::from(m);
    let bits = settings.numeric.precision.bits();
    let lambda = laurent_at_m(geom, mode, &settings.contour, &settings.numeric)?;
    let coeffs = (1..=m)
        .map(|i| {
            laurent_of(&center, &settings.contour, bits, |s| {
                dirichlet_coefficient(geom, mode, s, i, &settings.numeric)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lower = lambda.res.to_f64().abs();
    for data in &coeffs {
        lower = lower.max(data.res.to_f64().abs());
    }
    for data in &coeffs[..coeffs.len() - 1] {
        lower = lower.max(data.constant.to_f64().abs()).max(data.deriv.to_f64().abs());
    }
    let top = coeffs.last().expect("m >= 2");
    Ok(ModelCorrections {
        a_boundary: -top.deriv.to_f64() - lambda.deriv.to_f64(),
        b_boundary: top.constant.to_f64() - lambda.constant.to_f64(),
        lower_order_defect: lower,
        pi_trace: geom.pi_form_trace().to_f64(),
    })
}

/// `tr Π = 0`, `A|_M = 0` and `B|_M = 0` on the model.
pub fn check_model_corrections(
    geom: &ModelGeometry,
    settings: &SpectralSettings,
    tolerance: f64,
) -> Result<IdentityReport> {
    let mc = model_corrections(geom, settings)?;
    Ok(IdentityReport {
        checks: vec![
            IdentityCheck::new("tr Pi", mc.pi_trace.abs(), 0.0),
            IdentityCheck::new("A on the boundary", mc.a_boundary.abs(), tolerance),
            IdentityCheck::new("B on the boundary", mc.b_boundary.abs(), tolerance),
            IdentityCheck::new("lower-order terms", mc.lower_order_defect, tolerance),
        ],
    })
}
