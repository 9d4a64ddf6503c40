//! The complex hyperbolic ball `{|z| < 1} ⊂ ℂ^m` with Kähler potential
//! `−log x`, `x = 1 − |z|²`, its constant rescalings and the reduction of
//! `Δ − s(m − s)` to a radial ODE on each bigraded spherical harmonic.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{binomial, c_m, factorial, Field};
use crate::linalg::complex_solve;
use crate::mp::Precision;
use crate::quad::GaussLegendre;
use crate::series::log_series::log_one_plus;
use crate::series::{
    solve_with_source, Exponent, GradedOperator, LogSeries, Poly, Rule,
};

/// The ball with defining function `e^{c} (1 − |z|²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelGeometry {
    m: u32,
    conf_const: Rational,
}

impl ModelGeometry {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_conf_const(m, Rational::new())
    }

    pub fn with_conf_const(m: u32, conf_const: Rational) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!(
                "complex dimension m = {m}; the boundary needs CR dimension n = m - 1 >= 1"
            )));
        }
        Ok(Self { m, conf_const })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// CR dimension of the boundary sphere `S^{2n+1}`.
    pub fn n(&self) -> u32 {
        self.m - 1
    }

    pub fn conf_const(&self) -> &Rational {
        &self.conf_const
    }

    /// `(−1)^m / (2 m! (m−1)!)`.
    pub fn c_m(&self) -> Rational {
        c_m(self.m)
    }

    /// Trace of the form `Π`; the ball's metric is Kähler–Einstein, so `Π ≡ 0`.
    pub fn pi_form_trace(&self) -> Rational {
        Rational::new()
    }

    /// `e^{−c}` in the field of `like`; exact fields only support `c = 0`.
    pub fn kappa<T: Field>(&self, like: &T) -> Result<T> {
        like.exp_rational(&Rational::from(-&self.conf_const))
            .ok_or_else(|| {
                Error::Contract(format!(
                    "e^(-{}) is not representable exactly; use a numeric field",
                    self.conf_const
                ))
            })
    }

    /// `∫_{S^{2n+1}} θ ∧ (dθ)^n = (2π)^m e^{mc}` for the contact form of `x`.
    pub fn boundary_volume(&self, prec: &Precision) -> Float {
        let two_pi = Float::with_val(prec.bits(), Constant::Pi) * 2u32;
        let c = prec.rational(&self.conf_const) * self.m;
        two_pi.pow(self.m) * c.exp()
    }

    /// Splits `x̂ > ε` into the unscaled threshold `ε e^{−c}`.
    pub fn unscaled_threshold(&self, eps: &Float) -> Float {
        let prec = eps.prec();
        let k = Float::with_val(prec, &self.conf_const).neg().exp();
        Float::with_val(prec, eps * k)
    }
}

/// `θ̂ = e^{c} θ`: the metric is unchanged, the defining function is
/// multiplied by `e^{c}`.
pub fn rescale(geom: &ModelGeometry, c: &Rational) -> ModelGeometry {
    ModelGeometry {
        m: geom.m,
        conf_const: Rational::from(&geom.conf_const + c),
    }
}

/// Bidegree `(p, q)` of a spherical harmonic on `S^{2n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ModeSpec {
    pub p: u32,
    pub q: u32,
    pub n: u32,
}

impl ModeSpec {
    pub fn new(p: u32, q: u32, n: u32) -> Self {
        Self { p, q, n }
    }

    /// Modes with `p = 0` or `q = 0` consist of CR pluriharmonic functions.
    pub fn is_pluriharmonic(&self) -> bool {
        self.p == 0 || self.q == 0
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.q, self.p, self.n)
    }

    /// All modes with `p, q ≤ max_pq`, ordered by `(p, q)`.
    pub fn grid(max_pq: u32, n: u32) -> Vec<Self> {
        (0..=max_pq)
            .flat_map(|p| (0..=max_pq).map(move |q| Self::new(p, q, n)))
            .collect()
    }
}

/// `a₂ u'' + a₁ u' + a₀ u` with `a_i` polynomials in `x` whose coefficients
/// are polynomials in `s`; index `k` of each vector is the power `x^k`.
/// The coefficients refer to the unscaled `x = 1 − |z|²`.
#[derive(Clone, Debug)]
pub struct RadialODE {
    pub m: u32,
    pub mode: ModeSpec,
    pub conf_const: Rational,
    pub a2: Vec<Poly>,
    pub a1: Vec<Poly>,
    pub a0: Vec<Poly>,
}

impl PartialEq for RadialODE {
    /// Operators are compared as operators; the mode label is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.conf_const == other.conf_const
            && self.a2 == other.a2
            && self.a1 == other.a1
            && self.a0 == other.a0
    }
}

fn constant_polys(v: &[i64]) -> Vec<Poly> {
    v.iter().map(|&c| Poly::constant(Rational::from(c))).collect()
}

/// Mode reduction of `Δ − s(m − s)` on `u = f(x) h(z)`, `h` a harmonic
/// polynomial of bidegree `(p, q)`:
///
/// `−x²(1−x) f'' + x((m−1) + (p+q+1)x) f' + (pq x − s(m−s)) f`.
pub fn radial_ode(geom: &ModelGeometry, mode: ModeSpec) -> RadialODE {
    let m = geom.m as i64;
    let (p, q) = (mode.p as i64, mode.q as i64);
    // −s(m − s) = s² − m s
    let sms = Poly::from_coeffs(vec![
        Rational::new(),
        Rational::from(-m),
        Rational::from(1),
    ]);
    RadialODE {
        m: geom.m,
        mode,
        conf_const: geom.conf_const.clone(),
        a2: constant_polys(&[0, 0, -1, 1]),
        a1: constant_polys(&[0, m - 1, p + q + 1]),
        a0: vec![sms, Poly::constant(Rational::from(p * q))],
    }
}

fn coeff(v: &[Poly], k: i64) -> Poly {
    if k < 0 {
        return Poly::zero();
    }
    v.get(k as usize).cloned().unwrap_or_default()
}

impl RadialODE {
    /// Euler form `Σ_d x^d R_d(θ)`, `θ = x d/dx`, with `R_d(a)` as a
    /// polynomial in `a` whose coefficients are polynomials in `s`.
    pub fn euler_rules(&self) -> Result<Vec<(u32, Vec<Poly>)>> {
        if !coeff(&self.a2, 0).is_zero() || !coeff(&self.a2, 1).is_zero() || !coeff(&self.a1, 0).is_zero() {
            return Err(Error::Contract(
                "x = 0 is not a regular singular point of the radial ODE".into(),
            ));
        }
        let top = self.a2.len().max(self.a1.len() + 1).max(self.a0.len() + 2);
        let mut out = Vec::new();
        for d in 0..top as i64 {
            // x^{d+2} D² = x^d θ(θ−1), x^{d+1} D = x^d θ.
            let c2 = coeff(&self.a2, d + 2);
            let c1 = coeff(&self.a1, d + 1);
            let c0 = coeff(&self.a0, d);
            let rule = vec![c0, c1.sub(&c2), c2];
            if rule.iter().any(|p| !p.is_zero()) {
                out.push((d as u32, rule));
            }
        }
        Ok(out)
    }

    /// Indicial polynomial at `x = 0`, coefficients in `s`.
    pub fn indicial_polynomial(&self) -> Result<Vec<Poly>> {
        Ok(self
            .euler_rules()?
            .into_iter()
            .find(|(d, _)| *d == 0)
            .map(|(_, r)| r)
            .unwrap_or_default())
    }

    /// The graded operator in the geometry's defining function `x̂ = e^{c} x`;
    /// the rule raising the power by `d` carries `e^{−dc}`.
    pub fn to_graded<T: Field>(&self, s: &T) -> Result<GradedOperator<T>> {
        let kappa = if self.conf_const == 0 {
            s.one_like()
        } else {
            ModelGeometry::with_conf_const(self.m, self.conf_const.clone())?.kappa(s)?
        };
        let mut rules = Vec::new();
        for (d, polys) in self.euler_rules()? {
            let mut factor = s.one_like();
            for _ in 0..d {
                factor = factor.mul(&kappa);
            }
            let coeffs = polys.iter().map(|p| p.eval_field(s).mul(&factor)).collect();
            rules.push(Rule {
                inc_j2: 2 * d,
                coeffs,
            });
        }
        Ok(GradedOperator::new(self.m, s.clone(), rules))
    }

    /// The same operator around the ball center in `y = 1 − x = |z|²`,
    /// multiplied by `y` and written in Euler form in `θ_y = y d/dy`. The
    /// regular solution has exponent 0 at `y = 0`.
    pub fn center_operator<T: Field>(&self, s: &T) -> Result<GradedOperator<T>> {
        let b2 = substitute_one_minus(&self.a2);
        let b1 = substitute_one_minus(&self.a1);
        let b0 = substitute_one_minus(&self.a0);
        if !coeff(&b2, 0).is_zero() {
            return Err(Error::Contract(
                "the ball center is not a singular point of the expected type".into(),
            ));
        }
        // y·(b₂ D_y² − b₁ D_y + b₀) with D_x = −D_y.
        let top = b2.len().max(b1.len() + 1).max(b0.len() + 1);
        let mut rules = Vec::new();
        for d in 0..=top as i64 {
            let c2 = coeff(&b2, d + 1);
            let c1 = coeff(&b1, d).neg();
            let c0 = coeff(&b0, d - 1);
            let rule = [c0, c1.sub(&c2), c2];
            if rule.iter().all(|p| p.is_zero()) {
                continue;
            }
            rules.push(Rule {
                inc_j2: 2 * d as u32,
                coeffs: rule.iter().map(|p| p.eval_field(s)).collect(),
            });
        }
        Ok(GradedOperator::new(self.m, s.clone(), rules))
    }
}

/// Coefficients of `Σ α_k (1 − y)^k` in powers of `y`.
fn substitute_one_minus(a: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); a.len()];
    for (k, alpha) in a.iter().enumerate() {
        for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
            let mut w = binomial(k as u32, i as u32);
            if i % 2 == 1 {
                w = -w;
            }
            *slot = slot.add(&alpha.scale(&w));
        }
    }
    out
}

/// Outcome of one identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn new(name: &str, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The first failing check as an error.
    pub fn into_result(self) -> Result<Self> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(Error::IdentityFailed {
                name: c.name.clone(),
                deviation: c.deviation,
                tolerance: c.tolerance,
            }),
            None => Ok(self),
        }
    }
}

/// Kähler metric `g_{jk̄} = δ_{jk}/x + z̄_j z_k / x²` at `z`.
pub fn metric_matrix(z: &[Complex]) -> (Vec<Vec<Complex>>, Float) {
    let prec = z[0].prec();
    let mut r2 = Float::new(prec.0);
    for zj in z {
        r2 += Float::with_val(prec.0, zj.abs_ref()).square();
    }
    let x = Float::with_val(prec.0, 1 - r2);
    let x2 = Float::with_val(prec.0, x.square_ref());
    let g = z
        .iter()
        .enumerate()
        .map(|(j, zj)| {
            z.iter()
                .enumerate()
                .map(|(k, zk)| {
                    let mut v = Complex::with_val(prec, zj.conj_ref()) * zk / &x2;
                    if j == k {
                        v += Float::with_val(prec.0, x.recip_ref());
                    }
                    v
                })
                .collect()
        })
        .collect();
    (g, x)
}

/// Sample points `z = r u` for a fixed unit direction `u` and several radii.
fn sample_points(m: u32, prec: u32) -> Vec<Vec<Complex>> {
    let raw: Vec<Complex> = (0..m)
        .map(|j| Complex::with_val(prec, ((j + 1) as f64, 0.5 * j as f64 - 0.25)))
        .collect();
    let mut norm = Float::new(prec);
    for v in &raw {
        norm += Float::with_val(prec, v.abs_ref()).square();
    }
    let norm = norm.sqrt();
    [0.1, 0.5, 0.9, 0.99]
        .iter()
        .map(|&r| {
            raw.iter()
                .map(|v| Complex::with_val(prec, v * Float::with_val(prec, r)) / &norm)
                .collect()
        })
        .collect()
}

/// Checks the identities the model is built on: `Δ1 = 0`, `Δ log x = m`,
/// `‖d log x‖² = 2(1 − x)`, the volume density `2^m x^{−(m+1)}` and the
/// boundary volume `(2π)^m e^{mc}`.
pub fn verify_model_identities(geom: &ModelGeometry, prec: &Precision) -> Result<IdentityReport> {
    let bits = prec.bits();
    let tol = 1e-30;
    let mut checks = Vec::new();
    let ode = radial_ode(geom, ModeSpec::new(0, 0, geom.n()));
    let trunc = 4 * geom.m + 8;

    // Laplacian identities, term by term in the defining function x̂.
    let (dev_one, dev_log) = if geom.conf_const == 0 {
        let op = ode.to_graded(&Rational::new())?;
        let one = op.apply(&LogSeries::constant(Rational::from(1), trunc))?;
        let lg = op.apply(&LogSeries::log_x(&Rational::from(1), trunc))?;
        let defect = lg.sub(&LogSeries::constant(Rational::from(geom.m), trunc))?;
        let d1 = if one.is_zero() { 0.0 } else { 1.0 };
        let d2 = if defect.is_zero() { 0.0 } else { 1.0 };
        (d1, d2)
    } else {
        let zero = Float::new(bits);
        let op = ode.to_graded(&zero)?;
        let unit = Float::with_val(bits, 1);
        let one = op.apply(&LogSeries::constant(unit.clone(), trunc))?;
        let lg = op.apply(&LogSeries::log_x(&unit, trunc))?;
        let defect = lg.sub(&LogSeries::constant(Float::with_val(bits, geom.m), trunc))?;
        (max_abs(&one), max_abs(&defect))
    };
    checks.push(IdentityCheck::new("laplacian of 1 vanishes", dev_one, 0.0));
    checks.push(IdentityCheck::new("laplacian of log x equals m", dev_log, tol));

    // Pointwise metric identities from the Kähler matrix itself.
    let mut dev_norm: f64 = 0.0;
    let mut dev_density: f64 = 0.0;
    for z in sample_points(geom.m, bits) {
        let (g, x) = metric_matrix(&z);
        let alpha: Vec<Complex> = z
            .iter()
            .map(|zj| -Complex::with_val(bits, zj.conj_ref()) / &x)
            .collect();
        let (xi, det) = complex_solve(g, alpha.clone())?;
        let mut q = Complex::new(bits);
        for (a, x_) in alpha.iter().zip(&xi) {
            q += Complex::with_val(bits, a.conj_ref()) * x_;
        }
        let norm = Float::with_val(bits, q.real() * 2u32);
        let closed = Float::with_val(bits, 1 - &x) * 2u32;
        let d = Float::with_val(bits, &norm - &closed).abs();
        dev_norm = dev_norm.max(d.to_f64());
        let density = Float::with_val(bits, det.real() * x.clone().pow(geom.m + 1));
        let dd = Float::with_val(bits, density - 1u32).abs();
        dev_density = dev_density.max(dd.to_f64());
    }
    checks.push(IdentityCheck::new(
        "|d log x|^2 - 2 = -2x",
        dev_norm,
        tol,
    ));
    checks.push(IdentityCheck::new(
        "volume density 2^m x^-(m+1)",
        dev_density,
        tol,
    ));

    // Boundary volume by Stokes: ∫ θ∧(dθ)^n = ∫_B (dθ)^m = 2^m m! vol(B),
    // with vol(B) = ∫_0^1 π^m y^{m−1} / (m−1)! dy.
    let gl = GaussLegendre::new(geom.m as usize + 2, bits);
    let pi = prec.pi();
    let m = geom.m;
    let radial = gl.integrate(
        &Float::new(bits),
        &Float::with_val(bits, 1),
        &|y: &Float| Float::with_val(bits, y.pow(m - 1)),
    );
    let ball = radial * pi.pow(m) / prec.rational(&factorial(m - 1));
    let scale = Float::with_val(bits, prec.rational(&geom.conf_const) * m).exp();
    let by_stokes = ball * Float::with_val(bits, 2u32).pow(m) * prec.rational(&factorial(m)) * scale;
    let closed = geom.boundary_volume(prec);
    let rel = (Float::with_val(bits, &by_stokes - &closed) / &closed).abs();
    checks.push(IdentityCheck::new(
        "boundary volume (2 pi)^m e^(mc)",
        rel.to_f64(),
        tol,
    ));

    IdentityReport { checks }.into_result()
}

fn max_abs(s: &LogSeries<Float>) -> f64 {
    s.terms()
        .map(|(_, _, c)| c.to_f64().abs())
        .fold(0.0, f64::max)
}

/// Improves a radial defining function `x′ = x (1 + Σ a_k x^k)` to `x̃`
/// with `Δ log x̃ = m + O(x^m)`.
///
/// `perturbation` is the series `x′/x` in the unscaled `x`; its constant
/// term must be 1 so that the contact form is unchanged. The result is
/// `x̃` with base exponent 1, i.e. the stored terms are those of `x̃/x`.
pub fn improve_defining_function(
    geom: &ModelGeometry,
    perturbation: &LogSeries<Rational>,
) -> Result<LogSeries<Rational>> {
    let one = Rational::from(1);
    if perturbation.base() != &Exponent::zero() || perturbation.log_depth() > 0 {
        return Err(Error::Contract(
            "perturbation must be a power series x'/x in x".into(),
        ));
    }
    if perturbation.coeff(0, 0) != Some(&one) {
        return Err(Error::Normalization(format!(
            "x'/x must equal 1 on the boundary, found {}",
            perturbation.coeff_or(0, 0, &one.zero_like())
        )));
    }
    let m = geom.m;
    let trunc = perturbation.trunc();
    let mut p = perturbation.clone();
    p.set(0, 0, Rational::new());
    let w0 = log_one_plus(&p, &one)?;

    let ode = radial_ode(&ModelGeometry::new(m)?, ModeSpec::new(0, 0, geom.n()));
    let op = ode.to_graded(&Rational::from(m))?;
    let source = LogSeries::constant(Rational::from(m), trunc);
    let seed = LogSeries::log_x(&one, trunc).add(&w0)?;
    let completion = solve_with_source(&op, &source, &seed, trunc)?;

    // Only the part below the resonant grade is determined.
    let mut w = w0;
    for (j2, k, c) in completion.a.terms() {
        if j2 < 2 * m && k == 0 {
            w.add_to(j2, 0, c);
        }
    }
    let ratio = crate::series::log_series::exp_series(&w, &one)?;
    let mut out = LogSeries::new(Exponent::constant(Rational::from(1)), trunc);
    for (j2, k, c) in ratio.terms() {
        out.set(j2, k, c.clone());
    }
    Ok(out)
}

/// `Δ log x̃ − m` for `x̃` given as in [`improve_defining_function`].
pub fn log_laplacian_defect(geom: &ModelGeometry, xt: &LogSeries<Rational>) -> Result<LogSeries<Rational>> {
    let one = Rational::from(1);
    if xt.base() != &Exponent::constant(one.clone()) {
        return Err(Error::Contract("expected x̃ with base exponent 1".into()));
    }
    let trunc = xt.trunc();
    let mut ratio = LogSeries::new(Exponent::zero(), trunc);
    for (j2, k, c) in xt.terms() {
        ratio.set(j2, k, c.clone());
    }
    if ratio.coeff(0, 0) != Some(&one) {
        return Err(Error::Normalization("x̃/x must equal 1 on the boundary".into()));
    }
    ratio.set(0, 0, Rational::new());
    let log_xt = LogSeries::log_x(&one, trunc).add(&log_one_plus(&ratio, &one)?)?;
    let ode = radial_ode(&ModelGeometry::new(geom.m)?, ModeSpec::new(0, 0, geom.n()));
    let op = ode.to_graded(&Rational::new())?;
    op.apply(&log_xt)?
        .sub(&LogSeries::constant(Rational::from(geom.m), trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{indicial_factor, MeromorphicScalar};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn ode_rules_match_the_direct_model_operator() {
        let geom = ModelGeometry::new(3).unwrap();
        let s = q(11, 5);
        for (p, qq) in [(0, 0), (1, 0), (2, 3)] {
            let ode = radial_ode(&geom, ModeSpec::new(p, qq, 2));
            let a = ode.to_graded(&s).unwrap();
            let b = GradedOperator::model(3, p, qq, s.clone(), q(1, 1));
            assert_eq!(a.rules(), b.rules());
        }
    }

    #[test]
    fn indicial_roots_are_s_and_m_minus_s() {
        let geom = ModelGeometry::new(2).unwrap();
        let ode = radial_ode(&geom, ModeSpec::new(1, 0, 1));
        let ind = ode.indicial_polynomial().unwrap();
        let s = MeromorphicScalar::s();
        let eval = |a: &MeromorphicScalar| {
            ind.iter().rev().fold(MeromorphicScalar::constant(q(0, 1)), |acc, c| {
                acc.mul(a).add(&MeromorphicScalar::from_poly(c.clone()))
            })
        };
        assert!(eval(&s).is_zero());
        assert!(eval(&s.neg().add_rational(&q(2, 1))).is_zero());
        let op = ode.to_graded(&s).unwrap();
        for j2 in 0..=4 {
            let a = op.exponent_value(&Exponent::m_minus_s(2), j2);
            assert_eq!(op.indicial(&a), indicial_factor(2, &s, j2));
        }
    }

    #[test]
    fn conjugate_modes_share_the_operator() {
        let geom = ModelGeometry::new(2).unwrap();
        assert_eq!(
            radial_ode(&geom, ModeSpec::new(1, 3, 1)),
            radial_ode(&geom, ModeSpec::new(3, 1, 1))
        );
    }

    #[test]
    fn center_series_of_constant_mode() {
        let geom = ModelGeometry::new(2).unwrap();
        let ode = radial_ode(&geom, ModeSpec::new(0, 0, 1));
        let op = ode.center_operator(&q(2, 1)).unwrap();
        // Leading rule −a(a + m + p + q − 1).
        assert_eq!(op.leading().coeffs, vec![q(0, 1), q(-1, 1), q(-1, 1)]);
        let u = crate::series::frobenius(&op, &Exponent::zero(), &q(1, 1), 10, crate::series::LogPolicy::Forbid).unwrap();
        assert_eq!(u.len(), 1);
    }

    #[test]
    fn rescale_composes() {
        let g = ModelGeometry::new(2).unwrap();
        let a = rescale(&rescale(&g, &q(3, 10)), &q(-1, 7));
        assert_eq!(a, rescale(&g, &(q(3, 10) + q(-1, 7))));
        assert_eq!(rescale(&g, &q(0, 1)), g);
    }

    #[test]
    fn model_identities_hold() {
        let prec = Precision::new(40);
        for m in 2..=3 {
            let g = ModelGeometry::new(m).unwrap();
            assert!(verify_model_identities(&g, &prec).unwrap().passed());
            let g = rescale(&g, &q(3, 10));
            assert!(verify_model_identities(&g, &prec).unwrap().passed());
        }
    }

    #[test]
    fn improving_x_times_one_plus_x() {
        let g = ModelGeometry::new(2).unwrap();
        let pert = LogSeries::from_powers(&[q(1, 1), q(1, 1)], 12);
        let xt = improve_defining_function(&g, &pert).unwrap();
        assert_eq!(xt.coeff(0, 0), Some(&q(1, 1)));
        assert!(xt.coeff(2, 0).is_none());
        let defect = log_laplacian_defect(&g, &xt).unwrap();
        assert!(defect.lowest_grade().is_none_or(|j| j >= 4));
    }

    #[test]
    fn perturbation_beyond_uniqueness_order_is_kept() {
        let g = ModelGeometry::new(2).unwrap();
        let pert = LogSeries::from_powers(&[q(1, 1), q(0, 1), q(1, 1)], 12);
        let xt = improve_defining_function(&g, &pert).unwrap();
        let expected: Vec<_> = pert.terms().map(|(j, k, c)| (j, k, c.clone())).collect();
        let got: Vec<_> = xt.terms().map(|(j, k, c)| (j, k, c.clone())).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn boundary_value_change_is_rejected() {
        let g = ModelGeometry::new(2).unwrap();
        let pert = LogSeries::from_powers(&[q(2, 1), q(1, 1)], 8);
        assert!(matches!(
            improve_defining_function(&g, &pert),
            Err(Error::Normalization(_))
        ));
    }
}
