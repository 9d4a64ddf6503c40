//! Global solve per mode: interior-regular solution matched against the two
//! boundary Frobenius solutions.

use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{radial_ode, ModeSpec, ModelGeometry, RadialODE};
use crate::mp::{abs, real_pow, Precision};
use crate::series::{frobenius, Exponent, GradedOperator, LogPolicy, LogSeries, EXCLUSION_RADIUS};

/// Knobs shared by every numeric solve.
#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub precision: Precision,
    /// Matching point as a value of the unscaled `x = 1 − |z|²`.
    pub t_match: Rational,
    /// Upper bound on the number of series terms.
    pub max_terms: u32,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            precision: Precision::from_env(),
            t_match: Rational::from((1, 2)),
            max_terms: 20_000,
        }
    }
}

impl NumericOptions {
    pub fn with_digits(digits: u32) -> Self {
        Self {
            precision: Precision::new(digits),
            ..Self::default()
        }
    }

    fn bits(&self) -> u32 {
        self.precision.bits()
    }

    /// Relative size below which a series tail is negligible.
    fn tail_target(&self) -> f64 {
        10f64.powi(-(self.precision.digits as i32) - 3)
    }
}

/// Regular solution at the ball center, evaluated at the matching point.
#[derive(Clone, Debug)]
pub struct InteriorSolution {
    pub value: Complex,
    /// Derivative with respect to the geometry's defining function `x̂`.
    pub derivative: Complex,
    /// Vanishing order `p + q` of `u = f h` at the center.
    pub center_exponent: u32,
    /// Relative size of the truncated tail.
    pub tail: f64,
}

/// One evaluation of the scattering eigenvalue.
#[derive(Clone, Debug)]
pub struct ScatteringSample {
    pub s: Complex,
    pub lambda: Complex,
    pub match_residual: f64,
    pub precision_digits: u32,
    /// Condition estimate of the 2×2 matching system.
    pub condition: f64,
}

#[derive(Serialize)]
pub struct SampleRow {
    pub m: u32,
    pub p: u32,
    pub q: u32,
    pub re_s: f64,
    pub im_s: f64,
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub residual: f64,
}

impl ScatteringSample {
    pub fn row(&self, m: u32, mode: ModeSpec) -> SampleRow {
        SampleRow {
            m,
            p: mode.p,
            q: mode.q,
            re_s: self.s.real().to_f64(),
            im_s: self.s.imag().to_f64(),
            re_lambda: self.lambda.real().to_f64(),
            im_lambda: self.lambda.imag().to_f64(),
            residual: self.match_residual,
        }
    }
}

/// Errors when `4s − 2m` lies within `2⁻²⁰` of a nonnegative integer.
pub fn check_exclusion(s: &Complex, m: u32) -> Result<()> {
    let d = Complex::with_val(s.prec(), s * 4u32) - m * 2;
    let re = d.real().to_f64();
    let k = re.round();
    if k >= 0.0 {
        let dist = Complex::with_val(s.prec(), &d - Float::with_val(s.prec().0, k));
        if abs(&dist) < EXCLUSION_RADIUS {
            return Err(Error::Resonance {
                k: k as i64,
                s: s.to_string_radix(10, Some(12)).to_string(),
            });
        }
    }
    Ok(())
}

fn check_half_plane(s: &Complex, m: u32) -> Result<()> {
    if s.real().to_f64() * 2.0 <= m as f64 {
        return Err(Error::Domain(format!(
            "Re s = {} must exceed m/2 = {}",
            s.real().to_f64(),
            m as f64 / 2.0
        )));
    }
    Ok(())
}

/// Value, derivative and tail estimate of `x^e Σ c_i x^i`.
fn eval_series(series: &LogSeries<Complex>, e: &Complex, x: &Float) -> (Complex, Complex, f64) {
    let prec = e.prec();
    let mut sum = Complex::new(prec);
    let mut dsum = Complex::new(prec);
    let mut power = Float::with_val(prec.0, 1);
    let mut tail_terms: Vec<f64> = Vec::new();
    let top = series.trunc() / 2;
    for i in 0..=top {
        // A missing coefficient is zero, so a terminating series has no tail.
        let mut last = 0.0f64;
        if let Some(c) = series.coeff(2 * i, 0) {
            let term = Complex::with_val(prec, c * &power);
            let ei = Complex::with_val(prec, e + i);
            dsum += Complex::with_val(prec, &term * &ei);
            last = abs(&term).to_f64();
            sum += term;
        }
        if i + 4 > top {
            tail_terms.push(last);
        }
        power *= x;
    }
    let xe = real_pow(x, e);
    let value = Complex::with_val(prec, &sum * &xe);
    let derivative = Complex::with_val(prec, &dsum * &xe) / x;
    let scale = abs(&sum).to_f64().max(f64::MIN_POSITIVE);
    let tail = tail_terms.iter().cloned().fold(0.0, f64::max) / scale;
    (value, derivative, tail)
}

/// Builds and evaluates a Frobenius series, doubling its length until the
/// tail is below the precision target.
fn adaptive_series(
    op: &GradedOperator<Complex>,
    base: &Exponent,
    x: &Float,
    ratio: f64,
    opts: &NumericOptions,
) -> Result<(Complex, Complex, f64)> {
    let e = op.exponent_value(base, 0);
    let one = op.s().one_like();
    let digits = opts.precision.digits as f64 + 5.0;
    let mut terms = ((digits * std::f64::consts::LN_10) / -ratio.ln()).ceil() as u32 + 16;
    loop {
        let series = frobenius(op, base, &one, 2 * terms, LogPolicy::Forbid)?;
        let (v, d, tail) = eval_series(&series, &e, x);
        if tail < opts.tail_target() {
            return Ok((v, d, tail));
        }
        if terms >= opts.max_terms {
            return Err(Error::Precision(format!(
                "series for base {base} did not converge within {terms} terms (tail {tail:.2e})"
            )));
        }
        terms = (terms * 2).min(opts.max_terms);
    }
}

/// The solution regular at the ball center, normalized to 1 there, at the
/// matching point `x = t_match`.
pub fn interior_solution(ode: &RadialODE, s: &Complex, opts: &NumericOptions) -> Result<InteriorSolution> {
    check_half_plane(s, ode.m)?;
    let bits = opts.bits();
    let t = opts.precision.rational(&opts.t_match);
    if t <= 0 || t >= 1 {
        return Err(Error::Domain(format!(
            "matching point {} must lie in (0, 1)",
            opts.t_match
        )));
    }
    let s = Complex::with_val(bits, s);
    let op = ode.center_operator(&s)?;
    let y = Float::with_val(bits, 1 - &t);
    let (value, dy, tail) = adaptive_series(&op, &Exponent::zero(), &y, y.to_f64(), opts)?;
    // d/dx̂ = e^{−c} d/dx = −e^{−c} d/dy
    let kappa = Float::with_val(bits, &ode.conf_const).neg().exp();
    let derivative = -Complex::with_val(bits, &dy * &kappa);
    Ok(InteriorSolution {
        value,
        derivative,
        center_exponent: ode.mode.p + ode.mode.q,
        tail,
    })
}

/// `λ(s)`: the eigenvalue of the scattering operator on the mode, from
/// `u = A x̂^{m−s}(1 + …) + B x̂^{s}(1 + …)` and `λ = B/A`.
pub fn scattering_eigenvalue(
    geom: &ModelGeometry,
    mode: ModeSpec,
    s: &Complex,
    opts: &NumericOptions,
) -> Result<ScatteringSample> {
    let m = geom.m();
    check_half_plane(s, m)?;
    check_exclusion(s, m)?;
    let bits = opts.bits();
    let s = Complex::with_val(bits, s);
    let ode = radial_ode(geom, mode);
    let interior = interior_solution(&ode, &s, opts)?;

    let t = opts.precision.rational(&opts.t_match);
    let xhat = Float::with_val(bits, opts.precision.rational(geom.conf_const()).exp() * &t);
    let op = ode.to_graded(&s)?;
    let ratio = t.to_f64();
    let (p1, d1, tail1) = adaptive_series(&op, &Exponent::m_minus_s(m), &xhat, ratio, opts)?;
    let (p2, d2, tail2) = adaptive_series(&op, &Exponent::s(), &xhat, ratio, opts)?;

    let det = Complex::with_val(bits, &p1 * &d2) - Complex::with_val(bits, &p2 * &d1);
    if abs(&det).is_zero() {
        return Err(Error::Precision("singular matching system".into()));
    }
    let f = &interior.value;
    let fd = &interior.derivative;
    let a = (Complex::with_val(bits, f * &d2) - Complex::with_val(bits, &p2 * fd)) / &det;
    let b = (Complex::with_val(bits, &p1 * fd) - Complex::with_val(bits, f * &d1)) / &det;
    if abs(&a).is_zero() {
        return Err(Error::Domain(
            "Dirichlet amplitude vanishes: s is a pole of the scattering operator".into(),
        ));
    }
    let lambda = Complex::with_val(bits, &b / &a);

    let norm_m = [&p1, &p2, &d1, &d2]
        .iter()
        .map(|z| abs(z).to_f64())
        .fold(0.0, f64::max)
        * 2.0;
    let norm_inv = [&p1, &p2, &d1, &d2]
        .iter()
        .map(|z| abs(z).to_f64())
        .fold(0.0, f64::max)
        * 2.0
        / abs(&det).to_f64();
    let condition = norm_m * norm_inv;
    if condition > 10f64.powi(opts.precision.digits as i32 / 2) {
        return Err(Error::Precision(format!(
            "matching system condition {condition:.2e}; increase digits or move the matching point"
        )));
    }
    let r1 = Complex::with_val(bits, &a * &p1) + Complex::with_val(bits, &b * &p2) - f;
    let r2 = Complex::with_val(bits, &a * &d1) + Complex::with_val(bits, &b * &d2) - fd;
    let scale = abs(f).to_f64().max(abs(fd).to_f64()).max(f64::MIN_POSITIVE);
    let defect = abs(&r1).to_f64().max(abs(&r2).to_f64()) / scale;
    let match_residual = defect.max(tail1).max(tail2).max(interior.tail) * condition;
    let threshold = 10f64.powi(-((opts.precision.digits * 5 / 8) as i32));
    if match_residual > threshold {
        return Err(Error::Precision(format!(
            "matching residual {match_residual:.2e} above {threshold:.2e}; increase digits"
        )));
    }
    Ok(ScatteringSample {
        s,
        lambda,
        match_residual,
        precision_digits: opts.precision.digits,
        condition,
    })
}

/// Coefficient of `x̂^{m−s+i}` in the normalized Dirichlet series
/// `x̂^{m−s}(1 + …)` at a numeric `s`.
pub fn dirichlet_coefficient(
    geom: &ModelGeometry,
    mode: ModeSpec,
    s: &Complex,
    i: u32,
    opts: &NumericOptions,
) -> Result<Complex> {
    check_exclusion(s, geom.m())?;
    let s = Complex::with_val(opts.bits(), s);
    let op = radial_ode(geom, mode).to_graded(&s)?;
    let series = frobenius(&op, &Exponent::m_minus_s(geom.m()), &s.one_like(), 2 * i, LogPolicy::Forbid)?;
    Ok(series.coeff_or(2 * i, 0, &s.zero_like()))
}
