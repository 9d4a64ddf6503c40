use rug::Rational;

use super::graded::GradedOperator;
use super::log_series::{Exponent, LogSeries, MAX_LOG_DEPTH};
use crate::error::{Error, Result};
use crate::field::{binomial, Field};

/// Half-width of the exclusion zone around `4s − 2m ∈ ℕ` for numeric `s`.
pub const EXCLUSION_RADIUS: f64 = 1.0 / (1u64 << 20) as f64;

/// What to do when the indicial polynomial vanishes at a grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogPolicy {
    /// Any vanishing indicial value is a resonance error.
    Forbid,
    /// Logarithms may enter at this doubled grade only.
    AllowAt(u32),
    /// Logarithms may enter wherever needed.
    Allow,
}

impl LogPolicy {
    fn allows(&self, j2: u32) -> bool {
        match self {
            LogPolicy::Forbid => false,
            LogPolicy::AllowAt(g) => *g == j2,
            LogPolicy::Allow => true,
        }
    }
}

/// Solves `op(u) = rhs` for the terms of `u` at grades `≥ start`, keeping
/// the given lower terms of `u` fixed. Returns the full `u`.
pub fn solve_grades<T: Field>(
    op: &GradedOperator<T>,
    mut u: LogSeries<T>,
    rhs: &LogSeries<T>,
    start: u32,
    policy: LogPolicy,
) -> Result<LogSeries<T>> {
    if u.base() != rhs.base() {
        return Err(Error::Contract(format!(
            "unknown has base {} but right-hand side has base {}",
            u.base(),
            rhs.base()
        )));
    }
    op.check_base(u.base())?;
    let trunc = u.trunc().min(rhs.trunc());
    u = u.with_trunc(trunc);
    let base = u.base().clone();
    let zero = op.s().zero_like();
    let mut image = LogSeries::new(base.clone(), trunc);
    for (j2, k, c) in u.terms() {
        op.apply_term(&mut image, j2, k, c);
    }

    for j2 in start..=trunc {
        let depth = rhs.log_depth().max(image.log_depth());
        let target: Vec<T> = (0..=depth)
            .map(|k| rhs.coeff_or(j2, k, &zero).sub(&image.coeff_or(j2, k, &zero)))
            .collect();
        let a = op.exponent_value(&base, j2);
        let lead = op.leading();
        let i0 = lead.eval(&a);
        let tol = EXCLUSION_RADIUS * j2.max(1) as f64 / 4.0;
        let resonant = i0.near_zero(tol);
        if resonant && !policy.allows(j2) {
            return Err(resonance(op, &base, j2));
        }
        if target.iter().all(|t| t.is_zero()) {
            continue;
        }
        let top = target.iter().rposition(|t| !t.is_zero()).unwrap_or(0) as u32;
        let mut sol: Vec<T> = vec![zero.clone(); top as usize + 2];
        if !resonant {
            for k in (0..=top).rev() {
                let mut t = target[k as usize].clone();
                for kp in (k + 1)..=top {
                    let d = lead.eval_derivative(&a, kp - k);
                    t = t.sub(&d.scale(&binomial(kp, kp - k)).mul(&sol[kp as usize]));
                }
                sol[k as usize] = t.try_div(&i0)?;
            }
        } else {
            let i1 = lead.eval_derivative(&a, 1);
            if i1.near_zero(tol) {
                return Err(Error::Contract(format!(
                    "double indicial root at grade j = {j2}"
                )));
            }
            for k in (0..=top).rev() {
                let mut t = target[k as usize].clone();
                for kp in (k + 2)..=(top + 1) {
                    let d = lead.eval_derivative(&a, kp - k);
                    t = t.sub(&d.scale(&binomial(kp, kp - k)).mul(&sol[kp as usize]));
                }
                let w = i1.scale(&Rational::from(k + 1));
                sol[k as usize + 1] = t.try_div(&w)?;
            }
        }
        for (k, c) in sol.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            u.set(j2, k as u32, c.clone());
            op.apply_term(&mut image, j2, k as u32, c);
        }
        if u.log_depth() > MAX_LOG_DEPTH {
            return Err(Error::Contract(format!(
                "log depth {} exceeds {MAX_LOG_DEPTH} at grade j = {j2}",
                u.log_depth()
            )));
        }
    }
    Ok(u)
}

fn resonance<T: Field>(op: &GradedOperator<T>, base: &Exponent, j2: u32) -> Error {
    // For the exponent families m − s and s the vanishing grade encodes
    // 4s − 2m = ±j; report it in that normalization.
    let k = if base.s_coeff > 0 { -(j2 as i64) } else { j2 as i64 };
    Error::Resonance {
        k,
        s: op.s().coeff_string(),
    }
}

/// Result of [`solve_order_by_order`]: `u = F x^{m−s} + G x^{s} log x`.
///
/// `G` is nonzero only at the resonant value `s = m`, where it carries the
/// logarithmic coefficient.
#[derive(Clone, Debug)]
pub struct FormalSolution<T> {
    pub f: LogSeries<T>,
    pub g: LogSeries<T>,
}

/// Formal solution of `op(u) = 0` with `u = boundary_value · x^{m−s}(1 + …)`.
///
/// `order` is the truncation in doubled grades. At a concrete `s` a
/// vanishing indicial factor is a resonance error, except at `s = m` where
/// the logarithmic term is produced.
pub fn solve_order_by_order<T: Field>(
    op: &GradedOperator<T>,
    boundary_value: &T,
    order: u32,
) -> Result<FormalSolution<T>> {
    let m = op.m();
    let base = Exponent::m_minus_s(m);
    let at_m = op.s().add_rational(&Rational::from(-(m as i64))).is_zero();
    let policy = if at_m {
        LogPolicy::AllowAt(2 * m)
    } else {
        LogPolicy::Forbid
    };
    let sol = frobenius(op, &base, boundary_value, order, policy)?;
    if sol.log_depth() > 1 {
        return Err(Error::Contract(
            "homogeneous solution with log depth above 1".into(),
        ));
    }
    let mut f = LogSeries::new(base, order);
    let mut g = LogSeries::new(Exponent::s(), order.saturating_sub(2 * m));
    for (j2, k, c) in sol.terms() {
        match k {
            0 => f.set(j2, 0, c.clone()),
            _ => {
                if j2 < 2 * m {
                    return Err(Error::Contract(format!(
                        "logarithmic term below the resonant grade (j = {j2})"
                    )));
                }
                g.set(j2 - 2 * m, 0, c.clone());
            }
        }
    }
    Ok(FormalSolution { f, g })
}

/// Frobenius series `x^{base} (leading + …)` annihilated by `op`.
pub fn frobenius<T: Field>(
    op: &GradedOperator<T>,
    base: &Exponent,
    leading: &T,
    order: u32,
    policy: LogPolicy,
) -> Result<LogSeries<T>> {
    let a0 = op.exponent_value(base, 0);
    if !op.indicial(&a0).near_zero(EXCLUSION_RADIUS) {
        return Err(Error::Contract(format!(
            "base exponent {base} is not an indicial root"
        )));
    }
    let mut u = LogSeries::new(base.clone(), order);
    u.set(0, 0, leading.clone());
    let rhs = LogSeries::new(base.clone(), order);
    let u = solve_grades(op, u, &rhs, 1, policy)?;
    u.assert_integer_grades()?;
    Ok(u)
}

/// Result of [`solve_with_source`]: `u = seed + A + B x^{m} log x`.
#[derive(Clone, Debug)]
pub struct SourceSolution<T> {
    /// The smooth correction, with `A|₀ = 0`.
    pub a: LogSeries<T>,
    /// Coefficients of `x^m log x`.
    pub b: LogSeries<T>,
    /// The completed solution.
    pub u: LogSeries<T>,
}

impl<T: Field> SourceSolution<T> {
    /// `B|₀`, the boundary value of the log coefficient.
    pub fn b_boundary(&self) -> Option<&T> {
        self.b.coeff(0, 0)
    }
}

/// Completes `seed` to a formal solution of `op(u) = source`.
///
/// The seed must already solve the equation at grade 0. The correction has
/// no grade-0 term; a logarithm appears at the resonant grade `2m` when the
/// equation forces it.
pub fn solve_with_source<T: Field>(
    op: &GradedOperator<T>,
    source: &LogSeries<T>,
    seed: &LogSeries<T>,
    order: u32,
) -> Result<SourceSolution<T>> {
    if seed.base() != &Exponent::zero() || source.base() != &Exponent::zero() {
        return Err(Error::Contract(
            "source and seed must have base exponent 0".into(),
        ));
    }
    let m = op.m();
    let zero = op.s().zero_like();
    let seed = seed.clone().with_trunc(order);
    let residual = source.clone().with_trunc(order).sub(&op.apply(&seed)?)?;
    for k in 0..=residual.log_depth() {
        if residual.coeff(0, k).is_some() {
            return Err(Error::Contract(format!(
                "seed does not solve the equation at grade 0 (log power {k} defect {})",
                residual.coeff_or(0, k, &zero).coeff_string()
            )));
        }
    }
    let correction = LogSeries::new(Exponent::zero(), order);
    let corr = solve_grades(op, correction, &residual, 1, LogPolicy::AllowAt(2 * m))?;
    let mut a = LogSeries::new(Exponent::zero(), order);
    let mut b = LogSeries::new(Exponent::zero(), order.saturating_sub(2 * m));
    for (j2, k, c) in corr.terms() {
        match k {
            0 => a.set(j2, 0, c.clone()),
            1 if j2 >= 2 * m => b.set(j2 - 2 * m, 0, c.clone()),
            _ => {
                return Err(Error::Contract(format!(
                    "unexpected logarithmic term (j = {j2}, k = {k}) in the completion"
                )))
            }
        }
    }
    let u = seed.add(&corr)?;
    Ok(SourceSolution { a, b, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::c_m;
    use crate::series::meromorphic::MeromorphicScalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn constants_solve_the_critical_equation() {
        let op = GradedOperator::model(2, 0, 0, q(2, 1), q(1, 1));
        let sol = solve_order_by_order(&op, &q(1, 1), 12).unwrap();
        assert_eq!(sol.f.len(), 1);
        assert_eq!(sol.f.coeff(0, 0), Some(&q(1, 1)));
        assert!(sol.g.is_zero());
    }

    #[test]
    fn log_coefficient_at_m_for_mode_one_one() {
        let m = 2;
        let op = GradedOperator::model(m, 1, 1, q(2, 1), q(1, 1));
        let sol = solve_order_by_order(&op, &q(1, 1), 12).unwrap();
        let g0 = sol.g.coeff(0, 0).cloned().unwrap();
        // G|₀ = −2 c_m P with P = 4 on this mode.
        assert_eq!(g0, (-2 * c_m(m) * 4u32));
    }

    #[test]
    fn concrete_resonance_is_an_error() {
        // 4s − 2m = 2 at s = 3/2, m = 2.
        let op = GradedOperator::model(2, 1, 1, q(3, 2), q(1, 1));
        let err = solve_order_by_order(&op, &q(1, 1), 8).unwrap_err();
        assert!(matches!(err, Error::Resonance { k: 2, .. }), "{err}");
    }

    #[test]
    fn symbolic_family_has_simple_poles() {
        let s = MeromorphicScalar::s();
        let one = MeromorphicScalar::constant(q(1, 1));
        let op = GradedOperator::model(2, 1, 1, s, one.clone());
        let sol = solve_order_by_order(&op, &one, 8).unwrap();
        let p4 = sol.f.coeff(4, 0).unwrap();
        assert_eq!(p4.pole_order(&q(2, 1)), 1);
        assert!(p4.pole_set().iter().all(|(_, k)| *k == 1));
    }

    #[test]
    fn log_x_solves_the_source_problem() {
        let m = 2;
        let op = GradedOperator::model(m, 0, 0, q(2, 1), q(1, 1));
        let source = LogSeries::constant(q(2, 1), 10);
        let seed = LogSeries::log_x(&q(1, 1), 10);
        let sol = solve_with_source(&op, &source, &seed, 10).unwrap();
        assert!(sol.a.is_zero());
        assert!(sol.b.is_zero());
    }

    #[test]
    fn radial_source_inverts_the_grade_factor() {
        let m = 3;
        let op = GradedOperator::model(m, 0, 0, q(3, 1), q(1, 1));
        let mut source = LogSeries::constant(q(3, 1), 10);
        source.set(2, 0, q(1, 1));
        let seed = LogSeries::log_x(&q(1, 1), 10);
        let sol = solve_with_source(&op, &source, &seed, 10).unwrap();
        // k = 1: coefficient 1 / (k (m − k)).
        assert_eq!(sol.a.coeff(2, 0), Some(&q(1, 2)));
        assert!(sol.a.coeff(0, 0).is_none());
    }

    #[test]
    fn inconsistent_seed_is_rejected() {
        let op = GradedOperator::model(2, 0, 0, q(2, 1), q(1, 1));
        let source = LogSeries::constant(q(3, 1), 6);
        let seed = LogSeries::log_x(&q(1, 1), 6);
        assert!(matches!(
            solve_with_source(&op, &source, &seed, 6),
            Err(Error::Contract(_))
        ));
    }
}
