use rug::Rational;

use super::log_series::{Exponent, LogSeries};
use crate::error::{Error, Result};
use crate::field::{binomial, Field};

/// `−¼ j (2m − 4s + j)`: the factor by which the leading part of
/// `Δ − s(m − s)` multiplies `x^{m−s+j/2}`.
pub fn indicial_factor<T: Field>(m: u32, s: &T, j2: u32) -> T {
    let j = Rational::from(j2);
    let inner = s
        .scale(&Rational::from(-4))
        .add_rational(&Rational::from(2 * m + j2));
    inner.scale(&(j * Rational::from((-1, 4))))
}

/// One graded piece of an Euler-type operator: it maps
/// `x^a (log x)^k` to `Σ_i C(k,i) R^{(i)}(a) x^{a + inc/2} (log x)^{k−i}`,
/// where `R` is a polynomial in `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule<T> {
    pub inc_j2: u32,
    /// Ascending coefficients of `R(a)`.
    pub coeffs: Vec<T>,
}

impl<T: Field> Rule<T> {
    /// `R^{(order)}(a)`.
    pub fn eval_derivative(&self, a: &T, order: u32) -> T {
        let order = order as usize;
        let mut acc = a.zero_like();
        for (n, c) in self.coeffs.iter().enumerate().skip(order).rev() {
            // Horner in a with falling-factorial weights n!/(n−order)!.
            let mut w = Rational::from(1);
            for f in (n - order + 1)..=n {
                w *= f as u32;
            }
            acc = acc.mul(a).add(&c.scale(&w));
        }
        acc
    }

    pub fn eval(&self, a: &T) -> T {
        self.eval_derivative(a, 0)
    }
}

/// A per-mode operator acting grade by grade on [`LogSeries`].
///
/// The rule with `inc_j2 = 0` is the indicial part; the others raise the
/// grade. The spectral parameter is fixed at construction.
#[derive(Clone, Debug)]
pub struct GradedOperator<T> {
    m: u32,
    s: T,
    rules: Vec<Rule<T>>,
    anchors: Vec<Exponent>,
}

impl<T: Field> GradedOperator<T> {
    /// Builds an operator from rules; rules sharing an increment are merged.
    pub fn new(m: u32, s: T, rules: Vec<Rule<T>>) -> Self {
        let mut merged: Vec<Rule<T>> = Vec::new();
        for r in rules {
            match merged.iter_mut().find(|x| x.inc_j2 == r.inc_j2) {
                Some(x) => {
                    let len = x.coeffs.len().max(r.coeffs.len());
                    let zero = s.zero_like();
                    x.coeffs = (0..len)
                        .map(|i| {
                            let a = x.coeffs.get(i).unwrap_or(&zero);
                            let b = r.coeffs.get(i).unwrap_or(&zero);
                            a.add(b)
                        })
                        .collect();
                }
                None => merged.push(r),
            }
        }
        merged.sort_by_key(|r| r.inc_j2);
        if !merged.iter().any(|r| r.inc_j2 == 0) {
            merged.insert(
                0,
                Rule {
                    inc_j2: 0,
                    coeffs: vec![],
                },
            );
        }
        Self {
            m,
            s,
            rules: merged,
            anchors: vec![Exponent::zero(), Exponent::m_minus_s(m), Exponent::s()],
        }
    }

    /// `Δ − s(m−s)` on the mode `(p, q)` of the ball, written in the
    /// defining function `e^{c} x` where `kappa = e^{−c}`:
    /// leading rule `a(m−a) − s(m−s)`, raising rule `κ (a+p)(a+q)`.
    pub fn model(m: u32, p: u32, q: u32, s: T, kappa: T) -> Self {
        let mq = Rational::from(m);
        let sms = s.mul(&s.neg().add_rational(&mq));
        let lead = Rule {
            inc_j2: 0,
            coeffs: vec![sms.neg(), s.embed(&mq), s.embed(&Rational::from(-1))],
        };
        let raise = Rule {
            inc_j2: 2,
            coeffs: vec![
                kappa.scale(&Rational::from(p * q)),
                kappa.scale(&Rational::from(p + q)),
                kappa.clone(),
            ],
        };
        Self::new(m, s, vec![lead, raise])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> &T {
        &self.s
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn leading(&self) -> &Rule<T> {
        &self.rules[0]
    }

    /// Value of the indicial polynomial at exponent `a`.
    pub fn indicial(&self, a: &T) -> T {
        self.leading().eval(a)
    }

    /// Exponent value `base + j2/2` in the coefficient field.
    pub fn exponent_value(&self, base: &Exponent, j2: u32) -> T {
        base.value(&self.s).add_rational(&Rational::from((j2, 2)))
    }

    pub fn accepts(&self, base: &Exponent) -> bool {
        self.anchors.iter().any(|a| a.same_family(base))
    }

    pub(crate) fn check_base(&self, base: &Exponent) -> Result<()> {
        if self.accepts(base) {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "base exponent {base} is not in the family of 0, m - s or s"
            )))
        }
    }

    /// Image of a single term `c x^{base + j2/2} (log x)^k`, accumulated into `out`.
    pub(crate) fn apply_term(&self, out: &mut LogSeries<T>, j2: u32, k: u32, c: &T) {
        let a = self.exponent_value(out.base(), j2);
        for rule in &self.rules {
            for i in 0..=k {
                let d = rule.eval_derivative(&a, i);
                if d.is_zero() {
                    continue;
                }
                let w = d.scale(&binomial(k, i)).mul(c);
                out.add_to(j2 + rule.inc_j2, k - i, &w);
            }
        }
    }

    /// Applies the operator term by term; the truncation is preserved.
    pub fn apply(&self, u: &LogSeries<T>) -> Result<LogSeries<T>> {
        self.check_base(u.base())?;
        let mut out = LogSeries::new(u.base().clone(), u.trunc());
        for (j2, k, c) in u.terms() {
            self.apply_term(&mut out, j2, k, c);
        }
        Ok(out)
    }
}

/// Free-function form of [`GradedOperator::apply`].
pub fn apply_graded<T: Field>(op: &GradedOperator<T>, u: &LogSeries<T>) -> Result<LogSeries<T>> {
    op.apply(u)
}
