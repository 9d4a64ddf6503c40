use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;

/// Default truncation, in half-grades (`x^{j/2}` with `j ≤ 30`).
pub const DEFAULT_TRUNC: u32 = 30;

/// Deepest power of `log x` any in-scope construction produces.
pub const MAX_LOG_DEPTH: u32 = 2;

/// A formal exponent `constant + s_coeff * s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub constant: Rational,
    pub s_coeff: Rational,
}

impl Exponent {
    pub fn zero() -> Self {
        Self::constant(Rational::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            constant: c,
            s_coeff: Rational::new(),
        }
    }

    /// `m - s`, the exponent of the Dirichlet data.
    pub fn m_minus_s(m: u32) -> Self {
        Self {
            constant: Rational::from(m),
            s_coeff: Rational::from(-1),
        }
    }

    /// `s`, the exponent of the scattered part.
    pub fn s() -> Self {
        Self {
            constant: Rational::new(),
            s_coeff: Rational::from(1),
        }
    }

    pub fn value<T: Field>(&self, s: &T) -> T {
        s.scale(&self.s_coeff).add_rational(&self.constant)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            constant: Rational::from(&self.constant + &other.constant),
            s_coeff: Rational::from(&self.s_coeff + &other.s_coeff),
        }
    }

    /// Exponent of `x^{self + j2/2}`.
    pub fn shifted(&self, j2: u32) -> Self {
        Self {
            constant: (&self.constant + Rational::from((j2, 2))),
            s_coeff: self.s_coeff.clone(),
        }
    }

    /// True when `other - self ∈ ½ℤ`.
    pub fn same_family(&self, other: &Self) -> bool {
        if self.s_coeff != other.s_coeff {
            return false;
        }
        let twice = Rational::from(&other.constant - &self.constant) * 2u32;
        twice.denom() == &1
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.constant;
        let d = &self.s_coeff;
        let s_part = if *d == 0 {
            String::new()
        } else if *d == 1 {
            "s".into()
        } else if *d == -1 {
            "-s".into()
        } else {
            format!("{d}*s")
        };
        match (*c == 0, s_part.is_empty()) {
            (true, true) => write!(f, "0"),
            (true, false) => write!(f, "{s_part}"),
            (false, true) => write!(f, "{c}"),
            (false, false) => {
                if let Some(rest) = s_part.strip_prefix('-') {
                    write!(f, "{c} - {rest}")
                } else {
                    write!(f, "{c} + {s_part}")
                }
            }
        }
    }
}

/// Truncated `x^base · Σ a_{j,k} x^{j/2} (log x)^k`.
///
/// Grades are stored doubled (`j2 = j`), so `j2 = 2i` is the integer
/// power `x^i`. Terms with `j2 > trunc` are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<T> {
    terms: BTreeMap<(u32, u32), T>,
    trunc: u32,
    base: Exponent,
}

#[derive(Serialize)]
struct TermDump {
    j2: u32,
    k: u32,
    coeff: String,
}

#[derive(Serialize)]
struct SeriesDump {
    terms: Vec<TermDump>,
    trunc: u32,
}

impl<T: Field> LogSeries<T> {
    pub fn new(base: Exponent, trunc: u32) -> Self {
        Self {
            terms: BTreeMap::new(),
            trunc,
            base,
        }
    }

    /// The constant `c` with base exponent 0.
    pub fn constant(c: T, trunc: u32) -> Self {
        let mut out = Self::new(Exponent::zero(), trunc);
        out.set(0, 0, c);
        out
    }

    /// `log x`, coefficients in the field of `one`.
    pub fn log_x(one: &T, trunc: u32) -> Self {
        let mut out = Self::new(Exponent::zero(), trunc);
        out.set(0, 1, one.one_like());
        out
    }

    /// `Σ coeffs[i] x^i`.
    pub fn from_powers(coeffs: &[T], trunc: u32) -> Self {
        let mut out = Self::new(Exponent::zero(), trunc);
        for (i, c) in coeffs.iter().enumerate() {
            out.set(2 * i as u32, 0, c.clone());
        }
        out
    }

    pub fn base(&self) -> &Exponent {
        &self.base
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn with_trunc(mut self, trunc: u32) -> Self {
        self.trunc = self.trunc.min(trunc);
        let t = self.trunc;
        self.terms.retain(|(j2, _), _| *j2 <= t);
        self
    }

    /// Sets the coefficient of `x^{base + j2/2} (log x)^k`; dropped beyond truncation.
    pub fn set(&mut self, j2: u32, k: u32, c: T) {
        if j2 > self.trunc {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&(j2, k));
        } else {
            self.terms.insert((j2, k), c);
        }
    }

    pub fn add_to(&mut self, j2: u32, k: u32, c: &T) {
        if j2 > self.trunc || c.is_zero() {
            return;
        }
        let next = match self.terms.get(&(j2, k)) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        self.set(j2, k, next);
    }

    pub fn coeff(&self, j2: u32, k: u32) -> Option<&T> {
        self.terms.get(&(j2, k))
    }

    pub fn coeff_or(&self, j2: u32, k: u32, zero: &T) -> T {
        self.coeff(j2, k).cloned().unwrap_or_else(|| zero.zero_like())
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &T)> {
        self.terms.iter().map(|((j2, k), c)| (*j2, *k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `log x` present (0 for an empty series).
    pub fn log_depth(&self) -> u32 {
        self.terms.keys().map(|(_, k)| *k).max().unwrap_or(0)
    }

    /// Lowest stored grade, if any.
    pub fn lowest_grade(&self) -> Option<u32> {
        self.terms.keys().map(|(j2, _)| *j2).min()
    }

    /// Any nonzero coefficient at an odd half-grade.
    pub fn assert_integer_grades(&self) -> Result<()> {
        match self.terms.keys().find(|(j2, _)| j2 % 2 == 1) {
            Some((j2, k)) => Err(Error::Contract(format!(
                "nonzero coefficient at odd half-grade j = {j2} (log power {k})"
            ))),
            None => Ok(()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::Contract(format!(
                "adding series with base exponents {} and {}",
                self.base, other.base
            )));
        }
        let mut out = Self::new(self.base.clone(), self.trunc.min(other.trunc));
        for (j2, k, c) in self.terms().chain(other.terms()) {
            out.add_to(j2, k, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::new(self.base.clone(), self.trunc);
        for (j2, k, c) in self.terms() {
            out.set(j2, k, c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::new(self.base.clone(), self.trunc);
        for (j2, k, v) in self.terms() {
            out.set(j2, k, v.mul(c));
        }
        out
    }

    /// Product; base exponents add and the truncation is the minimum.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::new(self.base.add(&other.base), trunc);
        for (ja, ka, a) in self.terms() {
            for (jb, kb, b) in other.terms() {
                if ja + jb > trunc {
                    continue;
                }
                out.add_to(ja + jb, ka + kb, &a.mul(b));
            }
        }
        out
    }

    /// Multiplies by `x^{j2/2}` keeping the base exponent.
    pub fn shift(&self, j2: u32) -> Self {
        let mut out = Self::new(self.base.clone(), self.trunc);
        for (j, k, c) in self.terms() {
            out.set(j + j2, k, c.clone());
        }
        out
    }

    /// Re-expresses the series relative to base exponent 0 when the base is
    /// a nonnegative half-integer constant.
    pub fn absorb_base(&self) -> Result<Self> {
        let twice = Rational::from(&self.base.constant * 2u32);
        if self.base.s_coeff != 0 || twice.denom() != &1 || twice < 0 {
            return Err(Error::Contract(format!(
                "cannot absorb base exponent {}",
                self.base
            )));
        }
        let shift = twice.numer().to_u32().expect("small exponent");
        let mut out = Self::new(Exponent::zero(), self.trunc + shift);
        for (j, k, c) in self.terms() {
            out.set(j + shift, k, c.clone());
        }
        Ok(out)
    }

    /// Coefficient of the pure power `x^{base + j2/2}` part restricted to the
    /// log-power `k` as an ordered list over integer grades.
    pub fn integer_coeffs(&self, k: u32, zero: &T) -> Vec<T> {
        (0..=self.trunc / 2)
            .map(|i| self.coeff_or(2 * i, k, zero))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dump = SeriesDump {
            terms: self
                .terms()
                .map(|(j2, k, c)| TermDump {
                    j2,
                    k,
                    coeff: c.coeff_string(),
                })
                .collect(),
            trunc: self.trunc,
        };
        serde_json::to_value(dump).expect("plain data")
    }
}

/// `log(1 + p(x))` for a series `p` without constant or log terms.
pub fn log_one_plus<T: Field>(p: &LogSeries<T>, one: &T) -> Result<LogSeries<T>> {
    if p.base != Exponent::zero() || p.log_depth() > 0 || p.coeff(0, 0).is_some() {
        return Err(Error::Contract(
            "log(1 + p) needs p without constant or log terms".into(),
        ));
    }
    // log(1+p) = Σ_{n≥1} (-1)^{n+1} p^n / n, finite because p = O(x^{1/2}).
    let mut out = LogSeries::new(Exponent::zero(), p.trunc);
    let mut power = p.clone();
    let mut n = 1u32;
    while !power.is_zero() {
        let mut c = Rational::from((1, n));
        if n.is_multiple_of(2) {
            c = -c;
        }
        out = out.add(&power.scale(&one.embed(&c)))?;
        power = power.mul(p);
        n += 1;
    }
    Ok(out)
}

/// `exp(p(x))` for a series without constant or log terms.
pub fn exp_series<T: Field>(p: &LogSeries<T>, one: &T) -> Result<LogSeries<T>> {
    if p.base != Exponent::zero() || p.log_depth() > 0 || p.coeff(0, 0).is_some() {
        return Err(Error::Contract(
            "exp(p) needs p without constant or log terms".into(),
        ));
    }
    let mut out = LogSeries::constant(one.one_like(), p.trunc);
    let mut term = LogSeries::constant(one.one_like(), p.trunc);
    let mut n = 1u32;
    loop {
        term = term.mul(p).scale(&one.embed(&Rational::from((1, n))));
        if term.is_zero() {
            break;
        }
        out = out.add(&term)?;
        n += 1;
    }
    Ok(out)
}
