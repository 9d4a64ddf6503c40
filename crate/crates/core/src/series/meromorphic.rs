//! Rational functions of the spectral parameter with a tracked pole set.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Rational};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::field::Field;

/// `num(s) / Π (s - r)^k`.
///
/// The denominator is kept fully factored over ℚ. Every arithmetic
/// operation cancels common factors exactly, so `poles` always lists the
/// true poles with their orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeromorphicScalar {
    num: Poly,
    poles: BTreeMap<Rational, u32>,
}

/// Laurent expansion `Σ_{i ≥ 0} coeffs[i] (s - center)^(lowest + i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentExpansion {
    pub center: Rational,
    pub lowest: i32,
    pub coeffs: Vec<Rational>,
}

impl LaurentExpansion {
    /// Coefficient of `(s - center)^power`.
    pub fn coeff(&self, power: i32) -> Rational {
        let idx = power - self.lowest;
        if idx < 0 {
            return Rational::new();
        }
        self.coeffs.get(idx as usize).cloned().unwrap_or_default()
    }
}

impl MeromorphicScalar {
    pub fn constant(q: Rational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn from_poly(num: Poly) -> Self {
        Self {
            num,
            poles: BTreeMap::new(),
        }
    }

    /// The spectral parameter `s` itself.
    pub fn s() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator `Π (s - r)^k` expanded.
    pub fn denominator(&self) -> Poly {
        self.poles
            .iter()
            .fold(Poly::one(), |acc, (r, k)| acc.mul(&Poly::root_factor(r).pow(*k)))
    }

    /// Poles with their orders, ascending by location.
    pub fn pole_set(&self) -> Vec<(Rational, u32)> {
        self.poles.iter().map(|(r, k)| (r.clone(), *k)).collect()
    }

    pub fn pole_order(&self, at: &Rational) -> u32 {
        self.poles.get(at).copied().unwrap_or(0)
    }

    fn normalized(mut num: Poly, mut poles: BTreeMap<Rational, u32>) -> Self {
        if num.is_zero() {
            return Self::from_poly(num);
        }
        for (r, k) in poles.iter_mut() {
            while *k > 0 {
                let (q, rem) = num.div_root(r);
                if rem != 0 {
                    break;
                }
                num = q;
                *k -= 1;
            }
        }
        poles.retain(|_, k| *k > 0);
        Self { num, poles }
    }

    fn add_impl(&self, other: &Self) -> Self {
        let mut poles = self.poles.clone();
        for (r, k) in &other.poles {
            let e = poles.entry(r.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        let lift = |x: &Self| {
            poles.iter().fold(x.num.clone(), |acc, (r, k)| {
                let missing = k - x.pole_order(r);
                acc.mul(&Poly::root_factor(r).pow(missing))
            })
        };
        let num = lift(self).add(&lift(other));
        Self::normalized(num, poles)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let mut poles = self.poles.clone();
        for (r, k) in &other.poles {
            *poles.entry(r.clone()).or_insert(0) += k;
        }
        Self::normalized(self.num.mul(&other.num), poles)
    }

    fn div_impl(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZero("meromorphic division"));
        }
        let (roots, rest) = other.num.split_rational_roots();
        if rest.degree() != Some(0) {
            return Err(Error::NonSplitting(other.num.to_string()));
        }
        let lead = rest.leading();
        let mut poles = self.poles.clone();
        for (r, k) in roots {
            *poles.entry(r).or_insert(0) += k;
        }
        let num = other
            .poles
            .iter()
            .fold(self.num.clone(), |acc, (r, k)| {
                acc.mul(&Poly::root_factor(r).pow(*k))
            })
            .scale(&Rational::from(lead.recip_ref()));
        Ok(Self::normalized(num, poles))
    }

    /// Exact value at a point that is not a pole.
    pub fn eval(&self, s: &Rational) -> Result<Rational> {
        if self.poles.contains_key(s) {
            return Err(Error::Domain(format!("evaluation at the pole s = {s}")));
        }
        let den = self.denominator().eval(s);
        Ok(self.num.eval(s) / den)
    }

    /// Numeric value at a complex point.
    pub fn eval_complex(&self, s: &Complex) -> Complex {
        let den = self.denominator().eval_complex(s);
        Complex::with_val(s.prec(), self.num.eval_complex(s) / den)
    }

    /// Laurent expansion at `center` with `count` coefficients, starting from
    /// the most singular power.
    pub fn laurent_at(&self, center: &Rational, count: usize) -> LaurentExpansion {
        let order = self.pole_order(center);
        // g(t) = num(c + t) / Π_{r ≠ c} (c - r + t)^k as a truncated series.
        let mut g: Vec<Rational> = self.num.taylor_shift(center);
        g.resize(count.max(g.len()), Rational::new());
        g.truncate(count);
        for (r, k) in &self.poles {
            if r == center {
                continue;
            }
            let d = Rational::from(center - r);
            // (d + t)^{-1} = Σ (-1)^i t^i / d^{i+1}
            let inv: Vec<Rational> = (0..count)
                .map(|i| {
                    let mut v = Rational::from(d.recip_ref()).pow(i as i32 + 1);
                    if i % 2 == 1 {
                        v = -v;
                    }
                    v
                })
                .collect();
            for _ in 0..*k {
                g = series_mul(&g, &inv, count);
            }
        }
        LaurentExpansion {
            center: center.clone(),
            lowest: -(order as i32),
            coeffs: g,
        }
    }

    /// Coefficient of `(s - at)^{-1}`.
    pub fn residue(&self, at: &Rational) -> Rational {
        let order = self.pole_order(at) as usize;
        if order == 0 {
            return Rational::new();
        }
        self.laurent_at(at, order).coeff(-1)
    }
}


fn series_mul(a: &[Rational], b: &[Rational], count: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); count];
    for (i, x) in a.iter().enumerate().take(count) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(count - i) {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

impl Field for MeromorphicScalar {
    fn embed(&self, q: &Rational) -> Self {
        Self::constant(q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self.add_impl(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add_impl(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }
    fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            poles: self.poles.clone(),
        }
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        self.div_impl(other)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn coeff_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MeromorphicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poles.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (i, (r, k)) in self.poles.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            let factor = if *r == 0 {
                "s".to_string()
            } else if *r < 0 {
                format!("(s + {})", Rational::from(-r))
            } else {
                format!("(s - {r})")
            };
            if *k == 1 {
                write!(f, "{factor}")?;
            } else {
                write!(f, "{factor}^{k}")?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn lin(a: i64, b: i64) -> MeromorphicScalar {
        MeromorphicScalar::from_poly(Poly::linear(q(a, 1), q(b, 1)))
    }

    #[test]
    fn cancellation_removes_poles() {
        // (s - 2) / ((s - 2)(s - 3)) = 1 / (s - 3)
        let a = lin(-2, 1);
        let b = lin(-2, 1).mul(&lin(-3, 1));
        let r = a.try_div(&b).unwrap();
        assert_eq!(r.pole_set(), vec![(q(3, 1), 1)]);
        assert_eq!(r.numerator(), &Poly::one());
    }

    #[test]
    fn residue_of_simple_and_double_poles() {
        // 1/((s-2)(s-4)) has residue -1/2 at 2.
        let f = MeromorphicScalar::constant(q(1, 1))
            .try_div(&lin(-2, 1).mul(&lin(-4, 1)))
            .unwrap();
        assert_eq!(f.residue(&q(2, 1)), q(-1, 2));
        // s/(s-1)^2 = 1/(s-1) + 1/(s-1)^2: residue 1.
        let g = MeromorphicScalar::s()
            .try_div(&lin(-1, 1).mul(&lin(-1, 1)))
            .unwrap();
        assert_eq!(g.pole_order(&q(1, 1)), 2);
        assert_eq!(g.residue(&q(1, 1)), q(1, 1));
        let l = g.laurent_at(&q(1, 1), 3);
        assert_eq!(l.coeff(-2), q(1, 1));
        assert_eq!(l.coeff(0), q(0, 1));
    }

    #[test]
    fn sums_share_denominators() {
        let a = MeromorphicScalar::constant(q(1, 1)).try_div(&lin(-1, 1)).unwrap();
        let b = MeromorphicScalar::constant(q(-1, 1)).try_div(&lin(-1, 1)).unwrap();
        assert!(a.add(&b).is_zero());
        assert!(a.add(&b).pole_set().is_empty());
    }

    #[test]
    fn evaluation_at_pole_is_rejected() {
        let a = MeromorphicScalar::constant(q(1, 1)).try_div(&lin(-1, 2)).unwrap();
        assert_eq!(a.pole_set(), vec![(q(1, 2), 1)]);
        assert!(a.eval(&q(1, 2)).is_err());
        assert_eq!(a.eval(&q(1, 1)).unwrap(), q(1, 1));
    }
}
