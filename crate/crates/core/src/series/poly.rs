//! Dense univariate polynomials in the spectral parameter `s` over ℚ.

use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Integer, Rational};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    /// Ascending coefficients; no trailing zeros.
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    /// The indeterminate `s`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::new(), Rational::from(1)])
    }

    /// `a + b s`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    /// `s - r`.
    pub fn root_factor(r: &Rational) -> Self {
        Self::linear(Rational::from(-r), Rational::from(1))
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::new();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                Rational::from(a + b)
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| Rational::from(c * q)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= s;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, s: &Complex) -> Complex {
        let mut acc = Complex::new(s.prec());
        for c in self.coeffs.iter().rev() {
            acc *= s;
            acc += c;
        }
        acc
    }

    /// Value at an element of any coefficient field.
    pub fn eval_field<T: crate::field::Field>(&self, s: &T) -> T {
        let mut acc = s.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(s).add_rational(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    /// Synthetic division by `s - r`: returns (quotient, remainder).
    pub fn div_root(&self, r: &Rational) -> (Self, Rational) {
        if self.coeffs.is_empty() {
            return (Self::zero(), Rational::new());
        }
        let n = self.coeffs.len();
        let mut q = vec![Rational::new(); n - 1];
        let mut carry = Rational::new();
        for i in (0..n).rev() {
            let v = Rational::from(&self.coeffs[i] + &carry);
            if i == 0 {
                return (Self::from_coeffs(q), v);
            }
            carry = Rational::from(&v * r);
            q[i - 1] = v;
        }
        unreachable!()
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero("polynomial division"))?;
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::new(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = Rational::from(r.last().unwrap() / &lead);
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= Rational::from(&f * c);
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|c| *c == 0) {
                r.pop();
            }
        }
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.scale(&Rational::from(lead.recip_ref()))
    }

    /// Coefficients of `t ↦ self(r + t)`.
    pub fn taylor_shift(&self, r: &Rational) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut p = self.clone();
        while !p.is_zero() {
            let (q, rem) = p.div_root(r);
            out.push(rem);
            p = q;
        }
        out
    }

    /// Splits off every rational root (with multiplicity). Returns the roots
    /// and the cofactor that has no rational roots.
    pub fn split_rational_roots(&self) -> (Vec<(Rational, u32)>, Self) {
        let mut roots: Vec<(Rational, u32)> = Vec::new();
        let mut p = self.clone();
        let push = |r: Rational, roots: &mut Vec<(Rational, u32)>| {
            if let Some(e) = roots.iter_mut().find(|(x, _)| *x == r) {
                e.1 += 1;
            } else {
                roots.push((r, 1));
            }
        };
        loop {
            match p.degree() {
                None | Some(0) => break,
                Some(1) => {
                    let r = -Rational::from(&p.coeffs[0] / &p.coeffs[1]);
                    p = Self::constant(p.leading());
                    push(r, &mut roots);
                    break;
                }
                _ => {}
            }
            if p.coeffs[0] == 0 {
                p = p.div_root(&Rational::new()).0;
                push(Rational::new(), &mut roots);
                continue;
            }
            match p.find_rational_root() {
                Some(r) => {
                    p = p.div_root(&r).0;
                    push(r, &mut roots);
                }
                None => break,
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, p)
    }

    /// Primitive integer coefficients proportional to `self`.
    fn primitive_integer(&self) -> Vec<Integer> {
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&lcm / c.denom()))
            .collect();
        let mut g = Integer::new();
        for c in &ints {
            g.gcd_mut(c);
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    fn find_rational_root(&self) -> Option<Rational> {
        let ints = self.primitive_integer();
        if ints.len() == 3 {
            // a + b s + c s^2: roots rational iff the discriminant is a square.
            let (a, b, c) = (&ints[0], &ints[1], &ints[2]);
            let disc = Integer::from(b * b) - Integer::from(4) * Integer::from(a * c);
            if disc < 0 || !disc.is_perfect_square() {
                return None;
            }
            let sq = disc.sqrt();
            let r = Rational::from((Integer::from(-b) + sq, Integer::from(2) * c));
            return Some(r);
        }
        let a0 = ints.first()?.clone().abs();
        let an = ints.last()?.clone().abs();
        let bound = Integer::from(10).pow(12);
        if a0 > bound || an > bound {
            return None;
        }
        let ps = divisors(&a0);
        let qs = divisors(&an);
        for q in &qs {
            for p in &ps {
                for sign in [1, -1] {
                    let cand = Rational::from((Integer::from(p * sign), q.clone()));
                    if self.eval(&cand) == 0 {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}


fn divisors(n: &Integer) -> Vec<Integer> {
    let n = n.to_u64().expect("bounded by 1e12");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(Integer::from(d));
            if d * d != n {
                large.push(Integer::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "s")?,
                (1, false) => write!(f, "{mag}*s")?,
                (_, true) => write!(f, "s^{i}")?,
                (_, false) => write!(f, "{mag}*s^{i}")?,
            }
        }
        Ok(())
    }
}
