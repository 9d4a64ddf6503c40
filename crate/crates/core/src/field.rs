//! Coefficient fields shared by the series engine.
//!
//! The same recursion runs over exact rationals (concrete `s`), rational
//! functions of `s` (symbolic `s`) and multiprecision complex numbers
//! (contour samples). Constants are created with [`Field::embed`] on an
//! existing value so that context such as floating precision is inherited.

use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + Send + Sync {
    /// The rational `q` as an element of the same field (same precision).
    fn embed(&self, q: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_div(&self, other: &Self) -> Result<Self>;
    fn is_zero(&self) -> bool;

    /// Exact zero test for exact fields, `|self| < tol` for numeric ones.
    fn near_zero(&self, tol: f64) -> bool {
        let _ = tol;
        self.is_zero()
    }

    /// `e^q`, if representable in this field.
    fn exp_rational(&self, q: &Rational) -> Option<Self> {
        if *q == 0 {
            Some(self.one_like())
        } else {
            None
        }
    }

    /// Rendering used by the JSON debug dump.
    fn coeff_string(&self) -> String;

    fn zero_like(&self) -> Self {
        self.embed(&Rational::new())
    }

    fn one_like(&self) -> Self {
        self.embed(&Rational::from(1))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.mul(&self.embed(q))
    }

    fn add_rational(&self, q: &Rational) -> Self {
        self.add(&self.embed(q))
    }
}

impl Field for Rational {
    fn embed(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        if *other == 0 {
            return Err(Error::DivisionByZero("rational division"));
        }
        Ok(Rational::from(self / other))
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn coeff_string(&self) -> String {
        self.to_string()
    }
}

impl Field for Complex {
    fn embed(&self, q: &Rational) -> Self {
        Complex::with_val(self.prec(), q)
    }
    fn add(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self * other)
    }
    fn neg(&self) -> Self {
        Complex::with_val(self.prec(), -self)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.real().is_zero() && other.imag().is_zero() {
            return Err(Error::DivisionByZero("complex division"));
        }
        Ok(Complex::with_val(self.prec(), self / other))
    }
    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn near_zero(&self, tol: f64) -> bool {
        let a = Float::with_val(self.prec().0, self.abs_ref());
        a < tol
    }
    fn exp_rational(&self, q: &Rational) -> Option<Self> {
        let e = Float::with_val(self.prec().0, q).exp();
        Some(Complex::with_val(self.prec(), (e, 0)))
    }
    fn coeff_string(&self) -> String {
        let digits = crate::mp::digits_for_bits(self.prec().0);
        let re = crate::mp::float_string(self.real(), digits);
        let im = crate::mp::float_string(self.imag(), digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

impl Field for Float {
    fn embed(&self, q: &Rational) -> Self {
        Float::with_val(self.prec(), q)
    }
    fn add(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self * other)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero("float division"));
        }
        Ok(Float::with_val(self.prec(), self / other))
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn near_zero(&self, tol: f64) -> bool {
        Float::with_val(self.prec(), self.abs_ref()) < tol
    }
    fn exp_rational(&self, q: &Rational) -> Option<Self> {
        Some(Float::with_val(self.prec(), q).exp())
    }
    fn coeff_string(&self) -> String {
        crate::mp::float_string(self, crate::mp::digits_for_bits(self.prec()))
    }
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::new();
    }
    Rational::from(rug::Integer::from(n).binomial(k))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    Rational::from(rug::Integer::from(rug::Integer::factorial(n)))
}

/// `(-1)^m / (2 m! (m-1)!)`, the normalization constant of the residue formula.
pub fn c_m(m: u32) -> Rational {
    assert!(m >= 1, "c_m needs m >= 1");
    let den = Rational::from(2) * factorial(m) * factorial(m - 1);
    let sign = Rational::from(-1).pow(m as i32);
    sign / den
}
