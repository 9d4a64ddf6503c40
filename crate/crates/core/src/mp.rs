//! Multiprecision helpers on top of MPFR/MPC.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

/// Environment variable holding the default number of significant digits.
pub const DIGITS_ENV: &str = "CRSCATTER_DIGITS";

pub const DEFAULT_DIGITS: u32 = 40;

const GUARD_BITS: u32 = 32;

/// Working precision expressed in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self::from_env()
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Self { digits }
    }

    /// Reads [`DIGITS_ENV`], falling back to [`DEFAULT_DIGITS`].
    pub fn from_env() -> Self {
        let digits = std::env::var(DIGITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_DIGITS);
        Self { digits }
    }

    /// Mantissa bits including guard bits.
    pub fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    /// `10^-digits`, the relative accuracy target.
    pub fn epsilon(&self) -> Float {
        Float::with_val(self.bits(), Float::u_pow_u(10, self.digits)).recip()
    }

    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn rational(&self, q: &Rational) -> Float {
        Float::with_val(self.bits(), q)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits(), (re, im))
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }
}

pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

pub fn digits_for_bits(bits: u32) -> usize {
    ((bits.saturating_sub(GUARD_BITS)) as f64 / std::f64::consts::LOG2_10).floor() as usize
}

/// Deterministic scientific rendering with `digits` significant digits.
pub fn float_string(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(1)))
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// `x^e` for positive real `x` and complex exponent.
pub fn real_pow(x: &Float, e: &Complex) -> Complex {
    let prec = e.prec();
    let lx = Complex::with_val(prec, (x.clone().ln(), 0));
    Complex::with_val(prec, lx * e).exp()
}

/// Exact rational from a decimal string such as `0.3`, `-1e-2` or `3/10`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.contains('/') {
        return t.parse::<Rational>().ok();
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: rug::Integer = all.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let mut q = Rational::from(num);
    if scale >= 0 {
        q *= Rational::from(rug::Integer::from(10).pow(scale as u32));
    } else {
        q /= Rational::from(rug::Integer::from(10).pow((-scale) as u32));
    }
    if neg {
        q = -q;
    }
    Some(q)
}
