//! Gauss–Legendre quadrature at arbitrary precision.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

impl GaussLegendre {
    /// `n`-point rule by Newton iteration on `P_n` at `prec` bits.
    pub fn new(n: usize, prec: u32) -> Self {
        let pi = Float::with_val(prec, Constant::Pi);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
        for i in 0..n {
            // Chebyshev-like initial guess for the i-th root.
            let mut x = Float::with_val(prec, (&pi * Float::with_val(prec, 4 * i + 3)) / (4 * n + 2) as u32).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, &x);
                let step = Float::with_val(prec, &p / &d);
                x -= &step;
                if step.abs() < tol {
                    break;
                }
            }
            let (_, dp) = legendre(n, &x);
            let one_minus = Float::with_val(prec, 1 - Float::with_val(prec, x.square_ref()));
            let w = Float::with_val(prec, 2u32 / (one_minus * Float::with_val(prec, dp.square_ref())));
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f`.
    pub fn integrate<F: Fn(&Float) -> Float>(&self, a: &Float, b: &Float, f: &F) -> Float {
        let prec = a.prec();
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, b + a) / 2u32;
        let mut acc = Float::new(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = Float::with_val(prec, &half * x) + &mid;
            acc += Float::with_val(prec, w * f(&t));
        }
        acc * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(prec, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let num = Float::with_val(prec, x * &p1) - &p0;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    let d = num / den * n as u32;
    (p1, d)
}

/// Adaptive integration over `[a, b]` with geometric panels refined toward
/// `a`, which suits integrands with a singularity just left of `a`.
pub struct PanelQuadrature {
    fine: GaussLegendre,
    coarse: GaussLegendre,
    max_depth: u32,
}

impl PanelQuadrature {
    pub fn new(prec: u32) -> Self {
        Self {
            fine: GaussLegendre::new(40, prec),
            coarse: GaussLegendre::new(30, prec),
            max_depth: 40,
        }
    }

    /// Integral with an absolute-plus-relative tolerance `tol` per panel.
    /// Returns the value and the accumulated error estimate.
    pub fn integrate<F: Fn(&Float) -> Float>(
        &self,
        a: &Float,
        b: &Float,
        tol: &Float,
        f: &F,
    ) -> Result<(Float, Float)> {
        let prec = a.prec();
        if a >= b {
            return Ok((Float::new(prec), Float::new(prec)));
        }
        let mut total = Float::new(prec);
        let mut err = Float::new(prec);
        let mut lo = a.clone();
        while lo < *b {
            let mut hi = Float::with_val(prec, &lo * 2u32);
            if hi > *b || lo.is_zero() {
                hi = b.clone();
            }
            let (v, e) = self.panel(&lo, &hi, tol, f, 0)?;
            total += v;
            err += e;
            lo = hi;
        }
        Ok((total, err))
    }

    fn panel<F: Fn(&Float) -> Float>(
        &self,
        a: &Float,
        b: &Float,
        tol: &Float,
        f: &F,
        depth: u32,
    ) -> Result<(Float, Float)> {
        let prec = a.prec();
        let hi = self.fine.integrate(a, b, f);
        let lo = self.coarse.integrate(a, b, f);
        let diff = Float::with_val(prec, &hi - &lo).abs();
        let scale = Float::with_val(prec, hi.abs_ref()).max(&Float::with_val(prec, 1));
        if diff <= Float::with_val(prec, tol * &scale) {
            return Ok((hi, diff));
        }
        if depth >= self.max_depth {
            return Err(Error::Precision(format!(
                "quadrature did not converge on [{}, {}]",
                a.to_f64(),
                b.to_f64()
            )));
        }
        let mid = Float::with_val(prec, a + b) / 2u32;
        let (v1, e1) = self.panel(a, &mid, tol, f, depth + 1)?;
        let (v2, e2) = self.panel(&mid, b, tol, f, depth + 1)?;
        Ok((v1 + v2, e1 + e2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(10, 200);
        let a = Float::with_val(200, 0);
        let b = Float::with_val(200, 1);
        let v = gl.integrate(&a, &b, &|x: &Float| Float::with_val(200, x.pow(19u32)));
        let err = (v - Float::with_val(200, 1) / 20u32).abs();
        assert!(err < 1e-55);
    }

    #[test]
    fn geometric_panels_handle_steep_integrands() {
        let prec = 200;
        let q = PanelQuadrature::new(prec);
        let a = Float::with_val(prec, 1e-4);
        let b = Float::with_val(prec, 1);
        let tol = Float::with_val(prec, 1e-45);
        let (v, _) = q
            .integrate(&a, &b, &tol, &|x: &Float| Float::with_val(prec, x.pow(-3i32)))
            .unwrap();
        // ∫ x^-3 = (a^-2 − 1)/2
        let exact = (Float::with_val(prec, (&a).pow(-2i32)) - 1u32) / 2u32;
        assert!(Float::with_val(prec, (v - &exact) / exact).abs() < 1e-40);
    }
}
