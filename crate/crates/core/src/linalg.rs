//! Small dense linear algebra at multiprecision.

use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Solves `a x = b` by Gaussian elimination with partial pivoting and
/// returns `(x, det a)`.
pub fn complex_solve(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>) -> Result<(Vec<Complex>, Complex)> {
    let n = b.len();
    let prec = b[0].prec();
    let mut det = Complex::with_val(prec, 1);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                let ai = Float::with_val(prec.0, a[i][col].abs_ref());
                let aj = Float::with_val(prec.0, a[j][col].abs_ref());
                ai.partial_cmp(&aj).expect("finite entries")
            })
            .expect("nonempty range");
        if a[pivot][col].real().is_zero() && a[pivot][col].imag().is_zero() {
            return Err(Error::DivisionByZero("singular complex system"));
        }
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
            det = -det;
        }
        det *= &a[col][col];
        for row in (col + 1)..n {
            let f = Complex::with_val(prec, &a[row][col] / &a[col][col]);
            for k in col..n {
                let t = Complex::with_val(prec, &f * &a[col][k]);
                a[row][k] -= t;
            }
            let t = Complex::with_val(prec, &f * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Complex::new(prec); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            acc -= Complex::with_val(prec, &a[row][k] * &x[k]);
        }
        x[row] = Complex::with_val(prec, acc / &a[row][row]);
    }
    Ok((x, det))
}

/// Least-squares solution of an overdetermined real system.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: Vec<Float>,
    /// Euclidean norm of `a x − b`.
    pub residual: Float,
    /// Ratio of extreme diagonal entries of `R` after column equilibration.
    pub condition: f64,
}

/// Householder QR least squares; columns are equilibrated first.
pub fn least_squares(a: &[Vec<Float>], b: &[Float]) -> Result<LeastSquares> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if rows < cols || cols == 0 {
        return Err(Error::Contract(format!(
            "least squares needs rows >= cols > 0, got {rows} x {cols}"
        )));
    }
    let prec = b[0].prec();
    let mut scale = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut n2 = Float::new(prec);
        for row in a {
            n2 += Float::with_val(prec, row[j].square_ref());
        }
        let n = n2.sqrt();
        if n.is_zero() {
            return Err(Error::DivisionByZero("zero column in least squares"));
        }
        scale.push(n);
    }
    let mut m: Vec<Vec<Float>> = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(&scale)
                .map(|(v, s)| Float::with_val(prec, v / s))
                .collect()
        })
        .collect();
    let mut rhs: Vec<Float> = b.to_vec();

    for k in 0..cols {
        let mut norm2 = Float::new(prec);
        for row in m.iter().skip(k) {
            norm2 += Float::with_val(prec, row[k].square_ref());
        }
        let norm = norm2.sqrt();
        if norm.is_zero() {
            return Err(Error::DivisionByZero("rank-deficient least squares"));
        }
        let alpha = if m[k][k].is_sign_negative() {
            norm
        } else {
            -norm
        };
        let mut v: Vec<Float> = m.iter().skip(k).map(|row| row[k].clone()).collect();
        v[0] -= &alpha;
        let mut vn2 = Float::new(prec);
        for x in &v {
            vn2 += Float::with_val(prec, x.square_ref());
        }
        if vn2.is_zero() {
            continue;
        }
        for j in k..cols {
            let mut dot = Float::new(prec);
            for (i, vi) in v.iter().enumerate() {
                dot += Float::with_val(prec, vi * &m[k + i][j]);
            }
            let f = Float::with_val(prec, dot * 2u32 / &vn2);
            for (i, vi) in v.iter().enumerate() {
                m[k + i][j] -= Float::with_val(prec, vi * &f);
            }
        }
        let mut dot = Float::new(prec);
        for (i, vi) in v.iter().enumerate() {
            dot += Float::with_val(prec, vi * &rhs[k + i]);
        }
        let f = Float::with_val(prec, dot * 2u32 / &vn2);
        for (i, vi) in v.iter().enumerate() {
            rhs[k + i] -= Float::with_val(prec, vi * &f);
        }
    }

    let mut y = vec![Float::new(prec); cols];
    for row in (0..cols).rev() {
        let mut acc = rhs[row].clone();
        for k in (row + 1)..cols {
            acc -= Float::with_val(prec, &m[row][k] * &y[k]);
        }
        y[row] = Float::with_val(prec, acc / &m[row][row]);
    }
    let mut res2 = Float::new(prec);
    for r in rhs.iter().skip(cols) {
        res2 += Float::with_val(prec, r.square_ref());
    }
    let diag: Vec<f64> = (0..cols).map(|i| m[i][i].to_f64().abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let x = y
        .into_iter()
        .zip(&scale)
        .map(|(v, s)| Float::with_val(prec, v / s))
        .collect();
    Ok(LeastSquares {
        x,
        residual: res2.sqrt(),
        condition: dmax / dmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_solve_two_by_two() {
        let p = 128;
        let c = |re: f64, im: f64| Complex::with_val(p, (re, im));
        let a = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]];
        let x_true = vec![c(1.0, 2.0), c(-0.5, 0.25)];
        let b: Vec<Complex> = a
            .iter()
            .map(|row| {
                Complex::with_val(p, &row[0] * &x_true[0]) + Complex::with_val(p, &row[1] * &x_true[1])
            })
            .collect();
        let (x, det) = complex_solve(a, b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!(Float::with_val(p, Complex::with_val(p, u - v).abs_ref()) < 1e-30);
        }
        // det = 6 − (1 + i)(−i) = 6 + i − 1 ... = 5 + i
        let d = Complex::with_val(p, &det - c(5.0, 1.0));
        assert!(Float::with_val(p, d.abs_ref()) < 1e-30);
    }

    #[test]
    fn least_squares_recovers_polynomial() {
        let p = 200;
        let xs: Vec<f64> = (0..10).map(|i| i as f64 / 3.0).collect();
        let a: Vec<Vec<Float>> = xs
            .iter()
            .map(|&x| {
                let x = Float::with_val(p, x);
                let x2 = Float::with_val(p, x.square_ref());
                vec![Float::with_val(p, 1), x, x2]
            })
            .collect();
        let b: Vec<Float> = xs
            .iter()
            .map(|&x| {
                let x = Float::with_val(p, x);
                let x2 = Float::with_val(p, x.square_ref());
                Float::with_val(p, 1.5) - x * 2u32 + x2 / 4u32
            })
            .collect();
        let ls = least_squares(&a, &b).unwrap();
        assert!((ls.x[0].to_f64() - 1.5).abs() < 1e-14);
        assert!((ls.x[1].to_f64() + 2.0).abs() < 1e-14);
        assert!((ls.x[2].to_f64() - 0.25).abs() < 1e-14);
        assert!(ls.residual.to_f64() < 1e-40);
    }
}
