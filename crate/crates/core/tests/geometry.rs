use crscatter::geometry::{
    improve_defining_function, log_laplacian_defect, metric_matrix, verify_model_identities, ModelGeometry,
};
use crscatter::mp::Precision;
use crscatter::series::{Exponent, LogSeries};
use crscatter::Error;
use rug::{Complex, Rational};

/// Minimal complex arithmetic so the finite-difference oracle does not lean
/// on the crate.
#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn scale(self, k: f64) -> C {
        C(self.0 * k, self.1 * k)
    }
    fn conj(self) -> C {
        C(self.0, -self.1)
    }
    fn inv(self) -> C {
        let d = self.0 * self.0 + self.1 * self.1;
        C(self.0 / d, -self.1 / d)
    }
    fn norm(self) -> f64 {
        self.0.hypot(self.1)
    }
}

fn xval(z: &[C]) -> f64 {
    1.0 - z.iter().map(|v| v.0 * v.0 + v.1 * v.1).sum::<f64>()
}

/// `g_{jk̄} = −∂_j ∂_k̄ log x`, written out.
fn metric(z: &[C]) -> Vec<Vec<C>> {
    let x = xval(z);
    (0..z.len())
        .map(|j| {
            (0..z.len())
                .map(|k| {
                    let d = if j == k { 1.0 / x } else { 0.0 };
                    z[j].conj().mul(z[k]).scale(1.0 / (x * x)).add(C(d, 0.0))
                })
                .collect()
        })
        .collect()
}

/// Gauss–Jordan inverse with partial pivoting.
fn invert(mut a: Vec<Vec<C>>) -> Vec<Vec<C>> {
    let n = a.len();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| (0..n).map(|j| C(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm())).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col].inv();
        for j in 0..n {
            a[col][j] = a[col][j].mul(d);
            inv[col][j] = inv[col][j].mul(d);
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] = a[r][j].sub(f.mul(a[col][j]));
                    inv[r][j] = inv[r][j].sub(f.mul(inv[col][j]));
                }
            }
        }
    }
    inv
}

/// `Δu = −g^{k̄j} ∂_j ∂_k̄ u` by central differences in the real coordinates.
fn fd_laplacian(u: &dyn Fn(&[C]) -> C, z: &[C], h: f64) -> C {
    let n = z.len();
    let shift = |a: usize, da: f64, b: usize, db: f64| {
        let mut w = z.to_vec();
        let mut bump = |i: usize, d: f64| {
            let (j, im) = (i / 2, i % 2 == 1);
            if im {
                w[j].1 += d;
            } else {
                w[j].0 += d;
            }
        };
        bump(a, da);
        bump(b, db);
        u(&w)
    };
    let second = |a: usize, b: usize| {
        shift(a, h, b, h)
            .sub(shift(a, h, b, -h))
            .sub(shift(a, -h, b, h))
            .add(shift(a, -h, b, -h))
            .scale(1.0 / (4.0 * h * h))
    };
    let ginv = invert(metric(z));
    let mut out = C(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            // ∂_j ∂_k̄ = ¼[(∂x_j∂x_k + ∂y_j∂y_k) + i(∂x_j∂y_k − ∂y_j∂x_k)]
            let re = second(xj, xk).add(second(yj, yk));
            let im = second(xj, yk).sub(second(yj, xk));
            let dd = re.add(C(-im.1, im.0)).scale(0.25);
            out = out.sub(ginv[k][j].mul(dd));
        }
    }
    out
}

fn points(m: usize) -> Vec<Vec<C>> {
    let base = [C(0.3, 0.1), C(-0.2, 0.25), C(0.15, -0.3)];
    [0.2, 0.8, 1.0, 1.25]
        .iter()
        .map(|&r| base[..m].iter().map(|v| v.scale(r)).collect())
        .collect()
}

#[test]
fn metric_matches_written_out_form() {
    let z = [C(0.3, 0.1), C(-0.2, 0.25)];
    let zc: Vec<Complex> = z.iter().map(|v| Complex::with_val(128, (v.0, v.1))).collect();
    let (g, x) = metric_matrix(&zc);
    assert!((x.to_f64() - xval(&z)).abs() < 1e-15);
    let want = metric(&z);
    for j in 0..2 {
        for k in 0..2 {
            let got = C(g[j][k].real().to_f64(), g[j][k].imag().to_f64());
            assert!(got.sub(want[j][k]).norm() < 1e-13);
        }
    }
}

#[test]
fn laplacian_of_log_x_is_m() {
    for m in [2usize, 3] {
        for z in points(m) {
            let got = fd_laplacian(&|w| C(xval(w).ln(), 0.0), &z, 1e-4);
            assert!(got.sub(C(m as f64, 0.0)).norm() < 1e-5, "m={m}: {got:?}");
        }
    }
}

/// `(Δ − s(m−s))(f(x) z₁^p z̄₂^q)` by finite differences against the
/// radial operator applied to `f = x^a`.
#[test]
fn radial_reduction_matches_finite_differences() {
    let m = 2usize;
    let (a, s) = (1.7f64, 1.3f64);
    for (p, q) in [(0u32, 0u32), (1, 0), (1, 2), (2, 1)] {
        for z in points(m) {
            let u = |w: &[C]| {
                let mut h = C(xval(w).powf(a), 0.0);
                for _ in 0..p {
                    h = h.mul(w[0]);
                }
                for _ in 0..q {
                    h = h.mul(w[1].conj());
                }
                h
            };
            let shift = s * (m as f64 - s);
            let lhs = fd_laplacian(&u, &z, 1e-4).sub(u(&z).scale(shift));
            let x = xval(&z);
            let (f, f1, f2) = (x.powf(a), a * x.powf(a - 1.0), a * (a - 1.0) * x.powf(a - 2.0));
            let (pf, qf) = (p as f64, q as f64);
            let radial = -x * x * (1.0 - x) * f2 + x * ((m as f64 - 1.0) + (pf + qf + 1.0) * x) * f1
                + (pf * qf * x - shift) * f;
            let mut h = C(1.0, 0.0);
            for _ in 0..p {
                h = h.mul(z[0]);
            }
            for _ in 0..q {
                h = h.mul(z[1].conj());
            }
            let rhs = h.scale(radial);
            assert!(lhs.sub(rhs).norm() < 1e-5 * (1.0 + rhs.norm()), "({p},{q}): {lhs:?} vs {rhs:?}");
        }
    }
}

#[test]
fn model_identities_hold_with_and_without_rescale() {
    let prec = Precision::new(40);
    for m in [2u32, 3] {
        for c in [Rational::new(), Rational::from((3, 10)), Rational::from((-1, 2))] {
            let geom = ModelGeometry::with_conf_const(m, c).unwrap();
            let report = verify_model_identities(&geom, &prec).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[test]
fn improved_defining_function_for_x_times_one_plus_x() {
    // For m = 2 only the x¹ term of log(x̃/x) is forced: log(1+x) − x, so
    // x̃/x = (1+x)e^{−x} with x^k coefficient (−1)^k (1−k)/k!.
    let geom = ModelGeometry::new(2).unwrap();
    let trunc = 16;
    let xt = improve_defining_function(&geom, &LogSeries::from_powers(&[q(1, 1), q(1, 1)], trunc)).unwrap();
    let mut fact = Rational::from(1);
    for k in 0..=(trunc / 2) {
        if k > 0 {
            fact *= k;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let want = Rational::from(sign * (1 - k as i64)) / &fact;
        let got = xt.coeff_or(2 * k, 0, &Rational::new());
        assert_eq!(got, want, "x^{k}");
    }
    let defect = log_laplacian_defect(&geom, &xt).unwrap();
    assert!(defect.lowest_grade().is_none_or(|j| j >= 4));
    // The unimproved x(1+x) already fails at first order.
    let mut raw = LogSeries::new(Exponent::constant(q(1, 1)), trunc);
    raw.set(0, 0, q(1, 1));
    raw.set(2, 0, q(1, 1));
    let raw = log_laplacian_defect(&geom, &raw).unwrap();
    assert_eq!(raw.lowest_grade(), Some(2));
}

#[test]
fn improved_defining_function_for_m_three() {
    let geom = ModelGeometry::new(3).unwrap();
    let pert = LogSeries::from_powers(&[q(1, 1), q(2, 1), q(-1, 3)], 18);
    let xt = improve_defining_function(&geom, &pert).unwrap();
    assert_eq!(xt.coeff(0, 0), Some(&q(1, 1)));
    let defect = log_laplacian_defect(&geom, &xt).unwrap();
    assert!(defect.lowest_grade().is_none_or(|j| j >= 6));
}

#[test]
fn improvement_rejects_bad_input() {
    let geom = ModelGeometry::new(2).unwrap();
    let shifted = LogSeries::from_powers(&[q(3, 2)], 8);
    assert!(matches!(
        improve_defining_function(&geom, &shifted),
        Err(Error::Normalization(_))
    ));
}
