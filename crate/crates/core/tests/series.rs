use crscatter::geometry::{radial_ode, rescale, ModeSpec, ModelGeometry};
use crscatter::scattering::{gjms_eigenvalue_exact, gjms_eigenvalue_log_route, poisson_family};
use crscatter::series::{
    indicial_factor, solve_order_by_order, solve_with_source, Exponent, LogSeries, MeromorphicScalar,
};
use crscatter::Error;
use proptest::prelude::*;
use rug::{Integer, Rational};

/// `(a)_k`, the rising factorial.
fn rising(a: u32, k: u32) -> Integer {
    (0..k).fold(Integer::from(1), |acc, i| acc * (a + i))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::from((n, d)))
}

#[test]
fn indicial_factor_values() {
    let q = |n: i64, d: i64| Rational::from((n, d));
    assert_eq!(indicial_factor(2, &q(2, 1), 4), 0);
    assert_eq!(indicial_factor(2, &q(2, 1), 2), 1);
    assert_eq!(indicial_factor(2, &q(3, 2), 1), q(1, 4));
}

/// Hypergeometric connection: the GJMS eigenvalue on `H_{p,q}` is `(p)_m (q)_m`.
#[test]
fn gjms_matches_rising_factorials() {
    for m in [2u32, 3, 4] {
        for mode in ModeSpec::grid(3, m - 1) {
            let want = Rational::from(rising(mode.p, m) * rising(mode.q, m));
            assert_eq!(gjms_eigenvalue_exact(mode, m).unwrap(), want, "m={m} {mode:?}");
            assert_eq!(gjms_eigenvalue_log_route(mode, m).unwrap(), want, "m={m} {mode:?}");
        }
    }
}

#[test]
fn constant_mode_at_s_equal_m_is_trivial() {
    let geom = ModelGeometry::new(3).unwrap();
    let op = radial_ode(&geom, ModeSpec::new(0, 0, 2)).to_graded(&Rational::from(3)).unwrap();
    let sol = solve_order_by_order(&op, &Rational::from(1), 16).unwrap();
    assert_eq!(sol.f.terms().count(), 1);
    assert_eq!(sol.f.coeff(0, 0), Some(&Rational::from(1)));
    assert!(sol.g.is_zero());
}

#[test]
fn single_pole_at_m() {
    let family = poisson_family(2, ModeSpec::new(1, 1, 1), 4).unwrap();
    assert_eq!(family[4].pole_order(&Rational::from(2)), 1);
    for p in &family {
        assert!(p.pole_set().iter().all(|(_, order)| *order == 1));
    }
}

#[test]
fn resonance_is_exact() {
    let geom = ModelGeometry::new(2).unwrap();
    let op = radial_ode(&geom, ModeSpec::new(1, 1, 1)).to_graded(&Rational::from((7, 4))).unwrap();
    match solve_order_by_order(&op, &Rational::from(1), 8) {
        Err(Error::Resonance { k, .. }) => assert_eq!(k, 3),
        other => panic!("expected a resonance, got {other:?}"),
    }
    // Just off the resonance the recursion goes through.
    let op = radial_ode(&geom, ModeSpec::new(1, 1, 1))
        .to_graded(&(Rational::from((7, 4)) + Rational::from((1, 1 << 30))))
        .unwrap();
    assert!(solve_order_by_order(&op, &Rational::from(1), 8).is_ok());
}

/// The constant source `m` with seed `log x` needs no correction on the ball.
#[test]
fn source_solution_on_the_ball() {
    let m = 2;
    let geom = ModelGeometry::new(m).unwrap();
    let op = radial_ode(&geom, ModeSpec::new(0, 0, 1)).to_graded(&Rational::from(m)).unwrap();
    let one = Rational::from(1);
    let sol = solve_with_source(
        &op,
        &LogSeries::constant(Rational::from(m), 12),
        &LogSeries::log_x(&one, 12),
        12,
    )
    .unwrap();
    assert!(sol.a.is_zero());
    assert!(sol.b.is_zero());
}

/// A grade-`k` perturbation of the source is inverted by the grade-`k`
/// indicial factor at `s = m`.
#[test]
fn source_perturbation_inverts_indicial_factor() {
    let m = 3u32;
    let geom = ModelGeometry::new(m).unwrap();
    let s = Rational::from(m);
    let op = radial_ode(&geom, ModeSpec::new(0, 0, 2)).to_graded(&s).unwrap();
    let one = Rational::from(1);
    for k in 1..m {
        let mut source = LogSeries::constant(Rational::from(m), 2 * k);
        source.set(2 * k, 0, one.clone());
        let sol = solve_with_source(&op, &source, &LogSeries::log_x(&one, 2 * k), 2 * k).unwrap();
        // the base exponent m − s vanishes at s = m, so grade 2k sees the factor at j = 2k
        let factor = indicial_factor(m, &s, 2 * k);
        assert_eq!(sol.a.coeff(2 * k, 0).cloned().unwrap(), one.clone() / factor);
    }
}

#[test]
fn base_mismatch_is_a_contract_error() {
    let one = Rational::from(1);
    let a = LogSeries::constant(one.clone(), 8);
    let mut b = LogSeries::new(Exponent::s(), 8);
    b.set(0, 0, one);
    assert!(matches!(a.add(&b), Err(Error::Contract(_))));
}

#[test]
fn json_dump_shape() {
    let s = LogSeries::from_powers(&[Rational::from(1), Rational::from((1, 2))], 6);
    let v = s.to_json();
    assert_eq!(v["trunc"], 6);
    assert_eq!(v["terms"][1]["j2"], 2);
    assert_eq!(v["terms"][1]["coeff"], "1/2");
}

#[test]
fn symbolic_family_evaluates_to_concrete_recursion() {
    let geom = ModelGeometry::new(2).unwrap();
    let mode = ModeSpec::new(2, 1, 1);
    let family = poisson_family(2, mode, 8).unwrap();
    let s = Rational::from((13, 7));
    let op = radial_ode(&geom, mode).to_graded(&s).unwrap();
    let sol = solve_order_by_order(&op, &Rational::from(1), 8).unwrap();
    for (j, p) in family.iter().enumerate() {
        assert_eq!(p.eval(&s).unwrap(), sol.f.coeff_or(j as u32, 0, &Rational::new()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solve_is_linear_in_boundary_value(c in rational(), p in 0u32..3, q in 0u32..3) {
        let geom = ModelGeometry::new(2).unwrap();
        let s = Rational::from((17, 5));
        let op = radial_ode(&geom, ModeSpec::new(p, q, 1)).to_graded(&s).unwrap();
        let one = solve_order_by_order(&op, &Rational::from(1), 10).unwrap();
        let scaled = solve_order_by_order(&op, &c, 10).unwrap();
        prop_assert_eq!(scaled.f, one.f.scale(&c));
    }

    #[test]
    fn truncation_is_the_minimum(t1 in 2u32..20, t2 in 2u32..20, a in rational(), b in rational()) {
        let x = LogSeries::from_powers(&[Rational::from(1), a], t1);
        let y = LogSeries::from_powers(&[Rational::from(1), b], t2);
        prop_assert_eq!(x.mul(&y).trunc(), t1.min(t2));
        prop_assert_eq!(x.add(&y).unwrap().trunc(), t1.min(t2));
    }

    #[test]
    fn mode_symmetry(p in 0u32..5, q in 0u32..5, m in 2u32..5) {
        let geom = ModelGeometry::new(m).unwrap();
        let a = radial_ode(&geom, ModeSpec::new(p, q, m - 1));
        let b = radial_ode(&geom, ModeSpec::new(q, p, m - 1));
        prop_assert!(a == b);
        prop_assert_eq!(
            gjms_eigenvalue_exact(ModeSpec::new(p, q, m - 1), m).unwrap(),
            gjms_eigenvalue_exact(ModeSpec::new(q, p, m - 1), m).unwrap()
        );
    }

    #[test]
    fn rescale_composes(a in rational(), b in rational(), m in 2u32..5) {
        let g = ModelGeometry::new(m).unwrap();
        prop_assert_eq!(rescale(&rescale(&g, &a), &b), rescale(&g, &(a.clone() + &b)));
    }

    #[test]
    fn indicial_consistency(m in 2u32..5, p in 0u32..4, q in 0u32..4, j in 0u32..5) {
        let geom = ModelGeometry::new(m).unwrap();
        let s = MeromorphicScalar::s();
        let op = radial_ode(&geom, ModeSpec::new(p, q, m - 1)).to_graded(&s).unwrap();
        let a = Exponent::m_minus_s(m).shifted(j).value(&s);
        prop_assert_eq!(op.indicial(&a), indicial_factor(m, &s, j));
    }
}
