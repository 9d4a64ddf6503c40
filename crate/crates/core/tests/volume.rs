use crscatter::curvature::SpectralSettings;
use crscatter::geometry::{rescale, ModelGeometry};
use crscatter::mp::Precision;
use crscatter::volume::{
    check_renormalized_volume_identity, fit_expansion, renormalized_volume_identity, volume_of_sublevel, EpsGrid,
};
use crscatter::Error;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Rational;

/// `(2π)^m/(m−1)! ∫_ε^1 x^{−m−1}(1−x)^{m−1} dx` by exact rational
/// antiderivative of the binomially expanded integrand (m ≥ 2, so there is
/// no logarithm).
fn closed_form(m: u32, eps: &Rational) -> f64 {
    let mut total = Rational::new();
    let mut binom = Rational::from(1);
    for k in 0..m {
        let e = k as i32 - m as i32;
        let term = (Rational::from(1) - Rational::from(eps.pow(e))) / e;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        total += term * &binom * sign;
        binom = binom * (m - 1 - k) / (k + 1);
    }
    let fact: f64 = (1..m).map(f64::from).product();
    total.to_f64() * (2.0 * std::f64::consts::PI).powi(m as i32) / fact
}

/// Constant term of the exact expansion: `(2π)^m/(m−1)! Σ_k C(m−1,k)(−1)^k/(k−m)`.
fn closed_form_v(m: u32) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for k in 0..m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binom / (k as f64 - m as f64);
        binom = binom * (m - 1 - k) as f64 / (k + 1) as f64;
    }
    let fact: f64 = (1..m).map(f64::from).product();
    total * (2.0 * std::f64::consts::PI).powi(m as i32) / fact
}

#[test]
fn sublevel_volume_against_closed_form() {
    let prec = Precision::new(40);
    for m in [2u32, 3, 4] {
        let geom = ModelGeometry::new(m).unwrap();
        for eps in [(1, 3), (1, 50), (7, 10000)] {
            let eps = Rational::from(eps);
            let got = volume_of_sublevel(&geom, &prec.rational(&eps), &prec).unwrap().to_f64();
            let want = closed_form(m, &eps);
            assert!((got - want).abs() <= 1e-13 * want.abs(), "m={m}: {got} vs {want}");
        }
    }
}

#[test]
fn renormalized_volume_matches_closed_form() {
    let prec = Precision::new(40);
    for m in [2u32, 3] {
        let geom = ModelGeometry::new(m).unwrap();
        let e = fit_expansion(&geom, &EpsGrid::default().values(&prec), &prec).unwrap();
        let v = closed_form_v(m);
        assert!((e.v - v).abs() < 1e-8 * v.abs(), "m={m}: {} vs {v}", e.v);
        assert!(e.log_coeff.abs() < 1e-6 * v.abs());
    }
    assert!((closed_form_v(2) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
}

#[test]
fn volume_vanishes_at_top_of_range() {
    let prec = Precision::new(40);
    let geom = ModelGeometry::new(2).unwrap();
    let near = prec.rational(&Rational::from((999_999, 1_000_000)));
    let v = volume_of_sublevel(&geom, &near, &prec).unwrap().to_f64();
    assert!(v > 0.0 && v < 1e-9);
}

#[test]
fn volume_domain_errors() {
    let prec = Precision::new(40);
    let geom = ModelGeometry::new(2).unwrap();
    for bad in [Rational::new(), Rational::from(-1), Rational::from(1), Rational::from(2)] {
        assert!(matches!(
            volume_of_sublevel(&geom, &prec.rational(&bad), &prec),
            Err(Error::Domain(_))
        ));
    }
    // After rescaling the range grows to (0, e^c).
    let hat = rescale(&geom, &Rational::from((1, 2)));
    assert!(volume_of_sublevel(&hat, &prec.rational(&Rational::from((3, 2))), &prec).is_ok());
}

#[test]
fn volume_stable_under_grid_changes() {
    let prec = Precision::new(40);
    let geom = ModelGeometry::new(2).unwrap();
    let base = fit_expansion(&geom, &EpsGrid::default().values(&prec), &prec).unwrap();
    let wider = EpsGrid {
        points: 32,
        log10_max: -1.2,
        log10_min: -4.0,
    };
    let other = fit_expansion(&geom, &wider.values(&prec), &prec).unwrap();
    assert!((base.v - other.v).abs() < 1e-6 * base.v.abs());
}

#[test]
fn volume_invariant_under_constant_rescale() {
    let prec = Precision::new(40);
    let geom = ModelGeometry::new(3).unwrap();
    let hat = rescale(&geom, &Rational::from((3, 10)));
    let grid = EpsGrid::default().values(&prec);
    let a = fit_expansion(&geom, &grid, &prec).unwrap();
    let b = fit_expansion(&hat, &grid, &prec).unwrap();
    // No log term in the model, so V does not move.
    assert!((a.v - b.v).abs() < 1e-6 * a.v.abs());
    // The leading coefficient scales as e^{mc}.
    let ratio = b.b[0] / a.b[0];
    assert!((ratio - (0.9f64).exp()).abs() < 1e-8);
}

#[test]
fn identity_for_m_three() {
    let settings = SpectralSettings::with_digits(40);
    let geom = ModelGeometry::new(3).unwrap();
    let id = renormalized_volume_identity(&geom, &settings, &EpsGrid::default()).unwrap();
    assert!(id.relative_deviation < 1e-5, "{id:?}");
    assert!(id.pi_integral == 0.0);
    let report = check_renormalized_volume_identity(&geom, &settings, &EpsGrid::default(), 1e-6).unwrap();
    assert!(report.passed());
}

#[test]
fn grid_must_be_usable() {
    let prec = Precision::new(40);
    let geom = ModelGeometry::new(3).unwrap();
    let narrow = EpsGrid {
        points: 24,
        log10_max: -1.0,
        log10_min: -2.0,
    };
    assert!(matches!(fit_expansion(&geom, &narrow.values(&prec), &prec), Err(Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volume_decreases_in_eps(a in 1u32..500, b in 1u32..500, m in 2u32..5) {
        prop_assume!(a != b);
        let prec = Precision::new(30);
        let geom = ModelGeometry::new(m).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let vlo = volume_of_sublevel(&geom, &prec.rational(&Rational::from((lo, 1000))), &prec).unwrap();
        let vhi = volume_of_sublevel(&geom, &prec.rational(&Rational::from((hi, 1000))), &prec).unwrap();
        prop_assert!(vlo > vhi);
    }
}
