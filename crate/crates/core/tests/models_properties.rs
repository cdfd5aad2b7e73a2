use numdiff_core::models::{sample_model, CaseModel, LogisticModel, MarketModel, TemperatureModel};
use numdiff_core::stencil::{builtin_stencil, Accuracy, Family, Scheme};
use numdiff_core::{differentiate_series, BoundaryPolicy, Case};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn printed_closed_form_constants() {
    let m = LogisticModel::published();
    assert!(rel(m.p0() * m.p1(), -2.2226e6) < 5e-3);
    assert!(rel(m.p1() - m.p0(), -2.9286e4) < 5e-3);
    assert!(rel(m.a() * m.p1(), 0.0128) < 5e-3);
}

#[test]
fn five_point_estimate_on_logistic_is_fourth_order() {
    let m = LogisticModel::published();
    let s = builtin_stencil(Scheme::new(Family::Centered, Accuracy::High));
    let exact = m.rate_at(50.0).unwrap();
    // h large enough that truncation dominates rounding.
    let e1 = (s.try_estimate(|t| m.value_at(t), 50.0, 4.0).unwrap() - exact).abs();
    let e2 = (s.try_estimate(|t| m.value_at(t), 50.0, 2.0).unwrap() - exact).abs();
    let ratio = e1 / e2;
    assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    // C calibrated from the h = 2 error; h = 0.5 must sit under C·h⁴ up to rounding.
    let c = e2 / 2f64.powi(4);
    let e_half = (s.try_estimate(|t| m.value_at(t), 50.0, 0.5).unwrap() - exact).abs();
    assert!(e_half <= 1.5 * c * 0.5f64.powi(4) + 1e-12, "{e_half}");
}

#[test]
fn temperature_rate_matches_finite_difference() {
    let m = TemperatureModel::defaults();
    let s = builtin_stencil(Scheme::new(Family::Centered, Accuracy::High));
    let fd = s.estimate(|t| m.value_at(t), 6.0, 1e-4).unwrap();
    assert!(rel(fd, m.rate_at(6.0)) < 1e-6, "{fd} vs {}", m.rate_at(6.0));
}

#[test]
fn market_preset_closed_forms_agree() {
    let m = MarketModel::published();
    let direct = m.rate_at(10.0);
    let via_ode = m.ode_rhs(m.price_at(10.0));
    // The ODE form recovers ~1e-9 from prices near -3607; cancellation
    // limits agreement to about ε·3607/|D·e^(rt)|.
    assert!(rel(via_ode, direct) < 1e-4, "{via_ode} vs {direct}");
}

#[test]
fn backward_low_fallback_trace_on_logistic() {
    let m = LogisticModel::published();
    let values = sample_model(&m, 0.0, 120.0, 13).unwrap();
    let out = differentiate_series(&values, Scheme::new(Family::Backward, Accuracy::Low), BoundaryPolicy::Fallback)
        .unwrap();
    let forward = builtin_stencil(Scheme::new(Family::Forward, Accuracy::Low));
    let backward = builtin_stencil(Scheme::new(Family::Backward, Accuracy::Low));
    assert_eq!(out.stencil_at(0), Some(&forward));
    for i in 1..13 {
        assert_eq!(out.stencil_at(i), Some(&backward), "index {i}");
    }
    // Hand simulation of the first two outputs.
    let v = values.values();
    assert_eq!(out.series.values()[0], (v[1] - v[0]) / 10.0);
    assert_eq!(out.series.values()[1], (v[1] - v[0]) / 10.0);
    assert_eq!(out.series.values()[12], (v[12] - v[11]) / 10.0);
}

#[test]
fn residual_shrinks_with_step_above_rounding() {
    // Where truncation dominates (h = 2 → 1) the max residual falls ≈16×.
    let m = LogisticModel::published();
    let s = builtin_stencil(Scheme::new(Family::Centered, Accuracy::High));
    let max_residual = |h: f64| {
        (5..=115)
            .map(|t| {
                let t = f64::from(t);
                let est = s.try_estimate(|x| m.value_at(x), t, h).unwrap();
                rel(est, m.rate_at(t).unwrap())
            })
            .fold(0.0, f64::max)
    };
    let ratio = max_residual(2.0) / max_residual(1.0);
    assert!((10.0..=24.0).contains(&ratio), "{ratio}");
}

#[test]
fn models_are_deterministic() {
    for case in Case::ALL {
        let m = case.default_model();
        for t in [0.0, 1.5, 17.0] {
            assert_eq!(m.value(t).unwrap().to_bits(), m.value(t).unwrap().to_bits());
            assert_eq!(m.rate(t).unwrap().to_bits(), m.rate(t).unwrap().to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn market_rate_solves_its_ode(
        d in prop_oneof![-50.0f64..-1.0, 1.0f64..50.0],
        lambda in -5.0f64..5.0,
        a in -50.0f64..50.0,
        b in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
        c in -0.5f64..0.5,
        t in 0.0f64..5.0,
    ) {
        prop_assume!((c * lambda - 1.0).abs() > 0.1 && lambda.abs() > 0.05);
        let m = MarketModel::new(d, lambda, a, b, c).unwrap();
        // Keep the transient comparable to the equilibrium so the ODE form
        // is not a cancellation of two nearly equal prices.
        prop_assume!(d.abs() >= m.equilibrium_price().abs() && (m.exponent() * t).abs() <= 2.0);
        let direct = m.rate_at(t);
        let via_ode = m.ode_rhs(m.price_at(t));
        prop_assert!(rel(via_ode, direct) <= 1e-10, "{} vs {}", direct, via_ode);
    }

    #[test]
    fn logistic_starts_at_p0(a in 1e-6f64..1e-2, p1 in 10.0f64..1e4, frac in 0.01f64..0.99) {
        let m = LogisticModel::new(a, p1, frac * p1).unwrap();
        prop_assert!(rel(m.value_at(0.0).unwrap(), frac * p1) < 1e-12);
        prop_assert_eq!(m.singular_time(), None);
    }

    #[test]
    fn temperature_starts_at_t0(
        b1 in -20.0f64..20.0,
        b2 in -10.0f64..40.0,
        k1 in 0.01f64..2.0,
        omega in 0.0f64..2.0,
        t0 in 1.0f64..40.0,
    ) {
        let m = TemperatureModel::new(b1, b2, k1, omega, t0).unwrap();
        prop_assert!(rel(m.value_at(0.0), t0) < 1e-12);
        let r = omega / k1;
        for t in [0.0, 3.3, 10.0] {
            prop_assert!(m.f1(t).abs() <= (1.0 + r * r).powf(-0.5) * (1.0 + 1e-12));
        }
    }
}
