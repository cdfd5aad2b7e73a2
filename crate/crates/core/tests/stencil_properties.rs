use num_rational::Ratio;
use numdiff_core::stencil::{builtin_stencil, generate_stencil, theoretical_order, Scheme, Stencil};
use numdiff_core::Rational;
use proptest::prelude::*;

fn factorial(n: u32) -> i128 {
    (1..=i128::from(n)).product()
}

fn pow(base: Rational, exp: u32) -> Rational {
    (0..exp).fold(Rational::from_integer(1), |acc, _| acc * base)
}

/// Checks every moment condition directly from the definition.
fn assert_moments(s: &Stencil) {
    let d = s.derivative_order();
    let p = s.accuracy_order();
    let moment = |m: u32| -> Rational {
        s.offsets()
            .iter()
            .zip(s.coefficients())
            .map(|(&o, c)| *c * pow(Rational::from_integer(i128::from(o)), m))
            .sum()
    };
    for m in 0..d {
        assert_eq!(moment(m), Rational::from_integer(0), "{s}: moment {m}");
    }
    assert_eq!(moment(d), Rational::from_integer(factorial(d)), "{s}: moment {d}");
    for m in d + 1..d + p {
        assert_eq!(moment(m), Rational::from_integer(0), "{s}: moment {m}");
    }
    assert_ne!(moment(d + p), Rational::from_integer(0), "{s}: order not maximal");
}

/// `Σ_k a_k x^k` and its `d`-th derivative, evaluated exactly.
fn poly(coeffs: &[i128], x: Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::from_integer(0), |acc, &a| acc * x + Rational::from_integer(a))
}

fn poly_derivative(coeffs: &[i128], d: u32, x: Rational) -> Rational {
    let deriv: Vec<i128> = coeffs
        .iter()
        .enumerate()
        .skip(d as usize)
        .map(|(k, &a)| a * (0..d as i128).map(|j| k as i128 - j).product::<i128>())
        .collect();
    poly(&deriv, x)
}

fn exact_estimate(s: &Stencil, coeffs: &[i128], x: Rational, h: Rational) -> Rational {
    let sum: Rational = s
        .offsets()
        .iter()
        .zip(s.coefficients())
        .map(|(&o, c)| *c * poly(coeffs, x + Rational::from_integer(i128::from(o)) * h))
        .sum();
    sum / pow(h, s.derivative_order())
}

fn offsets_strategy() -> impl Strategy<Value = (Vec<i32>, u32)> {
    proptest::sample::subsequence((-4..=4).collect::<Vec<i32>>(), 2..=9).prop_flat_map(|offsets| {
        let max_d = (offsets.len() as u32 - 1).min(3);
        (Just(offsets), 1..=max_d)
    })
}

#[test]
fn builtins_satisfy_moment_conditions() {
    for scheme in Scheme::ALL {
        assert_moments(&builtin_stencil(scheme));
    }
}

#[test]
fn generator_reproduces_builtins() {
    for scheme in Scheme::ALL {
        let builtin = builtin_stencil(scheme);
        let span: Vec<i32> = (builtin.min_offset()..=builtin.max_offset()).collect();
        let from_span = generate_stencil(&span, 1).unwrap().without_zero_coefficients();
        assert_eq!(from_span, builtin, "{scheme} over full span");
        let from_offsets = generate_stencil(builtin.offsets(), 1).unwrap();
        assert_eq!(from_offsets, builtin, "{scheme} over own offsets");
    }
}

#[test]
fn second_derivative_three_point() {
    let s = generate_stencil(&[0, 1, 2], 2).unwrap();
    assert_eq!(
        s.coefficients(),
        &[Ratio::from_integer(1), Ratio::from_integer(-2), Ratio::from_integer(1)]
    );
    assert_eq!(theoretical_order(&s).unwrap(), 1);
    let c = generate_stencil(&[-1, 0, 1], 2).unwrap();
    assert_eq!(c.accuracy_order(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_stencils_satisfy_moments((offsets, d) in offsets_strategy()) {
        let s = generate_stencil(&offsets, d).unwrap();
        assert_moments(&s);
        prop_assert_eq!(theoretical_order(&s).unwrap(), s.accuracy_order());
        prop_assert!(s.offsets().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generated_stencils_are_exact_on_polynomials(
        (offsets, d) in offsets_strategy(),
        raw in proptest::collection::vec(-5i128..=5, 12),
        x in -3i128..=3,
        k in 1i128..=4,
    ) {
        let s = generate_stencil(&offsets, d).unwrap();
        let degree = (s.derivative_order() + s.accuracy_order() - 1) as usize;
        let coeffs = &raw[..=degree.min(raw.len() - 1)];
        let x = Rational::from_integer(x);
        let h = Ratio::new(1, k);
        prop_assert_eq!(exact_estimate(&s, coeffs, x, h), poly_derivative(coeffs, d, x));
    }

    #[test]
    fn one_degree_too_many_breaks_exactness((offsets, d) in offsets_strategy()) {
        let s = generate_stencil(&offsets, d).unwrap();
        let degree = (s.derivative_order() + s.accuracy_order()) as usize;
        let mut coeffs = vec![0i128; degree + 1];
        coeffs[degree] = 1;
        let x = Rational::from_integer(0);
        let h = Rational::from_integer(1);
        prop_assert_ne!(exact_estimate(&s, &coeffs, x, h), poly_derivative(&coeffs, d, x));
    }

    #[test]
    fn linearity(
        idx in 0usize..6,
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        x in -2.0f64..2.0,
        h in 1e-3f64..0.5,
    ) {
        let s = builtin_stencil(Scheme::ALL[idx]);
        let f = |t: f64| t.sin();
        let g = |t: f64| (0.5 * t).exp();
        let combined = s.estimate(|t| alpha * f(t) + beta * g(t), x, h).unwrap();
        let separate = alpha * s.estimate(f, x, h).unwrap() + beta * s.estimate(g, x, h).unwrap();
        let scale = alpha.abs() * s.estimate(f, x, h).unwrap().abs()
            + beta.abs() * s.estimate(g, x, h).unwrap().abs();
        // Rounding in f(t)·α + g(t)·β is amplified by Σ|c|/h.
        let amplification = 1.0 + 2.0 / h;
        prop_assert!((combined - separate).abs() <= 1e-12 * scale.max(1.0) * amplification);
    }

    #[test]
    fn translation_invariance(
        idx in 0usize..6,
        xi in -64i32..64,
        ai in -64i32..64,
        hexp in 1i32..6,
    ) {
        // Dyadic x, a and h keep every abscissa exact in f64.
        let s = builtin_stencil(Scheme::ALL[idx]);
        let x = f64::from(xi) / 8.0;
        let a = f64::from(ai) / 8.0;
        let h = 2f64.powi(-hexp);
        let f = |t: f64| t * t * t - 2.0 * t;
        let direct = s.estimate(f, x, h).unwrap();
        let shifted = s.estimate(|t| f(t + a), x - a, h).unwrap();
        prop_assert_eq!(direct.to_bits(), shifted.to_bits());
    }
}
