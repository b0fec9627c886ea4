use bfdx_core::numerics::{find_root, integrate, ln_choose, std_normal_cdf, Tolerance};
use proptest::prelude::*;

/// Composite Simpson rule with `panels` (even) subintervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let interior: f64 = (1..panels)
        .map(|i| {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(a + i as f64 * h)
        })
        .sum();
    (f(a) + interior + f(b)) * h / 3.0
}

fn polynomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

type Case = (&'static str, Box<dyn Fn(f64) -> f64>, f64, f64);

#[test]
fn integrate_agrees_with_dense_simpson() {
    let cases: [Case; 5] = [
        (
            "gaussian bump",
            Box::new(|x: f64| (-x * x / 2.0).exp()),
            -3.0,
            5.0,
        ),
        (
            "oscillatory",
            Box::new(|x: f64| (5.0 * x).sin() * x.cos() + 2.0),
            0.0,
            7.0,
        ),
        (
            "rational",
            Box::new(|x: f64| 1.0 / (1.0 + 25.0 * x * x)),
            -1.0,
            1.0,
        ),
        (
            "log-ish",
            Box::new(|x: f64| (1.0 + x).ln() * x.sqrt()),
            0.5,
            4.0,
        ),
        (
            "narrow peak",
            Box::new(|x: f64| (-(x - 0.3) * (x - 0.3) / 2e-4).exp()),
            0.0,
            1.0,
        ),
    ];
    for (name, f, a, b) in cases {
        let got = integrate(&f, a, b, &Tolerance::default()).unwrap();
        let oracle = simpson(&f, a, b, 1_000_000);
        assert!(
            (got - oracle).abs() <= 1e-8 * oracle.abs(),
            "{name}: {got} vs {oracle}"
        );
    }
}

#[test]
fn integrate_half_line_against_truncated_simpson() {
    // exp(-x) x^2 / 2 integrates to 1; beyond 60 the tail is below 1e-23.
    let f = |x: f64| (-x).exp() * x * x / 2.0;
    let got = integrate(f, 0.0, f64::INFINITY, &Tolerance::default()).unwrap();
    let oracle = simpson(f, 0.0, 60.0, 1_000_000);
    assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
    assert!((got - 1.0).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ln_choose_is_symmetric(n in 0u64..=10_000, frac in 0.0..=1.0f64) {
        let k = ((n as f64) * frac).round() as u64;
        prop_assert_eq!(ln_choose(n, k).unwrap(), ln_choose(n, n - k).unwrap());
    }

    #[test]
    fn normal_cdf_is_symmetric(z in -8.0..8.0f64) {
        let total = std_normal_cdf(z) + std_normal_cdf(-z);
        prop_assert!((total - 1.0).abs() <= 1e-12, "z={} total={}", z, total);
    }

    #[test]
    fn integrate_is_linear(
        f in prop::collection::vec(-5.0..5.0f64, 1..6),
        g in prop::collection::vec(-5.0..5.0f64, 1..6),
        alpha in -3.0..3.0f64,
        beta in -3.0..3.0f64,
        a in -2.0..0.0f64,
        width in 0.1..4.0f64,
    ) {
        let b = a + width;
        let tol = Tolerance::default();
        let combined = integrate(|x| alpha * polynomial(&f, x) + beta * polynomial(&g, x), a, b, &tol).unwrap();
        let separate = alpha * integrate(|x| polynomial(&f, x), a, b, &tol).unwrap()
            + beta * integrate(|x| polynomial(&g, x), a, b, &tol).unwrap();
        let scale = 1.0 + combined.abs().max(separate.abs());
        prop_assert!((combined - separate).abs() <= 1e-9 * scale, "{} vs {}", combined, separate);
    }

    #[test]
    fn find_root_brackets_a_sign_change(
        root in -5.0..5.0f64,
        slope in 0.1..10.0f64,
        curvature in 0.0..2.0f64,
    ) {
        // Strictly increasing cubic with a single real root.
        let f = |x: f64| slope * (x - root) + curvature * (x - root).powi(3);
        let tol = Tolerance::default();
        let x = find_root(f, -10.0, 10.0, &tol).unwrap();
        prop_assert!((x - root).abs() <= tol.abs_tol * 10.0, "x={} root={}", x, root);
        let step = tol.abs_tol * 10.0;
        prop_assert!(f(x - step) <= 0.0 && f(x + step) >= 0.0);
    }
}
