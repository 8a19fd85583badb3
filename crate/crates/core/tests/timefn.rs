use dstew::timefn::{Jet3, TimeFunction};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("t".to_string()),
        (-2.0f64..2.0).prop_map(|c| format!("{c:.3}")),
    ]
}

/// Random trees whose every node is defined for all real `t`.
fn tree() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / (2 + cos({b}))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp(0.3*sin({a}))")),
            inner.clone().prop_map(|a| format!("ln(1.5 + sin({a}))")),
            inner.clone().prop_map(|a| format!("sinh(0.5*cos({a}))")),
            inner.clone().prop_map(|a| format!("cosh(0.5*sin({a}))")),
            inner.clone().prop_map(|a| format!("({a})^2")),
            inner.clone().prop_map(|a| format!("(2 + cos({a}))^0.5")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

fn close(fd: f64, exact: f64) -> bool {
    (fd - exact).abs() <= 1e-6 * (1.0 + exact.abs())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn jet_entries_match_differences(src in tree(), t in -1.5f64..1.5) {
        let f = TimeFunction::parse(&src).unwrap();
        let h = 1e-5;
        let (lo, mid, hi) = (f.eval_jet(t - h).unwrap(), f.eval_jet(t).unwrap(), f.eval_jet(t + h).unwrap());
        let lo = lo.as_array();
        let hi = hi.as_array();
        let mid_a = mid.as_array();
        for k in 0..3 {
            let fd = (hi[k] - lo[k]) / (2.0 * h);
            prop_assert!(close(fd, mid_a[k + 1]), "{src} at {t}: order {} fd={fd} jet={}", k + 1, mid_a[k + 1]);
        }
    }

    #[test]
    fn whitespace_is_insignificant(src in tree(), t in -1.0f64..1.0) {
        let squeezed: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let a = TimeFunction::parse(&src).unwrap().eval_jet(t).unwrap();
        let b = TimeFunction::parse(&squeezed).unwrap().eval_jet(t).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn symbolic_derivative_agrees_with_jet(src in tree(), t in -1.0f64..1.0) {
        let f = TimeFunction::parse(&src).unwrap();
        let j = f.eval_jet(t).unwrap();
        let d = f.derivative().eval_jet(t).unwrap();
        for (a, b) in [(d.value, j.d1), (d.d1, j.d2), (d.d2, j.d3)] {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{src}: {a} vs {b}");
        }
    }

    #[test]
    fn product_rule_is_leibniz(a in tree(), b in tree(), t in -1.0f64..1.0) {
        let (f, g) = (TimeFunction::parse(&a).unwrap(), TimeFunction::parse(&b).unwrap());
        let (jf, jg) = (f.eval_jet(t).unwrap(), g.eval_jet(t).unwrap());
        let prod = (&f * &g).eval_jet(t).unwrap();
        prop_assert_eq!(prod, jf * jg);
        let leibniz = Jet3::new(
            jf.value * jg.value,
            jf.d1 * jg.value + jf.value * jg.d1,
            jf.d2 * jg.value + 2.0 * jf.d1 * jg.d1 + jf.value * jg.d2,
            jf.d3 * jg.value + 3.0 * jf.d2 * jg.d1 + 3.0 * jf.d1 * jg.d2 + jf.value * jg.d3,
        );
        for (x, y) in prod.as_array().iter().zip(leibniz.as_array()) {
            prop_assert!((x - y).abs() <= 1e-14 * (1.0 + y.abs()));
        }
    }
}

#[test]
fn documented_examples() {
    let j = TimeFunction::parse("exp(2*t)").unwrap().eval_jet(0.0).unwrap();
    assert_eq!(j.as_array(), [1.0, 2.0, 4.0, 8.0]);
    let j = TimeFunction::parse("t^2").unwrap().eval_jet(3.0).unwrap();
    assert_eq!(j.as_array(), [9.0, 6.0, 2.0, 0.0]);
    let j = TimeFunction::parse("sin(t)").unwrap().eval_jet(0.0).unwrap();
    assert_eq!(j.as_array(), [0.0, 1.0, 0.0, -1.0]);
    let j = TimeFunction::parse("ln(t)").unwrap().eval_jet(2.0).unwrap();
    let want = [2f64.ln(), 0.5, -0.25, 0.25];
    for (a, b) in j.as_array().iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }
    let err = TimeFunction::parse("ln(").unwrap_err();
    assert!(err.to_string().contains("position 3"), "{err}");
    assert!(TimeFunction::parse("ln(0*t)").unwrap().eval_jet(1.0).is_err());
    assert!(TimeFunction::parse("foo(t)").is_err());
}
