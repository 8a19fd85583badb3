use dstew::elliptic::{ellip_k, jacobi, make_profile, Profile, ProfileKind};

fn moduli() -> Vec<f64> {
    let mut ms: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
    ms.push(0.99);
    ms
}

#[test]
fn pythagorean_identities() {
    for m in moduli() {
        for k in -50..=50 {
            let s = k as f64 / 10.0;
            let j = jacobi(s, m);
            assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() <= 1e-12, "s={s} m={m}");
            assert!((j.dn * j.dn + m * m * j.sn * j.sn - 1.0).abs() <= 1e-12, "s={s} m={m}");
        }
    }
}

/// Gauss-Legendre-free oracle: composite Simpson on the defining integral.
fn k_quadrature(m: f64) -> f64 {
    let n = 20_000;
    let h = std::f64::consts::FRAC_PI_2 / n as f64;
    let f = |th: f64| 1.0 / (1.0 - m * m * th.sin().powi(2)).sqrt();
    let mut s = f(0.0) + f(std::f64::consts::FRAC_PI_2);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn complete_integral() {
    assert_eq!(ellip_k(0.0).unwrap(), std::f64::consts::FRAC_PI_2);
    for m in [0.3, 0.8, 0.95] {
        assert!((ellip_k(m).unwrap() - k_quadrature(m)).abs() < 1e-12, "m={m}");
    }
    assert!((ellip_k(0.8).unwrap() - 1.995303).abs() < 1e-6);
    assert!(ellip_k(1.0).is_err());
    assert!(ellip_k(-0.1).is_err());
}

#[test]
fn sn_period_and_limit() {
    for m in [0.2, 0.5, 0.9] {
        let k = ellip_k(m).unwrap();
        for s in [-2.0, 0.3, 1.7] {
            assert!((jacobi(s + 4.0 * k, m).sn - jacobi(s, m).sn).abs() <= 1e-10);
        }
    }
    let s = 0.8;
    let errs: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&m| (jacobi(s, m).sn - s.tanh()).abs()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    let j = jacobi(s, 1.0);
    assert!((j.sn - s.tanh()).abs() < 1e-15 && (j.cn - 1.0 / s.cosh()).abs() < 1e-15);
}

fn fd4(p: &Profile, s: f64, h: f64) -> f64 {
    let f = |x: f64| p.value(x);
    (-f(s + 2.0 * h) + 16.0 * f(s + h) - 30.0 * f(s) + 16.0 * f(s - h) - f(s - 2.0 * h)) / (12.0 * h * h)
}

/// Fourth-order differences at `h` and `h/2`, extrapolated.
fn fd2(p: &Profile, s: f64, h: f64) -> f64 {
    (16.0 * fd4(p, s, h / 2.0) - fd4(p, s, h)) / 15.0
}

#[test]
fn profile_signatures_by_finite_differences() {
    for kind in ProfileKind::ALL {
        for m in [0.3, 0.7] {
            let p = make_profile(kind.name(), m).unwrap();
            for k in -40..=40 {
                let s = k as f64 * 0.077 + 0.013;
                if !p.is_valid_at(s) || p.singularities.distance(s) < 0.3 {
                    continue;
                }
                let f = p.value(s);
                let rhs = p.p * f.powi(3) + p.q * f;
                let scale = 1.0 + f.abs().powi(3);
                let d = fd2(&p, s, 0.02 * p.singularities.distance(s).min(1.0));
                assert!((d - rhs).abs() <= 1e-9 * scale, "{kind} s={s} err={}", (d - rhs).abs() / scale);
                let [_, _, f2] = p.eval(s);
                assert!((f2 - rhs).abs() <= 1e-9 * scale, "{kind} s={s}");
            }
        }
    }
}

#[test]
fn printed_signatures() {
    let table = [
        ("rational", 2.0, 0.0),
        ("tan", 2.0, 2.0),
        ("sec", 2.0, -1.0),
        ("coth", 2.0, -2.0),
        ("csch", 2.0, 1.0),
    ];
    for (kind, p, q) in table {
        let prof = make_profile(kind, 0.0).unwrap();
        assert_eq!((prof.p, prof.q), (p, q), "{kind}");
    }
    let m = 0.6;
    let sn = make_profile("sn", m).unwrap();
    assert_eq!((sn.p, sn.q), (2.0 * m * m, -(1.0 + m * m)));
    assert!(make_profile("airy", 0.0).is_err());
    assert!(make_profile("dn", 1.0).is_err());
}
