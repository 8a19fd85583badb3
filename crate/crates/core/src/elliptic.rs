//! Jacobi elliptic functions, the complete elliptic integral of the first
//! kind, and the eight profile shapes used by the line-phase solutions.
//!
//! Throughout, `m` is the elliptic *modulus* (so the parameter is `m²`):
//! `sn(s|m)` solves `(sn')² = (1 − sn²)(1 − m² sn²)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distance (in profile-argument units) kept from every real pole.
pub const GUARD_RADIUS: f64 = 1e-3;

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("ConfigError: unknown profile kind `{0}`")]
    UnknownKind(String),
}

/// Complete elliptic integral of the first kind, `K(m) = ∫₀^{π/2} dθ/√(1 − m² sin²θ)`.
///
/// Computed as `π / (2·AGM(1, √(1 − m²)))`.
pub fn ellip_k(m: f64) -> Result<f64, EllipticError> {
    if !(0.0..1.0).contains(&m) {
        return Err(EllipticError::Domain(format!(
            "complete elliptic integral needs 0 <= m < 1, got {m}"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m * m).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (a + b))
}

/// The triple `(sn, cn, dn)` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Jacobi elliptic functions by the descending Landen (AGM) scheme.
///
/// The modulus is clamped to `[0, 1]`; the endpoints return the exact
/// trigonometric and hyperbolic limits.
pub fn jacobi(s: f64, m: f64) -> Jacobi {
    let m = m.clamp(0.0, 1.0);
    if m == 0.0 {
        return Jacobi {
            sn: s.sin(),
            cn: s.cos(),
            dn: 1.0,
        };
    }
    let comp = 1.0 - m * m;
    if comp <= 0.0 {
        let sech = 1.0 / s.cosh();
        return Jacobi {
            sn: s.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    let mut a = [0.0_f64; AGM_MAX_ITER + 1];
    let mut c = [0.0_f64; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = m;
    let mut b = comp.sqrt();
    let mut n = 0;
    while n < AGM_MAX_ITER && c[n].abs() > AGM_TOL * a[n] {
        let an = a[n];
        a[n + 1] = 0.5 * (an + b);
        c[n + 1] = 0.5 * (an - b);
        b = (an * b).sqrt();
        n += 1;
    }

    let mut phi = (1u64 << n) as f64 * a[n] * s;
    for k in (1..=n).rev() {
        let ratio = (c[k] / a[k] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + ratio.asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - m * m * sn * sn).max(0.0).sqrt();
    Jacobi { sn, cn, dn }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Rational,
    Tan,
    Sec,
    Coth,
    Csch,
    Sn,
    Cn,
    Dn,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 8] = [
        ProfileKind::Rational,
        ProfileKind::Tan,
        ProfileKind::Sec,
        ProfileKind::Coth,
        ProfileKind::Csch,
        ProfileKind::Sn,
        ProfileKind::Cn,
        ProfileKind::Dn,
    ];

    pub fn is_elliptic(self) -> bool {
        matches!(self, ProfileKind::Sn | ProfileKind::Cn | ProfileKind::Dn)
    }

    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::Rational => "rational",
            ProfileKind::Tan => "tan",
            ProfileKind::Sec => "sec",
            ProfileKind::Coth => "coth",
            ProfileKind::Csch => "csch",
            ProfileKind::Sn => "sn",
            ProfileKind::Cn => "cn",
            ProfileKind::Dn => "dn",
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileKind {
    type Err = EllipticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProfileKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| EllipticError::UnknownKind(s.to_string()))
    }
}

/// Real poles of a profile: representatives plus an optional spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Singularities {
    pub poles: Vec<f64>,
    pub spacing: Option<f64>,
}

impl Singularities {
    fn none() -> Self {
        Singularities {
            poles: Vec::new(),
            spacing: None,
        }
    }

    /// Distance from `s` to the nearest pole (`∞` when there are none).
    pub fn distance(&self, s: f64) -> f64 {
        self.poles
            .iter()
            .map(|&p| match self.spacing {
                Some(w) => {
                    let r = (s - p).rem_euclid(w);
                    r.min(w - r)
                }
                None => (s - p).abs(),
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// A shape function `f` with its cubic signature `f'' = p f³ + q f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub kind: ProfileKind,
    pub m: f64,
    pub p: f64,
    pub q: f64,
    pub singularities: Singularities,
    quarter_period: Option<f64>,
}

/// Build a profile from its textual kind name.
pub fn make_profile(kind: &str, m: f64) -> Result<Profile, EllipticError> {
    Profile::new(kind.parse()?, m)
}

impl Profile {
    pub fn new(kind: ProfileKind, m: f64) -> Result<Self, EllipticError> {
        let m = if kind.is_elliptic() {
            if !(0.0..1.0).contains(&m) {
                return Err(EllipticError::Domain(format!(
                    "{kind} profile needs modulus 0 <= m < 1, got {m}"
                )));
            }
            m
        } else {
            0.0
        };
        let m2 = m * m;
        let (p, q) = match kind {
            ProfileKind::Rational => (2.0, 0.0),
            ProfileKind::Tan => (2.0, 2.0),
            ProfileKind::Sec => (2.0, -1.0),
            ProfileKind::Coth => (2.0, -2.0),
            ProfileKind::Csch => (2.0, 1.0),
            ProfileKind::Sn => (2.0 * m2, -(1.0 + m2)),
            ProfileKind::Cn => (-2.0 * m2, 2.0 * m2 - 1.0),
            ProfileKind::Dn => (-2.0, 2.0 - m2),
        };
        let singularities = match kind {
            ProfileKind::Tan | ProfileKind::Sec => Singularities {
                poles: vec![FRAC_PI_2],
                spacing: Some(PI),
            },
            ProfileKind::Rational | ProfileKind::Coth | ProfileKind::Csch => Singularities {
                poles: vec![0.0],
                spacing: None,
            },
            _ => Singularities::none(),
        };
        let quarter_period = if kind.is_elliptic() {
            Some(ellip_k(m)?)
        } else {
            None
        };
        Ok(Profile {
            kind,
            m,
            p,
            q,
            singularities,
            quarter_period,
        })
    }

    /// Period along the argument, if the profile is periodic.
    pub fn period(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Tan => Some(PI),
            ProfileKind::Sec => Some(2.0 * PI),
            ProfileKind::Sn | ProfileKind::Cn => self.quarter_period.map(|k| 4.0 * k),
            ProfileKind::Dn => self.quarter_period.map(|k| 2.0 * k),
            _ => None,
        }
    }

    /// True when `s` is at least [`GUARD_RADIUS`] away from every pole.
    pub fn is_valid_at(&self, s: f64) -> bool {
        s.is_finite() && self.singularities.distance(s) > GUARD_RADIUS
    }

    pub fn value(&self, s: f64) -> f64 {
        self.eval(s)[0]
    }

    /// `[f, f', f'']` at `s`, each from closed-form derivatives (not the
    /// cubic signature).
    pub fn eval(&self, s: f64) -> [f64; 3] {
        match self.kind {
            ProfileKind::Rational => {
                let r = 1.0 / s;
                [r, -r * r, 2.0 * r * r * r]
            }
            ProfileKind::Tan => {
                let t = s.tan();
                let sec2 = 1.0 + t * t;
                [t, sec2, 2.0 * sec2 * t]
            }
            ProfileKind::Sec => {
                let c = s.cos();
                let sec = 1.0 / c;
                let tan = s.sin() / c;
                [sec, sec * tan, sec * tan * tan + sec * sec * sec]
            }
            ProfileKind::Coth => {
                let ct = 1.0 / s.tanh();
                let csch2 = ct * ct - 1.0;
                [ct, -csch2, 2.0 * csch2 * ct]
            }
            ProfileKind::Csch => {
                let cs = 1.0 / s.sinh();
                let ct = 1.0 / s.tanh();
                [cs, -cs * ct, cs * ct * ct + cs * cs * cs]
            }
            ProfileKind::Sn | ProfileKind::Cn | ProfileKind::Dn => {
                let Jacobi { sn, cn, dn } = jacobi(s, self.m);
                let m2 = self.m * self.m;
                match self.kind {
                    ProfileKind::Sn => [sn, cn * dn, -sn * dn * dn - m2 * sn * cn * cn],
                    ProfileKind::Cn => [cn, -sn * dn, -cn * dn * dn + m2 * sn * sn * cn],
                    _ => [dn, -m2 * sn * cn, -m2 * dn * (cn * cn - sn * sn)],
                }
            }
        }
    }

    /// `p f³ + q f`, the right-hand side of the cubic signature.
    pub fn signature_rhs(&self, f: f64) -> f64 {
        self.p * f * f * f + self.q * f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Composite Gauss-Legendre (8 nodes per panel) on the defining integral.
    fn quad_k(m: f64) -> f64 {
        let nodes = [
            (0.183_434_642_495_649_8, 0.362_683_783_378_362),
            (0.525_532_409_916_329, 0.313_706_645_877_887_3),
            (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
            (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
        ];
        let panels = 200;
        let h = FRAC_PI_2 / panels as f64;
        let mut sum = 0.0;
        for j in 0..panels {
            let mid = (j as f64 + 0.5) * h;
            for &(x, w) in &nodes {
                for sgn in [-1.0, 1.0] {
                    let th = mid + sgn * x * h / 2.0;
                    sum += w * h / 2.0 / (1.0 - m * m * th.sin().powi(2)).sqrt();
                }
            }
        }
        sum
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        assert_eq!(ellip_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_matches_quadrature() {
        for m in [0.1, 0.5, 0.8, 0.95] {
            assert_abs_diff_eq!(ellip_k(m).unwrap(), quad_k(m), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(ellip_k(0.8).unwrap(), 1.995_302_777_664_729, epsilon = 1e-12);
    }

    #[test]
    fn k_rejects_out_of_range() {
        assert!(matches!(ellip_k(1.0), Err(EllipticError::Domain(_))));
        assert!(matches!(ellip_k(-0.1), Err(EllipticError::Domain(_))));
    }

    #[test]
    fn origin_values() {
        for m in [0.0, 0.3, 0.99, 1.0] {
            let j = jacobi(0.0, m);
            assert_eq!((j.sn, j.cn, j.dn), (0.0, 1.0, 1.0));
        }
    }

    #[test]
    fn hyperbolic_limit_is_exact() {
        for s in [-2.0, 0.3, 1.7] {
            let j = jacobi(s, 1.0);
            assert_eq!(j.sn, f64::tanh(s));
            assert_eq!(j.cn, 1.0 / f64::cosh(s));
            assert_eq!(j.dn, 1.0 / f64::cosh(s));
        }
    }

    /// F(φ|m) by quadrature, then sn(F) must equal sin φ.
    #[test]
    fn sn_inverts_incomplete_integral() {
        let m = 0.7_f64;
        for phi in [0.2, 0.9, 1.4] {
            let n = 4000;
            let h = phi / n as f64;
            let g = |th: f64| 1.0 / (1.0 - m * m * f64::sin(th).powi(2)).sqrt();
            let mut f = g(0.0) + g(phi);
            for i in 1..n {
                f += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
            }
            f *= h / 3.0;
            let j = jacobi(f, m);
            assert_abs_diff_eq!(j.sn, phi.sin(), epsilon = 1e-11);
            assert_abs_diff_eq!(j.cn, phi.cos(), epsilon = 1e-11);
        }
    }

    #[test]
    fn sn_is_4k_periodic() {
        for m in [0.2, 0.5, 0.9] {
            let k = ellip_k(m).unwrap();
            for s in [-1.3, 0.0, 0.4, 2.2] {
                assert_abs_diff_eq!(jacobi(s + 4.0 * k, m).sn, jacobi(s, m).sn, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn approaches_tanh_monotonically() {
        for s in [0.5, 1.0, 2.5] {
            let errs: Vec<f64> = [0.9, 0.99, 0.999]
                .iter()
                .map(|&m| (jacobi(s, m).sn - s.tanh()).abs())
                .collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        }
    }

    #[test]
    fn signatures() {
        let tan = make_profile("tan", 0.0).unwrap();
        assert_eq!((tan.p, tan.q), (2.0, 2.0));
        let sn = make_profile("sn", 0.6).unwrap();
        assert_abs_diff_eq!(sn.p, 0.72, epsilon = 1e-15);
        assert_abs_diff_eq!(sn.q, -1.36, epsilon = 1e-15);
        let r = make_profile("rational", 0.0).unwrap();
        assert_eq!((r.p, r.q), (2.0, 0.0));
    }

    #[test]
    fn profile_errors() {
        assert!(matches!(make_profile("sinc", 0.0), Err(EllipticError::UnknownKind(_))));
        assert!(matches!(make_profile("cn", 1.0), Err(EllipticError::Domain(_))));
        // non-elliptic kinds ignore the modulus
        assert!(make_profile("tan", 7.0).is_ok());
    }

    #[test]
    fn pole_guard() {
        let tan = make_profile("tan", 0.0).unwrap();
        assert!(!tan.is_valid_at(FRAC_PI_2));
        assert!(!tan.is_valid_at(-FRAC_PI_2 + 5e-4));
        assert!(tan.is_valid_at(1.0));
        let coth = make_profile("coth", 0.0).unwrap();
        assert!(!coth.is_valid_at(0.0));
        assert!(coth.is_valid_at(-0.5));
        let dn = make_profile("dn", 0.5).unwrap();
        assert_eq!(dn.singularities.distance(3.0), f64::INFINITY);
    }

    #[test]
    fn periods() {
        let m = 0.5;
        let k = ellip_k(m).unwrap();
        assert_eq!(make_profile("sn", m).unwrap().period(), Some(4.0 * k));
        assert_eq!(make_profile("dn", m).unwrap().period(), Some(2.0 * k));
        assert_eq!(make_profile("tan", m).unwrap().period(), Some(PI));
        assert_eq!(make_profile("coth", m).unwrap().period(), None);
    }
}
