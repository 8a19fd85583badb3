//! Families with a linear transport profile `ϑ = aϖ₁ + bϖ₂ + c`.
//!
//! Both are built by the same pipeline: quadratic phase, exact transport
//! amplitude, `v` read off the profile equation, and the mean-flow
//! constraint fixing how `α` and `β` are related.

use std::sync::Arc;

use num_complex::Complex64;

use super::{CatalogError, Fields, PointValue, Provenance, Solution, Variant, MIN_RATE};
use crate::ansatz::{QuadPhase, Theta, TransportAmplitude};
use crate::timefn::TimeFunction;
use crate::variant::Sign;

struct LinearProfile {
    variant: Variant,
    amplitude: TransportAmplitude,
    /// `ℑ'`, which must stay positive (family A only).
    rate: Option<TimeFunction>,
}

impl LinearProfile {
    fn rate_ok(&self, t: f64) -> Result<(), CatalogError> {
        let Some(rate) = &self.rate else {
            return Ok(());
        };
        let r = rate.value(t)?;
        if r > MIN_RATE {
            Ok(())
        } else {
            Err(CatalogError::Validity(format!(
                "parameter function must be increasing: derivative {r} at t = {t}"
            )))
        }
    }
}

impl Fields for LinearProfile {
    fn eval(&self, t: f64, x: f64, y: f64) -> PointValue {
        if self.rate_ok(t).is_err() {
            return PointValue::invalid();
        }
        let Ok(st) = self.amplitude.phase.at(t) else {
            return PointValue::invalid();
        };
        let eps1 = self.variant.eps1;
        let xi = self.amplitude.eval_with(&st, x, y);
        let u = Complex64::from_polar(xi, st.phase(x, y));
        let v = -st.quadratic_potential(eps1, x, y) - self.variant.e2() * xi * xi;
        PointValue::new(u, v)
    }

    fn check_time(&self, t: f64) -> Result<(), CatalogError> {
        self.rate_ok(t)?;
        self.amplitude.phase.at(t)?;
        Ok(())
    }
}

fn linear_theta(a: f64, b: f64, c: f64) -> Theta {
    Arc::new(move |w1, w2| a * w1 + b * w2 + c)
}

/// Constant transport profile `ϑ = c` driven by an increasing `ℑ(t)`.
///
/// The mean-flow constraint is solved by `β = −¼ ln ℑ' − ε₁ℑ/2`,
/// `α = ℑ + ε₁β`, which gives `|u| = c√ℑ'` and
/// `φ = [(2ℑ'² − ε₁ℑ'')x² − (2ε₁ℑ'² + ℑ'')y²] / (4ℑ')`.
pub fn family_a(variant: Variant, im: TimeFunction, c: f64) -> Solution {
    let e1 = variant.e1();
    let rate = im.derivative();
    let beta = -(rate.ln() * 0.25) - im.scale(e1 / 2.0);
    let alpha = &im + &beta.scale(e1);
    let amplitude = TransportAmplitude::new(
        variant.eps1,
        QuadPhase::new(alpha, beta),
        linear_theta(0.0, 0.0, c),
    );
    let provenance = Provenance::new("A").param("Im", &im).param("c", c);
    Solution::new(
        variant,
        Arc::new(LinearProfile {
            variant,
            amplitude,
            rate: Some(rate),
        }),
        None,
        provenance,
    )
}

/// Which constant shift `ℑ = α − β` to use in [`family_b`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImChoice {
    /// `ℑ = ¼ ln(3a²/b²)`, the value that satisfies the mean-flow constraint
    /// including the `2(ξ²)ₓₓ` term.
    #[default]
    Derived,
    /// `ℑ = ½(ln|a| − ln|b|)`, for comparison runs only.
    Printed,
}

/// Linear transport profile for DS-I with an arbitrary `β(t)`.
pub fn family_b(
    variant: Variant,
    a: f64,
    b: f64,
    c: f64,
    beta: TimeFunction,
    choice: ImChoice,
) -> Result<Solution, CatalogError> {
    if variant.eps1 != Sign::Plus {
        return Err(CatalogError::UnsupportedVariant(
            "the linear-profile family exists only for DS-I (eps1 = 1)".into(),
        ));
    }
    if a == 0.0 || b == 0.0 {
        return Err(CatalogError::MixedCaseUnsupported);
    }
    let shift = match choice {
        ImChoice::Derived => {
            if variant.eps2 != Sign::Plus {
                return Err(CatalogError::NoRealSolution(
                    "the constraint requires a^2 e^{-4 Im} = -b^2 when eps2 = -1".into(),
                ));
            }
            0.25 * (3.0 * a * a / (b * b)).ln()
        }
        ImChoice::Printed => 0.5 * (a.abs().ln() - b.abs().ln()),
    };
    let alpha = &beta + shift;
    let amplitude = TransportAmplitude::new(
        variant.eps1,
        QuadPhase::new(alpha, beta.clone()),
        linear_theta(a, b, c),
    );
    let mut provenance = Provenance::new("B")
        .param("a", a)
        .param("b", b)
        .param("c", c)
        .param("beta", &beta);
    if choice == ImChoice::Printed {
        provenance = provenance.param("Im", "printed");
    }
    Ok(Solution::new(
        variant,
        Arc::new(LinearProfile {
            variant,
            amplitude,
            rate: None,
        }),
        None,
        provenance,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variant::Sign::{Minus, Plus};
    use approx::assert_abs_diff_eq;

    fn tf(s: &str) -> TimeFunction {
        TimeFunction::parse(s).unwrap()
    }

    #[test]
    fn family_a_identity_parameter_closed_form() {
        for variant in Variant::all() {
            let c = 0.8;
            let sol = family_a(variant, tf("t"), c);
            for &(t, x, y) in &[(0.0, 0.0, 0.0), (0.7, 1.1, -0.4), (-2.0, -0.3, 2.2)] {
                let p = sol.eval(t, x, y);
                let (e1, e2) = (variant.e1(), variant.e2());
                let u = Complex64::from_polar(c, (x * x - e1 * y * y) / 2.0);
                assert!((p.u - u).norm() < 1e-12);
                assert_abs_diff_eq!(p.v, -(e1 * x * x + y * y) / 2.0 - e2 * c * c, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn family_a_origin_value() {
        let sol = family_a(Variant::new(Minus, Plus), tf("t"), 1.0);
        let p = sol.eval(0.0, 0.0, 0.0);
        assert_eq!(p.u, Complex64::new(1.0, 0.0));
        assert_eq!(p.v, -1.0);
    }

    #[test]
    fn family_a_log_parameter() {
        let c = 0.9;
        let sol = family_a(Variant::new(Plus, Minus), tf("ln(t)"), c);
        let p0 = sol.eval(2.0, 0.0, 0.0);
        assert_abs_diff_eq!(p0.u.norm(), c / 2f64.sqrt(), epsilon = 1e-14);
        // quadratic coefficient of v in y (x = 0): -3/(8 t^2) at t = 2
        let py = sol.eval(2.0, 0.0, 1.0);
        assert_abs_diff_eq!(py.v - p0.v, -3.0 / 32.0, epsilon = 1e-13);
    }

    #[test]
    fn family_a_rejects_decreasing() {
        let sol = family_a(Variant::new(Plus, Plus), tf("-t"), 1.0);
        assert!(!sol.eval(1.0, 0.0, 0.0).valid);
        assert!(matches!(sol.check_time(1.0), Err(CatalogError::Validity(_))));
        let sol = family_a(Variant::new(Plus, Plus), tf("t^2"), 1.0);
        assert!(sol.check_time(1.0).is_ok());
        assert!(sol.check_time(-1.0).is_err());
    }

    #[test]
    fn family_a_zero_amplitude() {
        let sol = family_a(Variant::new(Minus, Minus), tf("t"), 0.0);
        let p = sol.eval(0.3, 1.0, 2.0);
        assert_eq!(p.u.norm(), 0.0);
        assert_abs_diff_eq!(p.v, -(-1.0 + 4.0) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn family_b_errors() {
        let beta = TimeFunction::zero();
        assert!(matches!(
            family_b(Variant::new(Minus, Plus), 1.0, 1.0, 0.0, beta.clone(), ImChoice::Derived),
            Err(CatalogError::UnsupportedVariant(_))
        ));
        assert_eq!(
            family_b(Variant::new(Plus, Plus), 1.0, 0.0, 0.0, beta.clone(), ImChoice::Derived).unwrap_err(),
            CatalogError::MixedCaseUnsupported
        );
        assert!(matches!(
            family_b(Variant::new(Plus, Minus), 1.0, 1.0, 0.0, beta, ImChoice::Derived),
            Err(CatalogError::NoRealSolution(_))
        ));
    }

    #[test]
    fn family_b_vanishes_at_origin_without_offset() {
        let sol = family_b(Variant::new(Plus, Plus), 2.0, -1.0, 0.0, tf("0.1*t"), ImChoice::Derived).unwrap();
        for t in [0.0, 1.0, 3.0] {
            assert_eq!(sol.eval(t, 0.0, 0.0).u.norm(), 0.0);
        }
    }
}
