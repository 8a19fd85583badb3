//! Line-phase family: `u = A e^{−2β} f(ϖ) e^{i(ε₁x² + y²)β'}` with
//! `ϖ = e^{−2β}(ζx + ηy) + ℓ₁` and
//! `v = −(β'' + 2β'²)(ε₁x² + y²) + e^{−4β}(c + κA²f(ϖ)²)`.

use std::sync::Arc;

use num_complex::Complex64;

use super::{CatalogError, Fields, Periodicity, PointValue, Provenance, Solution, Variant};
use crate::ansatz::{
    self, match_cubic, CubicMatch, LinePhaseFrame, PhaseState, QuadPhase,
};
use crate::elliptic::{Profile, ProfileKind};
use crate::timefn::TimeFunction;

/// Which constants to put in `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LineConstants {
    /// `κ = −2ζ²` and `c = E q / 2`; these satisfy both equations.
    #[default]
    Derived,
    /// `κ = ζ²` and `c = E q`, the commonly printed values. Comparison only:
    /// these fail the residual check whenever `q ≠ 0` or `ζ ≠ 0`.
    Printed,
    /// `κ = −2ζ²` with the printed `c = E q`.
    PrintedOffset,
}

struct LineProfile {
    variant: Variant,
    frame: LinePhaseFrame,
    profile: Profile,
    matched: CubicMatch,
    v_const: f64,
    phase: QuadPhase,
}

impl LineProfile {
    fn argument(&self, st: &PhaseState, x: f64, y: f64) -> f64 {
        let (w1, w2) = st.stretched(self.variant.eps1, x, y);
        self.frame.argument(w1, w2)
    }
}

impl Fields for LineProfile {
    fn eval(&self, t: f64, x: f64, y: f64) -> PointValue {
        let Ok(st) = self.phase.at(t) else {
            return PointValue::invalid();
        };
        let s = self.argument(&st, x, y);
        if !self.profile.is_valid_at(s) {
            return PointValue::invalid();
        }
        let e1 = self.variant.e1();
        let nu = self.matched.amplitude * self.profile.value(s);
        let xi = st.envelope(self.variant.eps1) * nu;
        let u = Complex64::from_polar(xi, st.phase(x, y));
        let beta = st.beta;
        let gamma = -beta.d2 - 2.0 * beta.d1 * beta.d1;
        let v = gamma * (e1 * x * x + y * y)
            + (-4.0 * beta.value).exp() * (self.v_const + self.matched.kappa * nu * nu);
        PointValue::new(u, v)
    }

    fn check_time(&self, t: f64) -> Result<(), CatalogError> {
        self.phase.at(t)?;
        Ok(())
    }
}

/// Line-phase solution with the constants that satisfy both equations.
pub fn family_c(
    variant: Variant,
    kind: ProfileKind,
    m: f64,
    ell: f64,
    ell1: f64,
    beta: TimeFunction,
) -> Result<Solution, CatalogError> {
    family_c_with(variant, kind, m, ell, ell1, beta, LineConstants::Derived)
}

pub fn family_c_with(
    variant: Variant,
    kind: ProfileKind,
    m: f64,
    ell: f64,
    ell1: f64,
    beta: TimeFunction,
    constants: LineConstants,
) -> Result<Solution, CatalogError> {
    let profile = Profile::new(kind, m)?;
    let frame = ansatz::frame(variant.eps1, ell, ell1);
    let (kappa, v_const) = match constants {
        LineConstants::Derived => (
            ansatz::v_profile_coefficient(frame.zeta),
            frame.e * profile.q / 2.0,
        ),
        LineConstants::Printed => (
            ansatz::printed_v_profile_coefficient(frame.zeta),
            frame.e * profile.q,
        ),
        LineConstants::PrintedOffset => (ansatz::v_profile_coefficient(frame.zeta), frame.e * profile.q),
    };
    let matched = match_cubic(&profile, frame.e, kappa, variant.eps2)?;

    let periodicity = match (profile.period(), beta.value(0.0)) {
        (Some(period), Ok(b0)) => {
            let g = (-2.0 * b0).exp();
            Some(Periodicity {
                direction: [g * frame.zeta, g * frame.eta],
                period,
                time_independent: beta.is_constant(),
            })
        }
        _ => None,
    };

    let mut provenance = Provenance::new("C")
        .param("kind", kind)
        .param("m", m)
        .param("ell", ell)
        .param("ell1", ell1)
        .param("beta", &beta);
    match constants {
        LineConstants::Derived => {}
        LineConstants::Printed => provenance = provenance.param("constants", "printed"),
        LineConstants::PrintedOffset => provenance = provenance.param("constants", "printed-offset"),
    }

    let alpha = beta.scale(variant.e1());
    let fields = LineProfile {
        variant,
        frame,
        profile,
        matched,
        v_const,
        phase: QuadPhase::new(alpha, beta),
    };
    Ok(Solution::new(variant, Arc::new(fields), periodicity, provenance))
}
