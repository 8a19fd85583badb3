//! The quadratic-argument reduction.
//!
//! Writing `u = ξ e^{iφ}` with `φ = α'x² + β'y²` splits the envelope
//! equation into a transport equation for `ξ`, solved exactly by
//! [`TransportAmplitude`], and a profile equation. Along a line phase
//! (see [`LinePhaseFrame`]) the profile equation becomes the two-term cubic
//! ODE `−E ν'' + 2c ν + 2(ε₂ + κ) ν³ = 0`, which [`match_cubic`] solves for
//! every profile with a signature `f'' = p f³ + q f`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::elliptic::Profile;
use crate::timefn::{Jet3, TimeFnError, TimeFunction};
use crate::variant::Sign;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnsatzError {
    #[error("DegenerateMatch: cubic coefficient eps2 + kappa vanishes")]
    DegenerateMatch,
    #[error("NoRealAmplitude: squared amplitude E*p/(2(eps2+kappa)) = {0} is negative")]
    NoRealAmplitude(f64),
}

/// `φ(t, x, y) = α'(t) x² + β'(t) y²`.
#[derive(Debug, Clone)]
pub struct QuadPhase {
    pub alpha: TimeFunction,
    pub beta: TimeFunction,
}

impl QuadPhase {
    pub fn new(alpha: TimeFunction, beta: TimeFunction) -> Self {
        QuadPhase { alpha, beta }
    }

    pub fn at(&self, t: f64) -> Result<PhaseState, TimeFnError> {
        Ok(PhaseState {
            alpha: self.alpha.eval_jet(t)?,
            beta: self.beta.eval_jet(t)?,
        })
    }
}

/// Jets of `α`, `β` at one instant; everything the reduction needs at `t`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseState {
    pub alpha: Jet3,
    pub beta: Jet3,
}

impl PhaseState {
    pub fn phase(&self, x: f64, y: f64) -> f64 {
        self.alpha.d1 * x * x + self.beta.d1 * y * y
    }

    /// `e^{−ε₁α−β}`.
    pub fn envelope(&self, eps1: Sign) -> f64 {
        (-eps1.value() * self.alpha.value - self.beta.value).exp()
    }

    /// The transport characteristics `(ϖ₁, ϖ₂) = (e^{−2ε₁α} x, e^{−2β} y)`.
    pub fn stretched(&self, eps1: Sign, x: f64, y: f64) -> (f64, f64) {
        (
            (-2.0 * eps1.value() * self.alpha.value).exp() * x,
            (-2.0 * self.beta.value).exp() * y,
        )
    }

    /// `(α'' + 2ε₁α'²) x² + (β'' + 2β'²) y²`, the phase contribution to the
    /// profile equation (divided by two).
    pub fn quadratic_potential(&self, eps1: Sign, x: f64, y: f64) -> f64 {
        let a = self.alpha.d2 + 2.0 * eps1.value() * self.alpha.d1 * self.alpha.d1;
        let b = self.beta.d2 + 2.0 * self.beta.d1 * self.beta.d1;
        a * x * x + b * y * y
    }
}

pub type Theta = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `ξ = e^{−ε₁α−β} ϑ(e^{−2ε₁α}x, e^{−2β}y)` for an arbitrary `ϑ`.
#[derive(Clone)]
pub struct TransportAmplitude {
    pub eps1: Sign,
    pub phase: QuadPhase,
    pub theta: Theta,
}

impl fmt::Debug for TransportAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransportAmplitude")
            .field("eps1", &self.eps1)
            .field("phase", &self.phase)
            .finish_non_exhaustive()
    }
}

impl TransportAmplitude {
    pub fn new(eps1: Sign, phase: QuadPhase, theta: Theta) -> Self {
        TransportAmplitude { eps1, phase, theta }
    }

    pub fn eval(&self, t: f64, x: f64, y: f64) -> Result<f64, TimeFnError> {
        let st = self.phase.at(t)?;
        Ok(self.eval_with(&st, x, y))
    }

    pub fn eval_with(&self, st: &PhaseState, x: f64, y: f64) -> f64 {
        let (w1, w2) = st.stretched(self.eps1, x, y);
        st.envelope(self.eps1) * (self.theta)(w1, w2)
    }
}

/// The line phase `ϖ = ζ ϖ₁ + η ϖ₂ + ℓ₁` with `(ζ, η) = (sinh ℓ, cosh ℓ)`
/// for DS-I and `(sin ℓ, cos ℓ)` for DS-II. `E` is `cosh 2ℓ` resp. `cos 2ℓ`,
/// the factor by which `ε₁∂ₓ² + ∂ᵧ²` scales second derivatives along `ϖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePhaseFrame {
    pub ell: f64,
    pub ell1: f64,
    pub zeta: f64,
    pub eta: f64,
    pub e: f64,
}

pub fn frame(eps1: Sign, ell: f64, ell1: f64) -> LinePhaseFrame {
    let (zeta, eta, e) = match eps1 {
        Sign::Plus => (ell.sinh(), ell.cosh(), (2.0 * ell).cosh()),
        Sign::Minus => (ell.sin(), ell.cos(), (2.0 * ell).cos()),
    };
    LinePhaseFrame {
        ell,
        ell1,
        zeta,
        eta,
        e,
    }
}

impl LinePhaseFrame {
    pub fn argument(&self, w1: f64, w2: f64) -> f64 {
        self.zeta * w1 + self.eta * w2 + self.ell1
    }
}

/// Amplitude and constants making `ν = A f` solve the reduced cubic ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicMatch {
    pub amplitude: f64,
    /// The constant `c` multiplying `ν` in the reduced equation.
    pub c_ode: f64,
    /// The `ν²` coefficient in `v`.
    pub kappa: f64,
}

impl CubicMatch {
    /// `−E ν'' + 2c ν + 2(ε₂ + κ) ν³` at one point, given `f` and `f''`.
    pub fn defect(&self, e: f64, eps2: Sign, f: f64, f2: f64) -> f64 {
        let nu = self.amplitude * f;
        let nu2 = self.amplitude * f2;
        -e * nu2 + 2.0 * self.c_ode * nu + 2.0 * (eps2.value() + self.kappa) * nu * nu * nu
    }
}

/// Coefficient comparison in the basis `{ν, ν³}`: `c = E q / 2`,
/// `A = √(E p / (2(ε₂ + κ)))` (positive root).
pub fn match_cubic(
    profile: &Profile,
    e: f64,
    kappa: f64,
    eps2: Sign,
) -> Result<CubicMatch, AnsatzError> {
    let s = eps2.value() + kappa;
    if s.abs() < 1e-12 {
        return Err(AnsatzError::DegenerateMatch);
    }
    let a2 = e * profile.p / (2.0 * s);
    if a2 < 0.0 || !a2.is_finite() {
        return Err(AnsatzError::NoRealAmplitude(a2));
    }
    Ok(CubicMatch {
        amplitude: a2.sqrt(),
        c_ode: e * profile.q / 2.0,
        kappa,
    })
}

/// The `ν²` coefficient `κ` in `v = γ(ε₁x² + y²) + e^{−4β}(c + κν²)` that
/// makes the mean-flow constraint hold along a line phase: `κ = −2ζ²`.
pub fn v_profile_coefficient(zeta: f64) -> f64 {
    -2.0 * zeta * zeta
}

/// The commonly printed alternative `κ = ζ²`, kept for comparison runs.
pub fn printed_v_profile_coefficient(zeta: f64) -> f64 {
    zeta * zeta
}
