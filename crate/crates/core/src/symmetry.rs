//! Symmetry transformations of the DS system.
//!
//! * `T₁`: Galilean-type shift by `(α(t), β(t))` with a compensating linear
//!   phase and a linear correction to `v`.
//! * `T₂`: parabolic scaling `u ↦ b·u(b²t, bx, by)`, `v ↦ b²v(b²t, bx, by)`.
//!   The prefactors `b⁻¹`, `b⁻²` sometimes quoted for this map only preserve
//!   the equations when `b = ±1`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::catalog::{CatalogError, Fields, Periodicity, PointValue, Solution};
use crate::timefn::{random, TimeFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error("ConfigError: scaling factor b must be a nonzero finite number, got {0}")]
    ZeroScale(f64),
    #[error("ConfigError: empty transform chain")]
    EmptyChain,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransformSpec {
    T1 {
        alpha: TimeFunction,
        beta: TimeFunction,
        gamma: TimeFunction,
    },
    T2 {
        b: f64,
    },
}

impl TransformSpec {
    pub fn label(&self) -> String {
        match self {
            TransformSpec::T1 { alpha, beta, gamma } => {
                format!("T1(alpha={alpha}, beta={beta}, gamma={gamma})")
            }
            TransformSpec::T2 { b } => format!("T2(b={b})"),
        }
    }
}

struct Shifted {
    eps1: f64,
    base: Arc<dyn Fields>,
    alpha: TimeFunction,
    beta: TimeFunction,
    gamma: TimeFunction,
}

impl Fields for Shifted {
    fn eval(&self, t: f64, x: f64, y: f64) -> PointValue {
        let (Ok(a), Ok(b), Ok(g)) = (
            self.alpha.eval_jet(t),
            self.beta.eval_jet(t),
            self.gamma.eval_jet(t),
        ) else {
            return PointValue::invalid();
        };
        let p = self.base.eval(t, x + a.value, y + b.value);
        if !p.valid {
            return p;
        }
        let theta = self.eps1 * a.d1 * x + b.d1 * y + g.value;
        let u = Complex64::from_polar(1.0, -theta) * p.u;
        let v = p.v + self.eps1 * a.d2 * x + b.d2 * y
            - (self.eps1 * a.d1 * a.d1 + b.d1 * b.d1) / 2.0
            + g.d1;
        PointValue::new(u, v)
    }

    fn check_time(&self, t: f64) -> Result<(), CatalogError> {
        self.alpha.eval_jet(t)?;
        self.beta.eval_jet(t)?;
        self.gamma.eval_jet(t)?;
        self.base.check_time(t)
    }
}

/// `u'(t,x,y) = e^{−i(ε₁α'x + β'y + γ)} u(t, x+α, y+β)`,
/// `v'(t,x,y) = v(t, x+α, y+β) + ε₁α''x + β''y − (ε₁α'² + β'²)/2 + γ'`.
pub fn apply_t1(
    sol: &Solution,
    alpha: TimeFunction,
    beta: TimeFunction,
    gamma: TimeFunction,
) -> Solution {
    let stationary = alpha.is_constant() && beta.is_constant() && gamma.is_constant();
    let spec = TransformSpec::T1 {
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma: gamma.clone(),
    };
    let mut provenance = sol.provenance.clone();
    provenance.transforms.push(spec.label());
    let periodicity = sol.periodicity.map(|p| Periodicity {
        time_independent: p.time_independent && stationary,
        ..p
    });
    Solution::new(
        sol.variant,
        Arc::new(Shifted {
            eps1: sol.variant.e1(),
            base: sol.fields().clone(),
            alpha,
            beta,
            gamma,
        }),
        periodicity,
        provenance,
    )
}

struct Scaled {
    base: Arc<dyn Fields>,
    b: f64,
}

impl Fields for Scaled {
    fn eval(&self, t: f64, x: f64, y: f64) -> PointValue {
        let b = self.b;
        let p = self.base.eval(b * b * t, b * x, b * y);
        PointValue {
            u: p.u * b,
            v: p.v * (b * b),
            valid: p.valid,
        }
    }

    fn check_time(&self, t: f64) -> Result<(), CatalogError> {
        self.base.check_time(self.b * self.b * t)
    }
}

/// `u'(t,x,y) = b·u(b²t, bx, by)`, `v'(t,x,y) = b²v(b²t, bx, by)`.
pub fn apply_t2(sol: &Solution, b: f64) -> Result<Solution, SymmetryError> {
    if b == 0.0 || !b.is_finite() {
        return Err(SymmetryError::ZeroScale(b));
    }
    let mut provenance = sol.provenance.clone();
    provenance.transforms.push(TransformSpec::T2 { b }.label());
    let periodicity = sol.periodicity.map(|p| Periodicity {
        direction: [p.direction[0] * b, p.direction[1] * b],
        ..p
    });
    Ok(Solution::new(
        sol.variant,
        Arc::new(Scaled {
            base: sol.fields().clone(),
            b,
        }),
        periodicity,
        provenance,
    ))
}

pub fn apply(spec: &TransformSpec, sol: &Solution) -> Result<Solution, SymmetryError> {
    match spec {
        TransformSpec::T1 { alpha, beta, gamma } => {
            Ok(apply_t1(sol, alpha.clone(), beta.clone(), gamma.clone()))
        }
        TransformSpec::T2 { b } => apply_t2(sol, *b),
    }
}

/// Apply `specs` left to right.
pub fn compose(specs: &[TransformSpec], sol: &Solution) -> Result<Solution, SymmetryError> {
    if specs.is_empty() {
        return Err(SymmetryError::EmptyChain);
    }
    specs.iter().try_fold(sol.clone(), |s, spec| apply(spec, &s))
}

/// One to three transforms with random smooth `T₁` parameters and
/// `|b| ∈ [0.2, 3]` for `T₂`.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, amplitude: f64) -> Vec<TransformSpec> {
    (0..rng.gen_range(1..=3))
        .map(|_| {
            if rng.gen_bool(0.5) {
                TransformSpec::T1 {
                    alpha: random::smooth(rng, amplitude).1,
                    beta: random::smooth(rng, amplitude).1,
                    gamma: random::smooth(rng, amplitude).1,
                }
            } else {
                let mag = (rng.gen_range(0.2f64..3.0) * 1e4).round() / 1e4;
                let b = if rng.gen_bool(0.5) { mag } else { -mag };
                TransformSpec::T2 { b }
            }
        })
        .collect()
}
