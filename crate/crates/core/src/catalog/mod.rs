//! Exact solution families as evaluable `(u, v)` pairs.
//!
//! * [`family_a`]: constant transport profile, one increasing parameter function `ℑ`.
//! * [`family_b`]: linear transport profile `aϖ₁ + bϖ₂ + c` (DS-I only).
//! * [`family_c`]: line-phase profiles `ν(ζϖ₁ + ηϖ₂ + ℓ₁)` for the eight profile kinds.
//!
//! Families dressed with extra parameter functions are obtained by applying
//! [`crate::symmetry::apply_t1`] to these.

mod line;
mod linear;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::ansatz::AnsatzError;
use crate::elliptic::EllipticError;
use crate::timefn::TimeFnError;

pub use crate::variant::{Sign, Variant};
pub use line::{family_c, family_c_with, LineConstants};
pub use linear::{family_a, family_b, ImChoice};

/// ℑ' below this is treated as not increasing.
pub const MIN_RATE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("ValidityError: {0}")]
    Validity(String),
    #[error("UnsupportedVariant: {0}")]
    UnsupportedVariant(String),
    #[error("MixedCaseUnsupported: linear profile needs a != 0 and b != 0 (use family A when a = b = 0)")]
    MixedCaseUnsupported,
    #[error("NoRealSolution: {0}")]
    NoRealSolution(String),
    #[error(transparent)]
    Ansatz(#[from] AnsatzError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    TimeFn(#[from] TimeFnError),
}

/// Field values at one point; `valid == false` means the values must not
/// be used (pole guard, failed family constraint, or a domain error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub u: Complex64,
    pub v: f64,
    pub valid: bool,
}

impl PointValue {
    pub fn new(u: Complex64, v: f64) -> Self {
        PointValue { u, v, valid: true }
    }

    pub fn invalid() -> Self {
        PointValue {
            u: Complex64::new(f64::NAN, f64::NAN),
            v: f64::NAN,
            valid: false,
        }
    }
}

/// Anything that can produce `(u, v)` over `(t, x, y)`.
pub trait Fields: Send + Sync {
    fn eval(&self, t: f64, x: f64, y: f64) -> PointValue;

    /// Reject a time at which the family's own constraints fail.
    fn check_time(&self, _t: f64) -> Result<(), CatalogError> {
        Ok(())
    }
}

/// Spatial periodicity along the line phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Periodicity {
    /// Gradient of the profile argument with respect to `(x, y)` at `t = 0`.
    pub direction: [f64; 2],
    /// Period in profile-argument units.
    pub period: f64,
    pub time_independent: bool,
}

impl Periodicity {
    /// The smallest axis-aligned periodic box, where one exists. An axis the
    /// profile does not vary along borrows the other axis' length.
    pub fn default_box(&self) -> Option<(f64, f64)> {
        let axis = |g: f64| (g.abs() > 1e-12).then(|| self.period / g.abs());
        match (axis(self.direction[0]), axis(self.direction[1])) {
            (Some(lx), Some(ly)) => Some((lx, ly)),
            (Some(l), None) | (None, Some(l)) => Some((l, l)),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub family: String,
    pub params: Vec<(String, String)>,
    pub transforms: Vec<String>,
}

impl Provenance {
    pub fn new(family: &str) -> Self {
        Provenance {
            family: family.to_string(),
            params: Vec::new(),
            transforms: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")?;
        for t in &self.transforms {
            write!(f, " |> {t}")?;
        }
        Ok(())
    }
}

/// An evaluable candidate solution of the DS system.
#[derive(Clone)]
pub struct Solution {
    pub variant: Variant,
    fields: Arc<dyn Fields>,
    pub periodicity: Option<Periodicity>,
    pub provenance: Provenance,
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solution")
            .field("variant", &self.variant)
            .field("periodicity", &self.periodicity)
            .field("provenance", &self.provenance.to_string())
            .finish_non_exhaustive()
    }
}

impl Solution {
    pub fn new(
        variant: Variant,
        fields: Arc<dyn Fields>,
        periodicity: Option<Periodicity>,
        provenance: Provenance,
    ) -> Self {
        Solution {
            variant,
            fields,
            periodicity,
            provenance,
        }
    }

    pub fn fields(&self) -> &Arc<dyn Fields> {
        &self.fields
    }

    /// Evaluate both fields; non-finite values are reported as invalid.
    pub fn eval(&self, t: f64, x: f64, y: f64) -> PointValue {
        let p = self.fields.eval(t, x, y);
        if p.valid && p.u.re.is_finite() && p.u.im.is_finite() && p.v.is_finite() {
            p
        } else {
            PointValue::invalid()
        }
    }

    pub fn check_time(&self, t: f64) -> Result<(), CatalogError> {
        self.fields.check_time(t)
    }

    /// The same solution with `u ↦ −u`.
    pub fn negated(&self) -> Solution {
        struct Negated(Arc<dyn Fields>);
        impl Fields for Negated {
            fn eval(&self, t: f64, x: f64, y: f64) -> PointValue {
                let p = self.0.eval(t, x, y);
                PointValue { u: -p.u, ..p }
            }
            fn check_time(&self, t: f64) -> Result<(), CatalogError> {
                self.0.check_time(t)
            }
        }
        let mut provenance = self.provenance.clone();
        provenance.transforms.push("negate".into());
        Solution {
            fields: Arc::new(Negated(self.fields.clone())),
            provenance,
            ..self.clone()
        }
    }
}

/// The spatially uniform solution `u = c`, `v = −ε₂c²`.
pub fn constant(variant: Variant, c: f64) -> Solution {
    struct Uniform {
        c: f64,
        v: f64,
    }
    impl Fields for Uniform {
        fn eval(&self, _t: f64, _x: f64, _y: f64) -> PointValue {
            PointValue::new(Complex64::new(self.c, 0.0), self.v)
        }
    }
    Solution::new(
        variant,
        Arc::new(Uniform {
            c,
            v: -variant.e2() * c * c,
        }),
        Some(Periodicity {
            direction: [0.0, 0.0],
            period: f64::INFINITY,
            time_independent: true,
        }),
        Provenance::new("constant").param("c", c),
    )
}

/// Evaluate a solution at one point.
pub fn eval_solution(sol: &Solution, t: f64, x: f64, y: f64) -> PointValue {
    sol.eval(t, x, y)
}
