//! The default certification matrix: catalog instances paired with sample
//! windows that keep every stencil clear of poles.

use std::f64::consts::FRAC_PI_2;

use crate::ansatz;
use crate::catalog::{family_a, family_b, family_c_with, CatalogError, ImChoice, LineConstants, Solution};
use crate::elliptic::ProfileKind;
use crate::residual::{AxisSpec, SampleSpec};
use crate::symmetry::{compose, SymmetryError, TransformSpec};
use crate::timefn::TimeFunction;
use crate::variant::{Sign, Variant};

pub const TIMES: [f64; 3] = [0.5, 1.0, 1.5];
pub const POINTS_PER_AXIS: usize = 11;
pub const LINE_BETA: &str = "0.1*sin(t)";

#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub solution: Solution,
    pub sample: SampleSpec,
}

fn square(radius: f64, n: usize) -> SampleSpec {
    let axis = AxisSpec::new(-radius, radius, n);
    SampleSpec::new(TIMES.to_vec(), axis, axis)
}

/// `(ℓ₁, R)` so that `|ϖ − ℓ₁| ≤ e^{0.2}R(|ζ| + |η|)` stays in one pole-free
/// interval for `|β| ≤ 0.1`.
pub fn line_window(kind: ProfileKind, zeta: f64, eta: f64) -> (f64, f64) {
    let g = zeta.abs() + eta.abs();
    match kind {
        ProfileKind::Tan | ProfileKind::Sec => (0.0, 1.1 / g),
        ProfileKind::Coth | ProfileKind::Csch | ProfileKind::Rational => (2.5, 1.5 / g),
        _ => (0.2, 1.5),
    }
}

pub fn family_a_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for im in ["t", "ln(t)", "t + 0.1*t^2"] {
        for variant in Variant::all() {
            let f = TimeFunction::parse(im).expect("built-in expression");
            out.push(Case {
                label: format!("A {variant} Im={im}"),
                solution: family_a(variant, f, 0.8),
                sample: square(1.5, POINTS_PER_AXIS),
            });
        }
    }
    out
}

pub fn family_b_cases() -> Vec<Case> {
    let variant = Variant::new(Sign::Plus, Sign::Plus);
    [(1.0, 1.0), (2.0, -1.0)]
        .into_iter()
        .map(|(a, b)| {
            let beta = TimeFunction::parse("0.1*t").expect("built-in expression");
            Case {
                label: format!("B {variant} a={a} b={b}"),
                solution: family_b(variant, a, b, 0.5, beta, ImChoice::Derived).expect("valid parameters"),
                sample: square(1.5, POINTS_PER_AXIS),
            }
        })
        .collect()
}

fn ells(eps1: Sign) -> &'static [f64] {
    match eps1 {
        Sign::Plus => &[0.0, 0.4],
        Sign::Minus => &[0.0, 0.4, FRAC_PI_2],
    }
}

/// One line-phase instance on its default window; `Err` where no real
/// amplitude exists.
pub fn line_case(
    variant: Variant,
    kind: ProfileKind,
    m: f64,
    ell: f64,
    constants: LineConstants,
) -> Result<Case, CatalogError> {
    let fr = ansatz::frame(variant.eps1, ell, 0.0);
    let (ell1, radius) = line_window(kind, fr.zeta, fr.eta);
    let beta = TimeFunction::parse(LINE_BETA).expect("built-in expression");
    let solution = family_c_with(variant, kind, m, ell, ell1, beta, constants)?;
    let m_label = if kind.is_elliptic() { format!(" m={m}") } else { String::new() };
    Ok(Case {
        label: format!("C {variant} {kind}{m_label} ell={ell:.4}"),
        solution,
        sample: square(radius, POINTS_PER_AXIS),
    })
}

pub fn family_c_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for variant in Variant::all() {
        for kind in ProfileKind::ALL {
            let ms: &[f64] = if kind.is_elliptic() { &[0.3, 0.7] } else { &[0.0] };
            for &ell in ells(variant.eps1) {
                for &m in ms {
                    if let Ok(c) = line_case(variant, kind, m, ell, LineConstants::Derived) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// Every instance of the default matrix.
pub fn default_matrix() -> Vec<Case> {
    let mut out = family_a_cases();
    out.extend(family_b_cases());
    out.extend(family_c_cases());
    out
}

/// Line-phase instances built with the printed constants; each should fail
/// verification with an `h`-independent residual.
pub fn printed_constant_cases() -> Vec<Case> {
    let ds1p = Variant::new(Sign::Plus, Sign::Plus);
    let ds2p = Variant::new(Sign::Minus, Sign::Plus);
    let ds2m = Variant::new(Sign::Minus, Sign::Minus);
    let specs = [
        (ds2p, ProfileKind::Sn, 0.5, FRAC_PI_2, LineConstants::PrintedOffset),
        (ds2p, ProfileKind::Sn, 0.3, 0.0, LineConstants::Printed),
        (ds2m, ProfileKind::Cn, 0.3, 0.0, LineConstants::Printed),
        (ds1p, ProfileKind::Tan, 0.0, 0.4, LineConstants::Printed),
        (ds1p, ProfileKind::Rational, 0.0, 0.4, LineConstants::Printed),
        (ds1p, ProfileKind::Sn, 0.7, 0.4, LineConstants::Printed),
        (ds2p, ProfileKind::Coth, 0.0, 0.4, LineConstants::Printed),
    ];
    specs
        .into_iter()
        .filter_map(|(v, k, m, ell, c)| line_case(v, k, m, ell, c).ok())
        .map(|mut c| {
            c.label.push_str(" (printed constants)");
            c
        })
        .collect()
}

/// Matrix instances with no real poles, safe under arbitrary shifts.
pub fn pole_free_cases() -> Vec<Case> {
    let mut out = family_a_cases();
    out.extend(family_b_cases());
    out.extend(family_c_cases().into_iter().filter(|c| {
        ["sn", "cn", "dn"].iter().any(|k| c.solution.provenance.params.iter().any(|(n, v)| n == "kind" && v == k))
    }));
    out
}

/// Apply a chain to a case, mapping the sample back through the scalings so
/// that it covers the same region of the base solution (up to the shifts).
pub fn transformed_case(base: &Case, chain: &[TransformSpec]) -> Result<Case, SymmetryError> {
    let solution = compose(chain, &base.solution)?;
    let b: f64 = chain
        .iter()
        .map(|s| match s {
            TransformSpec::T2 { b } => *b,
            TransformSpec::T1 { .. } => 1.0,
        })
        .product();
    let scale = |a: AxisSpec| AxisSpec::new(a.min / b.abs(), a.max / b.abs(), a.n);
    let sample = SampleSpec {
        times: base.sample.times.iter().map(|t| t / (b * b)).collect(),
        x: scale(base.sample.x),
        y: scale(base.sample.y),
        jitter_seed: base.sample.jitter_seed,
    };
    let label = format!("{} |> {}", base.label, chain.iter().map(|s| s.label()).collect::<Vec<_>>().join(" |> "));
    Ok(Case { label, solution, sample })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_covers_every_kind_and_branch() {
        let cs = family_c_cases();
        for kind in ProfileKind::ALL {
            for eps1 in ["DS-I", "DS-II"] {
                assert!(
                    cs.iter().any(|c| c.label.contains(&format!(" {kind}")) && c.label.contains(&format!("{eps1}("))),
                    "{kind} {eps1}"
                );
            }
        }
        assert_eq!(family_a_cases().len(), 12);
        assert_eq!(family_b_cases().len(), 2);
        assert_eq!(printed_constant_cases().len(), 7);
    }

    #[test]
    fn windows_are_pole_free() {
        for case in default_matrix() {
            for (t, x, y) in case.sample.points() {
                assert!(case.solution.eval(t, x, y).valid, "{} at ({t}, {x}, {y})", case.label);
            }
        }
    }
}
