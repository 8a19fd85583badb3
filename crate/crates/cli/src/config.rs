//! Run configuration: a JSON document, validated on load.

use std::path::PathBuf;

use dstew::catalog::{self, ImChoice, LineConstants, Solution};
use dstew::elliptic::ProfileKind;
use dstew::evolve::CrosscheckOptions;
use dstew::residual::{self, AxisSpec, SampleSpec, VerifyOptions};
use dstew::symmetry::TransformSpec;
use dstew::{Sign, TimeFunction, Variant};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub variant: VariantConfig,
    pub family: FamilyConfig,
    #[serde(default)]
    pub transforms: Vec<TransformConfig>,
    /// What `transform` does with the transformed solution.
    #[serde(default)]
    pub then: Then,
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
    pub evolve: Option<EvolveConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantConfig {
    pub eps1: Sign,
    pub eps2: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constants {
    #[default]
    Derived,
    Printed,
    PrintedOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shift {
    #[default]
    Derived,
    Printed,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
pub enum FamilyConfig {
    A {
        #[serde(rename = "Im")]
        im: String,
        c: f64,
    },
    B {
        a: f64,
        b: f64,
        #[serde(default)]
        c: f64,
        #[serde(default = "zero_text")]
        beta: String,
        #[serde(default)]
        shift: Shift,
    },
    C {
        kind: ProfileKind,
        #[serde(default)]
        m: f64,
        ell: f64,
        #[serde(default)]
        ell1: f64,
        #[serde(default = "zero_text")]
        beta: String,
        #[serde(default)]
        constants: Constants,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TransformConfig {
    T1 {
        #[serde(default = "zero_text")]
        alpha: String,
        #[serde(default = "zero_text")]
        beta: String,
        #[serde(default = "zero_text")]
        gamma: String,
    },
    T2 {
        b: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Then {
    Eval,
    #[default]
    Verify,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t: Vec<f64>,
    pub x: AxisConfig,
    pub y: AxisConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub h: f64,
    pub order: u32,
    pub tol_rel: f64,
    pub seed: Option<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            h: residual::DEFAULT_H,
            order: residual::DEFAULT_ORDER,
            tol_rel: residual::DEFAULT_TOL,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VMeanPolicy {
    Exact,
}

/// `"exact"` (box mean of the exact `v`) or a number.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum VMean {
    Policy(VMeanPolicy),
    Value(f64),
}

impl Default for VMean {
    fn default() -> Self {
        VMean::Policy(VMeanPolicy::Exact)
    }
}

fn default_n() -> [usize; 2] {
    [64, 64]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    #[serde(rename = "box")]
    pub box_size: Option<[f64; 2]>,
    #[serde(default = "default_n")]
    pub n: [usize; 2],
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dt: f64,
    #[serde(default)]
    pub v_mean: VMean,
    pub max_deviation: Option<f64>,
    pub snapshot_every: Option<usize>,
    pub snapshot_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
}

/// `a.b[2].c` → `/a/b/2/c`.
fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn schema(at: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        pointer: at.to_string(),
        message: message.into(),
    }
}

fn timefn(text: &str, at: &str) -> Result<TimeFunction, CliError> {
    TimeFunction::parse(text).map_err(|e| schema(at, e.to_string()))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let message = e.inner().to_string();
            schema(&pointer(e.path()), message)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(g) = &self.grid {
            if g.t.is_empty() {
                return Err(schema("/grid/t", "at least one time is required"));
            }
            for (name, a) in [("x", g.x), ("y", g.y)] {
                if a.n == 0 {
                    return Err(schema(&format!("/grid/{name}/n"), "count must be at least 1"));
                }
                if !(a.min <= a.max) {
                    return Err(schema(&format!("/grid/{name}"), "min must not exceed max"));
                }
            }
        }
        Ok(())
    }

    pub fn variant(&self) -> Variant {
        Variant::new(self.variant.eps1, self.variant.eps2)
    }

    /// The base solution named by `family`.
    pub fn solution(&self) -> Result<Solution, CliError> {
        let variant = self.variant();
        let sol = match &self.family {
            FamilyConfig::A { im, c } => catalog::family_a(variant, timefn(im, "/family/Im")?, *c),
            FamilyConfig::B { a, b, c, beta, shift } => {
                let choice = match shift {
                    Shift::Derived => ImChoice::Derived,
                    Shift::Printed => ImChoice::Printed,
                };
                catalog::family_b(variant, *a, *b, *c, timefn(beta, "/family/beta")?, choice)
                    .map_err(dstew::Error::from)?
            }
            FamilyConfig::C { kind, m, ell, ell1, beta, constants } => {
                let constants = match constants {
                    Constants::Derived => LineConstants::Derived,
                    Constants::Printed => LineConstants::Printed,
                    Constants::PrintedOffset => LineConstants::PrintedOffset,
                };
                catalog::family_c_with(variant, *kind, *m, *ell, *ell1, timefn(beta, "/family/beta")?, constants)
                    .map_err(dstew::Error::from)?
            }
        };
        Ok(sol)
    }

    pub fn transform_specs(&self) -> Result<Vec<TransformSpec>, CliError> {
        self.transforms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Ok(match t {
                    TransformConfig::T1 { alpha, beta, gamma } => TransformSpec::T1 {
                        alpha: timefn(alpha, &format!("/transforms/{i}/alpha"))?,
                        beta: timefn(beta, &format!("/transforms/{i}/beta"))?,
                        gamma: timefn(gamma, &format!("/transforms/{i}/gamma"))?,
                    },
                    TransformConfig::T2 { b } => TransformSpec::T2 { b: *b },
                })
            })
            .collect()
    }

    /// The base solution with any configured transforms applied.
    pub fn transformed_solution(&self) -> Result<Solution, CliError> {
        let base = self.solution()?;
        let specs = self.transform_specs()?;
        if specs.is_empty() {
            return Ok(base);
        }
        Ok(dstew::symmetry::compose(&specs, &base).map_err(dstew::Error::from)?)
    }

    pub fn sample(&self) -> Result<SampleSpec, CliError> {
        let g = self.grid.as_ref().ok_or_else(|| schema("/grid", "a sample grid is required"))?;
        let axis = |a: AxisConfig| AxisSpec::new(a.min, a.max, a.n);
        let mut s = SampleSpec::new(g.t.clone(), axis(g.x), axis(g.y));
        s.jitter_seed = self.verify.seed;
        Ok(s)
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            h: self.verify.h,
            order: self.verify.order,
            tol_rel: self.verify.tol_rel,
        }
    }

    pub fn crosscheck_options(&self) -> Result<CrosscheckOptions, CliError> {
        let e = self.evolve.as_ref().ok_or_else(|| schema("/evolve", "evolve options are required"))?;
        Ok(CrosscheckOptions {
            box_size: e.box_size.map(|[a, b]| (a, b)),
            nx: e.n[0],
            ny: e.n[1],
            t_final: e.t_final,
            dt: e.dt,
            snapshot_every: e.snapshot_every.or(e.snapshot_path.as_ref().map(|_| 0)),
            v_mean: match e.v_mean {
                VMean::Policy(VMeanPolicy::Exact) => None,
                VMean::Value(v) => Some(v),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SN: &str = r#"{
        "variant": {"eps1": -1, "eps2": 1},
        "family": {"name": "C", "kind": "sn", "m": 0.5, "ell": 1.5707963267948966},
        "grid": {"t": [0.0, 0.5], "x": {"min": -1, "max": 1, "n": 5}, "y": {"min": -1, "max": 1, "n": 5}}
    }"#;

    fn err(text: &str) -> CliError {
        RunConfig::from_json(text).unwrap_err()
    }

    #[test]
    fn minimal_config() {
        let c = RunConfig::from_json(SN).unwrap();
        assert_eq!(c.verify.order, 4);
        assert_eq!(c.then, Then::Verify);
        assert!(c.solution().is_ok());
        assert_eq!(c.sample().unwrap().len(), 50);
    }

    #[test]
    fn unknown_family() {
        let e = err(&SN.replace(r#""name": "C""#, r#""name": "D""#));
        let CliError::Schema { pointer, message } = e else { panic!() };
        assert_eq!(pointer, "/family/name");
        assert!(message.contains("`D`"), "{message}");
    }

    #[test]
    fn unknown_field_and_bad_types() {
        let e = err(&SN.replace(r#""ell": "#, r#""elll": 1, "ell": "#));
        assert!(matches!(e, CliError::Schema { ref pointer, .. } if pointer == "/family"), "{e}");
        let e = err(&SN.replace(r#""n": 5}, "y""#, r#""n": "five"}, "y""#));
        assert!(matches!(e, CliError::Schema { ref pointer, .. } if pointer == "/grid/x/n"), "{e}");
        let e = err(&SN.replace(r#""eps2": 1"#, r#""eps2": 3"#));
        assert!(matches!(e, CliError::Schema { ref pointer, .. } if pointer == "/variant/eps2"), "{e}");
    }

    #[test]
    fn time_function_errors_carry_pointer() {
        let text = SN.replace(r#""ell": 1.5707963267948966"#, r#""ell": 0, "beta": "sin(t""#);
        let e = RunConfig::from_json(&text).unwrap().solution().unwrap_err();
        assert!(matches!(e, CliError::Schema { ref pointer, .. } if pointer == "/family/beta"), "{e}");
    }

    #[test]
    fn transforms_and_evolve() {
        let text = SN.replace(
            r#""grid""#,
            r#""transforms": [{"kind": "T1", "alpha": "0.5*t"}, {"kind": "T2", "b": -2}],
               "evolve": {"T": 0.5, "dt": 0.001, "v_mean": 0.25, "n": [32, 16]},
               "grid""#,
        );
        let c = RunConfig::from_json(&text).unwrap();
        assert_eq!(c.transform_specs().unwrap().len(), 2);
        let o = c.crosscheck_options().unwrap();
        assert_eq!((o.nx, o.ny, o.v_mean), (32, 16, Some(0.25)));
        let text = text.replace(r#""v_mean": 0.25"#, r#""v_mean": "exact""#);
        assert_eq!(RunConfig::from_json(&text).unwrap().crosscheck_options().unwrap().v_mean, None);
    }
}
