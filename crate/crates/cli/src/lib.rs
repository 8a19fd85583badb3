//! Command dispatch for the `dstew` binary.

pub mod config;
pub mod selftest;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use dstew::catalog::CatalogError;
use dstew::evolve::{crosscheck, CrosscheckReport, EvolveError};
use dstew::residual::{verify, ResidualError};
use dstew::table;
use dstew::timefn::TimeFnError;
use serde::Serialize;
use thiserror::Error;

pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("ConfigError: schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("ConfigError: {0}")]
    Usage(String),
    #[error("IoError: {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Core(#[from] dstew::Error),
}

fn timefn_code(e: &TimeFnError) -> i32 {
    match e {
        TimeFnError::Syntax { .. } | TimeFnError::UnknownIdentifier { .. } => 2,
        _ => 3,
    }
}

impl CliError {
    /// 2 for configuration and parameter errors, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        use dstew::Error as E;
        match self {
            CliError::Schema { .. } | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::TimeFn(t) | E::Catalog(CatalogError::TimeFn(t)) => timefn_code(t),
                E::Residual(ResidualError::Stencil { .. }) => 3,
                E::Evolve(EvolveError::Blowup { .. } | EvolveError::InvalidSample { .. }) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Families,
    Eval,
    Verify,
    Transform,
    Evolve,
    Selftest,
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub h: Option<f64>,
    pub order: Option<u32>,
    pub tol: Option<f64>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_output(path: Option<&Path>, body: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(io_err(p)),
        None => io::stdout().write_all(body).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("--config is required for this command".into()))?;
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    RunConfig::from_json(&text)
}

fn apply_overrides(cfg: &mut RunConfig, o: &Overrides) {
    if let Some(h) = o.h {
        cfg.verify.h = h;
    }
    if let Some(order) = o.order {
        cfg.verify.order = order;
    }
    if let Some(tol) = o.tol {
        cfg.verify.tol_rel = tol;
    }
    if let Some(seed) = o.seed {
        cfg.verify.seed = Some(seed);
    }
    if let Some(e) = cfg.evolve.as_mut() {
        if let Some(dt) = o.dt {
            e.dt = dt;
        }
        if let Some(t) = o.t_final {
            e.t_final = t;
        }
    }
    if o.out.is_some() {
        cfg.output.path = o.out.clone();
    }
}

/// Run one command; `Err` carries exit code 2 or 3, `Ok(Fail)` exit code 1.
pub fn run(command: Command, config: Option<&Path>, overrides: &Overrides) -> Result<Outcome, CliError> {
    match command {
        Command::Families => {
            write_output(overrides.out.as_deref(), &json(&families()))?;
            return Ok(Outcome::Pass);
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut body = String::new();
            for r in &results {
                body.push_str(&r.line());
                body.push('\n');
            }
            write_output(overrides.out.as_deref(), body.as_bytes())?;
            return Ok(Outcome::from_bool(results.iter().all(|r| r.pass)));
        }
        _ => {}
    }
    let mut cfg = load_config(config)?;
    apply_overrides(&mut cfg, overrides);
    match command {
        Command::Eval => eval(&cfg),
        Command::Verify => verify_cmd(&cfg),
        Command::Transform => {
            if cfg.transforms.is_empty() {
                return Err(CliError::Schema {
                    pointer: "/transforms".into(),
                    message: "transform needs a nonempty chain".into(),
                });
            }
            match cfg.then {
                config::Then::Eval => eval(&cfg),
                config::Then::Verify => verify_cmd(&cfg),
            }
        }
        Command::Evolve => evolve(&cfg),
        Command::Families | Command::Selftest => unreachable!(),
    }
}

/// The CSV field file for the configured grid.
pub fn eval_csv(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let sol = cfg.transformed_solution()?;
    let mut sample = cfg.sample()?;
    sample.jitter_seed = None;
    let mut buf = Vec::new();
    writeln!(buf, "{}", table::HEADER).expect("in-memory write");
    for (t, x, y) in sample.points() {
        table::write_row(&mut buf, t, x, y, &sol.eval(t, x, y)).expect("in-memory write");
    }
    Ok(buf)
}

fn eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let body = eval_csv(cfg)?;
    write_output(cfg.output.path.as_deref(), &body)?;
    Ok(Outcome::Pass)
}

fn verify_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sol = cfg.transformed_solution()?;
    let report = verify(&sol, &cfg.sample()?, cfg.verify_options()).map_err(dstew::Error::from)?;
    write_output(cfg.output.path.as_deref(), &json(&report))?;
    Ok(Outcome::from_bool(report.pass))
}

#[derive(Serialize)]
struct EvolveOutput<'a> {
    #[serde(flatten)]
    report: &'a CrosscheckReport,
    max_deviation: Option<f64>,
    pass: bool,
}

fn evolve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sol = cfg.transformed_solution()?;
    let opts = cfg.crosscheck_options()?;
    let result = crosscheck(&sol, opts).map_err(dstew::Error::from)?;
    let e = cfg.evolve.as_ref().expect("checked by crosscheck_options");
    let pass = e.max_deviation.map_or(true, |m| result.report.max_dev <= m);
    let out = EvolveOutput {
        report: &result.report,
        max_deviation: e.max_deviation,
        pass,
    };
    write_output(cfg.output.path.as_deref(), &json(&out))?;
    if let Some(path) = &e.snapshot_path {
        let file = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{}", table::HEADER).map_err(io_err(path))?;
        for snap in &result.snapshots {
            snap.write_csv(&mut w, false).map_err(io_err(path))?;
        }
        w.flush().map_err(io_err(path))?;
    }
    Ok(Outcome::from_bool(pass))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSchema {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub default: Option<&'static str>,
    pub description: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilySchema {
    pub name: &'static str,
    pub variants: &'static str,
    pub origin: &'static str,
    pub params: Vec<ParamSchema>,
}

fn p(name: &'static str, kind: &'static str, default: Option<&'static str>, description: &'static str) -> ParamSchema {
    ParamSchema {
        name,
        kind,
        default,
        description,
    }
}

pub fn families() -> Vec<FamilySchema> {
    vec![
        FamilySchema {
            name: "A",
            variants: "all",
            origin: "constant transport profile; quadratic phase fixed by one increasing function Im(t)",
            params: vec![
                p("Im", "time function", None, "increasing parameter function; |u| = c*sqrt(Im')"),
                p("c", "real", None, "profile constant"),
            ],
        },
        FamilySchema {
            name: "B",
            variants: "eps1 = 1, eps2 = 1",
            origin: "linear transport profile a*w1 + b*w2 + c with alpha - beta constant",
            params: vec![
                p("a", "real, nonzero", None, "coefficient of the first characteristic"),
                p("b", "real, nonzero", None, "coefficient of the second characteristic"),
                p("c", "real", Some("0"), "offset"),
                p("beta", "time function", Some("0"), "free phase function"),
                p("shift", "derived | printed", Some("derived"), "value of alpha - beta"),
            ],
        },
        FamilySchema {
            name: "C",
            variants: "all, where a real amplitude exists",
            origin: "line-phase profiles nu(zeta*w1 + eta*w2 + ell1) solving nu'' = p nu^3 + q nu",
            params: vec![
                p("kind", "rational | tan | sec | coth | csch | sn | cn | dn", None, "profile"),
                p("m", "real in [0, 1)", Some("0"), "elliptic modulus (sn, cn, dn)"),
                p("ell", "real", None, "direction angle of the line phase"),
                p("ell1", "real", Some("0"), "phase offset"),
                p("beta", "time function", Some("0"), "free phase function"),
                p("constants", "derived | printed | printed-offset", Some("derived"), "constants in v"),
            ],
        },
    ]
}
