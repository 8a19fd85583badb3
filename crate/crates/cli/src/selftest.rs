//! Built-in suites for `dstew selftest`.

use std::f64::consts::FRAC_PI_2;

use dstew::catalog::family_c;
use dstew::elliptic::{jacobi, Profile, ProfileKind};
use dstew::evolve::{crosscheck, CrosscheckOptions};
use dstew::matrix::{default_matrix, pole_free_cases, printed_constant_cases, transformed_case};
use dstew::residual::{verify, VerifyOptions};
use dstew::symmetry::random_chain;
use dstew::{Sign, TimeFunction, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl SuiteResult {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.name, self.detail)
    }
}

fn result(name: &'static str, pass: bool, detail: String) -> SuiteResult {
    SuiteResult { name, pass, detail }
}

pub fn elliptic_identities() -> SuiteResult {
    let mut worst = 0.0f64;
    for mi in 0..=10 {
        let m = if mi == 10 { 0.99 } else { mi as f64 / 10.0 };
        for k in -100..=100 {
            let s = k as f64 / 20.0;
            let j = jacobi(s, m);
            worst = worst
                .max((j.sn * j.sn + j.cn * j.cn - 1.0).abs())
                .max((j.dn * j.dn + m * m * j.sn * j.sn - 1.0).abs());
        }
    }
    result("elliptic identities", worst <= 1e-12, format!("max error {worst:.3e}"))
}

pub fn profile_signatures() -> SuiteResult {
    let mut worst = 0.0f64;
    for kind in ProfileKind::ALL {
        for m in [0.0, 0.3, 0.7] {
            let p = Profile::new(kind, m).expect("valid modulus");
            for k in -40..=40 {
                let s = k as f64 / 13.0 + 0.01;
                if p.singularities.distance(s) < 0.3 {
                    continue;
                }
                let [f, _, f2] = p.eval(s);
                worst = worst.max((f2 - p.signature_rhs(f)).abs() / (1.0 + f2.abs()));
            }
        }
    }
    result("profile signatures", worst <= 1e-9, format!("max relative error {worst:.3e}"))
}

pub fn certification() -> SuiteResult {
    let cases = default_matrix();
    let failed: Vec<String> = cases
        .iter()
        .filter(|c| !verify(&c.solution, &c.sample, VerifyOptions::default()).map_or(false, |r| r.pass))
        .map(|c| c.label.clone())
        .collect();
    let detail = format!("{}/{} cases pass", cases.len() - failed.len(), cases.len());
    result("certification matrix", failed.is_empty(), detail)
}

pub fn printed_constants() -> SuiteResult {
    let cases = printed_constant_cases();
    let rejected = cases
        .iter()
        .filter(|c| verify(&c.solution, &c.sample, VerifyOptions::default()).map_or(false, |r| !r.pass))
        .count();
    let detail = format!("{rejected}/{} printed-constant cases rejected", cases.len());
    result("printed constants", rejected == cases.len(), detail)
}

pub fn symmetry_closure() -> SuiteResult {
    let bases = pole_free_cases();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let total = 20;
    let mut ok = 0;
    for _ in 0..total {
        let base = &bases[rng.gen_range(0..bases.len())];
        let chain = random_chain(&mut rng, 0.3);
        let pass = transformed_case(base, &chain)
            .ok()
            .and_then(|c| verify(&c.solution, &c.sample, VerifyOptions::default()).ok())
            .map_or(false, |r| r.pass);
        ok += pass as usize;
    }
    result("symmetry closure", ok == total, format!("{ok}/{total} random chains pass"))
}

pub fn evolver() -> SuiteResult {
    let ds2 = Variant::new(Sign::Minus, Sign::Plus);
    let sol = family_c(ds2, ProfileKind::Sn, 0.5, FRAC_PI_2, 0.0, TimeFunction::zero()).expect("sn line exists");
    let opts = CrosscheckOptions {
        box_size: None,
        nx: 64,
        ny: 64,
        t_final: 0.5,
        dt: 1e-3,
        snapshot_every: None,
        v_mean: None,
    };
    match crosscheck(&sol, opts) {
        Ok(c) => {
            let r = c.report;
            let pass = r.max_dev <= 1e-5 && r.mass_drift <= 1e-10;
            result("evolver", pass, format!("max deviation {:.3e}, mass drift {:.3e}", r.max_dev, r.mass_drift))
        }
        Err(e) => result("evolver", false, e.to_string()),
    }
}

pub fn run_all() -> Vec<SuiteResult> {
    vec![
        elliptic_identities(),
        profile_signatures(),
        certification(),
        printed_constants(),
        symmetry_closure(),
        evolver(),
    ]
}
