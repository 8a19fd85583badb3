//! Finite-difference substitution of a candidate `(u, v)` into
//!
//! ```text
//! R1 = 2i u_t + ε₁u_xx + u_yy − 2ε₂|u|²u − 2uv
//! R2 = v_xx − ε₁(v_yy + 2(|u|²)_xx)
//! ```
//!
//! [`verify`] evaluates both residuals at steps `h` and `h/2` and reads the
//! observed convergence order from the ratio: an exact solution converges
//! at the nominal order (or sits at the roundoff floor), while a model error
//! gives an `h`-independent residual.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{PointValue, Solution};

/// Roundoff floor multiplier: residuals below
/// `FLOOR_FACTOR · ε_mach · |field| / h²` are treated as converged.
pub const FLOOR_FACTOR: f64 = 64.0;

pub const DEFAULT_H: f64 = 1e-3;
pub const DEFAULT_ORDER: u32 = 4;
pub const DEFAULT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidualError {
    #[error("StencilError: stencil around (t={t}, x={x}, y={y}) touches an invalid point")]
    Stencil { t: f64, x: f64, y: f64 },
    #[error("EmptySampleError: no valid sample points")]
    EmptySample,
    #[error("ConfigError: difference order must be 2, 4 or 6, got {0}")]
    BadOrder(u32),
    #[error("ConfigError: step must be positive and finite, got {0}")]
    BadStep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Stencil {
    /// First derivative: `Σ d1[k-1] (f(+k) − f(−k)) / h`.
    d1: &'static [f64],
    /// Second derivative: `(c0 f(0) + Σ d2[k-1] (f(+k) + f(−k))) / h²`.
    c0: f64,
    d2: &'static [f64],
}

fn stencil(order: u32) -> Result<Stencil, ResidualError> {
    Ok(match order {
        2 => Stencil {
            d1: &[0.5],
            c0: -2.0,
            d2: &[1.0],
        },
        4 => Stencil {
            d1: &[2.0 / 3.0, -1.0 / 12.0],
            c0: -5.0 / 2.0,
            d2: &[4.0 / 3.0, -1.0 / 12.0],
        },
        6 => Stencil {
            d1: &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
            c0: -49.0 / 18.0,
            d2: &[3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0],
        },
        o => return Err(ResidualError::BadOrder(o)),
    })
}

/// Residuals and the magnitudes needed to judge them, at one point.
#[derive(Debug, Clone, Copy)]
struct PointResidual {
    r1: Complex64,
    r2: f64,
    /// Sum of the magnitudes of the individual PDE terms.
    terms1: f64,
    terms2: f64,
    /// Field magnitudes that set the roundoff level of the differences.
    field1: f64,
    field2: f64,
}

fn point_residual(
    sol: &Solution,
    t: f64,
    x: f64,
    y: f64,
    h: f64,
    order: u32,
) -> Result<PointResidual, ResidualError> {
    let st = stencil(order)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(ResidualError::BadStep(h));
    }
    let bad = || ResidualError::Stencil { t, x, y };
    let at = |t: f64, x: f64, y: f64| -> Result<PointValue, ResidualError> {
        let p = sol.eval(t, x, y);
        if p.valid {
            Ok(p)
        } else {
            Err(bad())
        }
    };

    let c = at(t, x, y)?;
    let g0 = c.u.norm_sqr();
    let mut ut = Complex64::new(0.0, 0.0);
    let mut uxx = c.u * st.c0;
    let mut uyy = c.u * st.c0;
    let mut vxx = c.v * st.c0;
    let mut vyy = c.v * st.c0;
    let mut gxx = g0 * st.c0;
    for k in 1..=st.d1.len() {
        let kh = k as f64 * h;
        let (tp, tm) = (at(t + kh, x, y)?, at(t - kh, x, y)?);
        ut += (tp.u - tm.u) * st.d1[k - 1];
        let (xp, xm) = (at(t, x + kh, y)?, at(t, x - kh, y)?);
        let w = st.d2[k - 1];
        uxx += (xp.u + xm.u) * w;
        vxx += (xp.v + xm.v) * w;
        gxx += (xp.u.norm_sqr() + xm.u.norm_sqr()) * w;
        let (yp, ym) = (at(t, x, y + kh)?, at(t, x, y - kh)?);
        uyy += (yp.u + ym.u) * w;
        vyy += (yp.v + ym.v) * w;
    }
    let h2 = h * h;
    ut /= h;
    uxx /= h2;
    uyy /= h2;
    vxx /= h2;
    vyy /= h2;
    gxx /= h2;

    let e1 = sol.variant.e1();
    let e2 = sol.variant.e2();
    let i = Complex64::i();
    let cubic = c.u * (2.0 * e2 * g0);
    let coupling = c.u * (2.0 * c.v);
    let r1 = 2.0 * i * ut + e1 * uxx + uyy - cubic - coupling;
    let r2 = vxx - e1 * (vyy + 2.0 * gxx);
    Ok(PointResidual {
        r1,
        r2,
        terms1: 2.0 * ut.norm() + uxx.norm() + uyy.norm() + cubic.norm() + coupling.norm(),
        terms2: vxx.abs() + vyy.abs() + 2.0 * gxx.abs(),
        field1: c.u.norm(),
        field2: c.v.abs() + g0,
    })
}

/// Both residuals at one point with central differences of the given order.
pub fn residual_at(
    sol: &Solution,
    t: f64,
    x: f64,
    y: f64,
    h: f64,
    order: u32,
) -> Result<(Complex64, f64), ResidualError> {
    point_residual(sol, t, x, y, h, order).map(|p| (p.r1, p.r2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        AxisSpec { min, max, n }
    }

    pub fn spacing(&self) -> f64 {
        if self.n > 1 {
            (self.max - self.min) / (self.n - 1) as f64
        } else {
            0.0
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.spacing();
        (0..self.n).map(move |i| {
            if i + 1 == self.n && self.n > 1 {
                self.max
            } else {
                self.min + i as f64 * d
            }
        })
    }
}

/// Sample points: every time in `times` crossed with the `x`-`y` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSpec {
    pub times: Vec<f64>,
    pub x: AxisSpec,
    pub y: AxisSpec,
    /// When set, each spatial point is displaced by up to a quarter cell.
    pub jitter_seed: Option<u64>,
}

impl SampleSpec {
    pub fn new(times: Vec<f64>, x: AxisSpec, y: AxisSpec) -> Self {
        SampleSpec {
            times,
            x,
            y,
            jitter_seed: None,
        }
    }

    pub fn with_jitter(mut self, seed: u64) -> Self {
        self.jitter_seed = Some(seed);
        self
    }

    pub fn len(&self) -> usize {
        self.times.len() * self.x.n * self.y.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points with `x` fastest, then `y`, then `t`.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut rng = self.jitter_seed.map(ChaCha8Rng::seed_from_u64);
        let (jx, jy) = (0.25 * self.x.spacing(), 0.25 * self.y.spacing());
        let mut out = Vec::with_capacity(self.len());
        for &t in &self.times {
            for y in self.y.values() {
                for x in self.x.values() {
                    let (dx, dy) = match rng.as_mut() {
                        Some(r) => (r.gen_range(-1.0..=1.0) * jx, r.gen_range(-1.0..=1.0) * jy),
                        None => (0.0, 0.0),
                    };
                    out.push((t, x + dx, y + dy));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub h: f64,
    pub order: u32,
    pub tol_rel: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            h: DEFAULT_H,
            order: DEFAULT_ORDER,
            tol_rel: DEFAULT_TOL,
        }
    }
}

/// Aggregated residual norms (at the finer step) and observed orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max1: f64,
    pub rms1: f64,
    pub max2: f64,
    pub rms2: f64,
    pub order1: f64,
    pub order2: f64,
    pub n_points: usize,
    pub pass: bool,
}

#[derive(Default)]
struct Accum {
    sq: f64,
    max: f64,
    terms_sq: f64,
    field_sq: f64,
}

impl Accum {
    fn push(&mut self, r: f64, terms: f64, field: f64) {
        self.sq += r * r;
        self.max = self.max.max(r);
        self.terms_sq += terms * terms;
        self.field_sq += field * field;
    }

    fn rms(&self, n: f64) -> f64 {
        (self.sq / n).sqrt()
    }
}

fn observed_order(coarse: f64, fine: f64, nominal: f64) -> f64 {
    if fine == 0.0 {
        nominal
    } else if coarse == 0.0 {
        0.0
    } else {
        (coarse / fine).log2()
    }
}

/// Rms magnitudes of the individual PDE terms at the finer step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermScales {
    pub terms1: f64,
    pub terms2: f64,
}

/// Verify a solution over a sample, at `h` and `h/2`.
///
/// A point takes part only when both stencils lie in the valid region.
/// Each equation passes when its fine-step rms residual sits at the
/// roundoff floor, or is at most `tol_rel · (1 + rms of the individual
/// term magnitudes)` and converges at `order − 0.5` or better.
pub fn verify(
    sol: &Solution,
    sample: &SampleSpec,
    opts: VerifyOptions,
) -> Result<ResidualReport, ResidualError> {
    verify_with_scales(sol, sample, opts).map(|(r, _)| r)
}

/// [`verify`], also returning the term scales the tolerance is relative to.
pub fn verify_with_scales(
    sol: &Solution,
    sample: &SampleSpec,
    opts: VerifyOptions,
) -> Result<(ResidualReport, TermScales), ResidualError> {
    stencil(opts.order)?;
    if !(opts.h > 0.0 && opts.h.is_finite()) {
        return Err(ResidualError::BadStep(opts.h));
    }
    let h_fine = opts.h / 2.0;
    let results: Vec<Option<(PointResidual, PointResidual)>> = sample
        .points()
        .into_par_iter()
        .map(|(t, x, y)| {
            let coarse = point_residual(sol, t, x, y, opts.h, opts.order).ok()?;
            let fine = point_residual(sol, t, x, y, h_fine, opts.order).ok()?;
            Some((coarse, fine))
        })
        .collect();

    let (mut c1, mut c2, mut f1, mut f2) = Default::default();
    let mut n = 0usize;
    for (coarse, fine) in results.into_iter().flatten() {
        n += 1;
        Accum::push(&mut c1, coarse.r1.norm(), coarse.terms1, coarse.field1);
        Accum::push(&mut c2, coarse.r2.abs(), coarse.terms2, coarse.field2);
        Accum::push(&mut f1, fine.r1.norm(), fine.terms1, fine.field1);
        Accum::push(&mut f2, fine.r2.abs(), fine.terms2, fine.field2);
    }
    if n == 0 {
        return Err(ResidualError::EmptySample);
    }
    let nf = n as f64;
    let nominal = opts.order as f64;
    let (rms1, rms2) = (f1.rms(nf), f2.rms(nf));
    let order1 = observed_order(c1.rms(nf), rms1, nominal);
    let order2 = observed_order(c2.rms(nf), rms2, nominal);

    let floor_scale = FLOOR_FACTOR * f64::EPSILON / (h_fine * h_fine);
    let judge = |acc: &Accum, rms: f64, order: f64| {
        let scale = (acc.terms_sq / nf).sqrt();
        let floor = floor_scale * (acc.field_sq / nf).sqrt();
        rms <= floor || (rms <= opts.tol_rel * (1.0 + scale) && order >= nominal - 0.5)
    };
    let pass = opts.tol_rel == f64::INFINITY || (judge(&f1, rms1, order1) && judge(&f2, rms2, order2));

    let scales = TermScales {
        terms1: (f1.terms_sq / nf).sqrt(),
        terms2: (f2.terms_sq / nf).sqrt(),
    };
    let report = ResidualReport {
        max1: f1.max,
        rms1,
        max2: f2.max,
        rms2,
        order1,
        order2,
        n_points: n,
        pass,
    };
    Ok((report, scales))
}
