//! Split-step pseudo-spectral evolution of DS-II on a periodic box.
//!
//! The linear part `2iu_t − u_xx + u_yy = 0` is diagonal in Fourier space.
//! The nonlinear part `u_t = −i(ε₂|u|² + v)u` leaves `|u|` unchanged, so `v`
//! solved from `Δv = −2∂ₓₓ|u|²` at the start of the substep is exact over it.
//! Strang splitting gives second order in `dt`.

use std::f64::consts::TAU;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Periodicity, Solution};
use crate::table;
use crate::variant::{Sign, Variant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("UnsupportedVariant: evolution needs eps1 = -1 (the DS-I constraint is hyperbolic)")]
    UnsupportedVariant,
    #[error("PeriodicityError: {0}")]
    Periodicity(String),
    #[error("InvalidSample: solution is invalid at (t={t}, x={x}, y={y})")]
    InvalidSample { t: f64, x: f64, y: f64 },
    #[error("BlowupError: non-finite field after step {step}")]
    Blowup { step: usize },
    #[error("ConfigError: {0}")]
    Config(String),
}

/// A uniform periodic grid `x_i = i·Lx/Nx`, `y_j = j·Ly/Ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self, EvolveError> {
        for (name, n) in [("Nx", nx), ("Ny", ny)] {
            if n < 2 || !n.is_power_of_two() {
                return Err(EvolveError::Config(format!("{name} must be a power of two >= 2, got {n}")));
            }
        }
        for (name, l) in [("Lx", lx), ("Ly", ly)] {
            if !(l > 0.0 && l.is_finite()) {
                return Err(EvolveError::Config(format!("{name} must be positive, got {l}")));
            }
        }
        Ok(Grid { lx, ly, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    /// Coordinates in storage order (`x` fastest).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (self.x(i), self.y(j))))
    }

    fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
        let half = n / 2;
        (0..n)
            .map(|i| {
                let k = if i < half { i as f64 } else { i as f64 - n as f64 };
                TAU * k / l
            })
            .collect()
    }

    pub fn kx(&self) -> Vec<f64> {
        Self::wavenumbers(self.nx, self.lx)
    }

    pub fn ky(&self) -> Vec<f64> {
        Self::wavenumbers(self.ny, self.ly)
    }
}

/// Samples of `u` and `v` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub t: f64,
    pub u: Vec<Complex64>,
    pub v: Vec<f64>,
    pub v_mean: f64,
}

impl Field {
    /// Sample a solution on the grid; `v_mean` is the mean of the sampled `v`.
    pub fn sample(sol: &Solution, grid: Grid, t: f64) -> Result<Field, EvolveError> {
        let mut u = Vec::with_capacity(grid.len());
        let mut v = Vec::with_capacity(grid.len());
        for (x, y) in grid.points() {
            let p = sol.eval(t, x, y);
            if !p.valid {
                return Err(EvolveError::InvalidSample { t, x, y });
            }
            u.push(p.u);
            v.push(p.v);
        }
        let v_mean = mean(&v);
        Ok(Field { grid, t, u, v, v_mean })
    }

    /// `Σ|u|² ΔxΔy`.
    pub fn mass(&self) -> f64 {
        self.u.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx() * self.grid.dy()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && self.v.iter().all(|v| v.is_finite())
    }

    /// Write the field in the CSV field format.
    pub fn write_csv<W: Write>(&self, w: &mut W, header: bool) -> io::Result<()> {
        if header {
            writeln!(w, "{}", table::HEADER)?;
        }
        for (k, (x, y)) in self.grid.points().enumerate() {
            let p = crate::catalog::PointValue::new(self.u[k], self.v[k]);
            table::write_row(w, self.t, x, y, &p)?;
        }
        Ok(())
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Row-column 2-D FFT in storage order (`x` fastest).
struct Fft2 {
    nx: usize,
    ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            nx: grid.nx,
            ny: grid.ny,
            fwd_x: planner.plan_fft_forward(grid.nx),
            inv_x: planner.plan_fft_inverse(grid.nx),
            fwd_y: planner.plan_fft_forward(grid.ny),
            inv_y: planner.plan_fft_inverse(grid.ny),
        }
    }

    fn rows(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64], n: usize) {
        let len = fft.get_inplace_scratch_len();
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex64::new(0.0, 0.0); len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    }

    fn transpose(src: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
        out.par_chunks_mut(rows).enumerate().for_each(|(c, col)| {
            for (r, z) in col.iter_mut().enumerate() {
                *z = src[r * cols + c];
            }
        });
        out
    }

    fn apply(&self, data: &mut Vec<Complex64>, fx: &Arc<dyn Fft<f64>>, fy: &Arc<dyn Fft<f64>>) {
        Self::rows(fx, data, self.nx);
        let mut t = Self::transpose(data, self.ny, self.nx);
        Self::rows(fy, &mut t, self.ny);
        *data = Self::transpose(&t, self.nx, self.ny);
    }

    fn forward(&self, data: &mut Vec<Complex64>) {
        self.apply(data, &self.fwd_x, &self.fwd_y);
    }

    /// Normalized inverse.
    fn inverse(&self, data: &mut Vec<Complex64>) {
        self.apply(data, &self.inv_x, &self.inv_y);
        let s = 1.0 / (self.nx * self.ny) as f64;
        data.par_iter_mut().for_each(|z| *z *= s);
    }
}

/// Spectral solver for `Δv = −2∂ₓₓg`: `v̂ = −2kₓ²/|k|² ĝ`, mean `v_mean`.
pub struct Poisson {
    fft: Fft2,
    symbol: Vec<f64>,
}

impl Poisson {
    pub fn new(grid: &Grid) -> Self {
        let (kx, ky) = (grid.kx(), grid.ky());
        let symbol = (0..grid.len())
            .map(|k| {
                let (i, j) = (k % grid.nx, k / grid.nx);
                let k2 = kx[i] * kx[i] + ky[j] * ky[j];
                if k2 == 0.0 {
                    0.0
                } else {
                    -2.0 * kx[i] * kx[i] / k2
                }
            })
            .collect();
        Poisson { fft: Fft2::new(grid), symbol }
    }

    pub fn solve(&self, g: &[f64], v_mean: f64) -> Vec<f64> {
        let mut buf: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fft.forward(&mut buf);
        buf.par_iter_mut().zip(&self.symbol).for_each(|(z, s)| *z *= s);
        buf[0] = Complex64::new(v_mean * g.len() as f64, 0.0);
        self.fft.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }
}

/// One-shot form of [`Poisson::solve`].
pub fn poisson_v(g: &[f64], grid: &Grid, variant: Variant, v_mean: f64) -> Result<Vec<f64>, EvolveError> {
    if variant.eps1 != Sign::Minus {
        return Err(EvolveError::UnsupportedVariant);
    }
    if g.len() != grid.len() {
        return Err(EvolveError::Config(format!(
            "field has {} samples, grid has {}",
            g.len(),
            grid.len()
        )));
    }
    Ok(Poisson::new(grid).solve(g, v_mean))
}

/// Strang-split stepper with a fixed `dt`.
pub struct SplitStep {
    eps2: f64,
    dt: f64,
    fft: Fft2,
    poisson: Poisson,
    half_linear: Vec<Complex64>,
}

impl SplitStep {
    pub fn new(variant: Variant, grid: &Grid, dt: f64) -> Result<Self, EvolveError> {
        if variant.eps1 != Sign::Minus {
            return Err(EvolveError::UnsupportedVariant);
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(EvolveError::Config(format!("dt must be positive, got {dt}")));
        }
        let (kx, ky) = (grid.kx(), grid.ky());
        let e1 = variant.e1();
        let half_linear = (0..grid.len())
            .map(|k| {
                let (i, j) = (k % grid.nx, k / grid.nx);
                Complex64::from_polar(1.0, -(e1 * kx[i] * kx[i] + ky[j] * ky[j]) * dt / 4.0)
            })
            .collect();
        Ok(SplitStep {
            eps2: variant.e2(),
            dt,
            fft: Fft2::new(grid),
            poisson: Poisson::new(grid),
            half_linear,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn linear_half(&self, u: &mut Vec<Complex64>) {
        self.fft.forward(u);
        u.par_iter_mut().zip(&self.half_linear).for_each(|(z, m)| *z *= m);
        self.fft.inverse(u);
    }

    /// Advance by `dt`; `index` is reported on blow-up.
    pub fn step(&self, field: &mut Field, index: usize) -> Result<(), EvolveError> {
        self.linear_half(&mut field.u);
        let g: Vec<f64> = field.u.iter().map(|z| z.norm_sqr()).collect();
        field.v = self.poisson.solve(&g, field.v_mean);
        let (e2, dt) = (self.eps2, self.dt);
        field
            .u
            .par_iter_mut()
            .zip(&g)
            .zip(&field.v)
            .for_each(|((z, &g), &v)| *z *= Complex64::from_polar(1.0, -(e2 * g + v) * dt));
        self.linear_half(&mut field.u);
        field.t += dt;
        if field.is_finite() {
            Ok(())
        } else {
            Err(EvolveError::Blowup { step: index })
        }
    }

    /// `steps` steps; `on_step(k, field)` is called after each.
    pub fn run<F: FnMut(usize, &Field)>(
        &self,
        field: &mut Field,
        steps: usize,
        mut on_step: F,
    ) -> Result<(), EvolveError> {
        for k in 1..=steps {
            self.step(field, k)?;
            on_step(k, field);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrosscheckOptions {
    /// Box lengths; defaults to the solution's smallest periodic box.
    pub box_size: Option<(f64, f64)>,
    pub nx: usize,
    pub ny: usize,
    pub t_final: f64,
    /// Requested step, shortened so that a whole number of steps reaches `t_final`.
    pub dt: f64,
    /// Keep a snapshot every this many steps (and the final one).
    pub snapshot_every: Option<usize>,
    /// Gauge constant; defaults to the box mean of the exact `v` at `t = 0`.
    pub v_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub box_size: [f64; 2],
    pub n: [usize; 2],
    pub t_final: f64,
    pub dt: f64,
    pub steps: usize,
    pub v_mean: f64,
    pub max_dev: f64,
    pub l2_dev: f64,
    pub mass_initial: f64,
    pub mass_final: f64,
    /// `|mass_final − mass_initial| / mass_initial`.
    pub mass_drift: f64,
}

#[derive(Debug, Clone)]
pub struct Crosscheck {
    pub report: CrosscheckReport,
    pub snapshots: Vec<Field>,
}

/// Both `Lx·∂ϖ/∂x` and `Ly·∂ϖ/∂y` must be whole multiples of the period.
fn check_box(p: &Periodicity, lx: f64, ly: f64) -> Result<(), EvolveError> {
    for (axis, g, l) in [("x", p.direction[0], lx), ("y", p.direction[1], ly)] {
        let cycles = g.abs() * l / p.period;
        if cycles.is_finite() && (cycles - cycles.round()).abs() > 1e-9 * cycles.max(1.0) {
            return Err(EvolveError::Periodicity(format!(
                "box length {l} along {axis} spans {cycles} periods"
            )));
        }
    }
    Ok(())
}

/// Compare opposite box edges at time `t`.
fn check_edges(sol: &Solution, grid: &Grid, t: f64) -> Result<(), EvolveError> {
    let mut pairs = Vec::new();
    for j in 0..grid.ny {
        let y = grid.y(j);
        pairs.push(((0.0, y), (grid.lx, y)));
    }
    for i in 0..grid.nx {
        let x = grid.x(i);
        pairs.push(((x, 0.0), (x, grid.ly)));
    }
    for ((x0, y0), (x1, y1)) in pairs {
        let (a, b) = (sol.eval(t, x0, y0), sol.eval(t, x1, y1));
        if !a.valid {
            return Err(EvolveError::InvalidSample { t, x: x0, y: y0 });
        }
        if !b.valid {
            return Err(EvolveError::InvalidSample { t, x: x1, y: y1 });
        }
        let du = (a.u - b.u).norm() / (1.0 + a.u.norm());
        let dv = (a.v - b.v).abs() / (1.0 + a.v.abs());
        if du > 1e-8 || dv > 1e-8 {
            return Err(EvolveError::Periodicity(format!(
                "fields differ across the box at t = {t}: ({x0}, {y0}) vs ({x1}, {y1})"
            )));
        }
    }
    Ok(())
}

/// Evolve `sol(0)` to `t_final` and compare with `sol(t_final)`.
pub fn crosscheck(sol: &Solution, opts: CrosscheckOptions) -> Result<Crosscheck, EvolveError> {
    if sol.variant.eps1 != Sign::Minus {
        return Err(EvolveError::UnsupportedVariant);
    }
    if !(opts.t_final >= 0.0 && opts.t_final.is_finite()) {
        return Err(EvolveError::Config(format!("T must be nonnegative, got {}", opts.t_final)));
    }
    let Some(periodicity) = sol.periodicity else {
        return Err(EvolveError::Periodicity("solution carries no periodicity".into()));
    };
    let (lx, ly) = match opts.box_size.or_else(|| periodicity.default_box()) {
        Some(b) => b,
        None => return Err(EvolveError::Periodicity("no natural box; give one explicitly".into())),
    };
    let grid = Grid::new(lx, ly, opts.nx, opts.ny)?;
    check_box(&periodicity, lx, ly)?;

    let steps = if opts.t_final == 0.0 {
        0
    } else {
        (opts.t_final / opts.dt - 1e-9).ceil().max(1.0) as usize
    };
    let dt = if steps == 0 { opts.dt } else { opts.t_final / steps as f64 };
    let stepper = SplitStep::new(sol.variant, &grid, dt)?;
    for t in [0.0, opts.t_final] {
        sol.check_time(t)
            .map_err(|e| EvolveError::Config(format!("solution at t = {t}: {e}")))?;
        check_edges(sol, &grid, t)?;
    }

    let mut field = Field::sample(sol, grid, 0.0)?;
    if let Some(v) = opts.v_mean {
        field.v_mean = v;
    }
    let mass_initial = field.mass();
    let v_mean = field.v_mean;
    let mut snapshots = Vec::new();
    if opts.snapshot_every.is_some() {
        snapshots.push(field.clone());
    }
    stepper.run(&mut field, steps, |k, f| {
        if let Some(every) = opts.snapshot_every {
            if (every > 0 && k % every == 0) || k == steps {
                snapshots.push(f.clone());
            }
        }
    })?;
    field.t = opts.t_final;

    let exact = Field::sample(sol, grid, opts.t_final)?;
    let (mut max_dev, mut sq) = (0.0f64, 0.0);
    for (a, b) in field.u.iter().zip(&exact.u) {
        let d = (a - b).norm();
        max_dev = max_dev.max(d);
        sq += d * d;
    }
    let mass_final = field.mass();
    let report = CrosscheckReport {
        box_size: [lx, ly],
        n: [opts.nx, opts.ny],
        t_final: opts.t_final,
        dt,
        steps,
        v_mean,
        max_dev,
        l2_dev: (sq * grid.dx() * grid.dy()).sqrt(),
        mass_initial,
        mass_final,
        mass_drift: if mass_initial > 0.0 {
            (mass_final - mass_initial).abs() / mass_initial
        } else {
            mass_final
        },
    };
    Ok(Crosscheck { report, snapshots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::constant;
    use crate::variant::Sign::{Minus, Plus};

    const DS2: Variant = Variant::new(Minus, Plus);

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1.0, 1.0, 16, 8).is_ok());
        assert!(Grid::new(1.0, 1.0, 12, 8).is_err());
        assert!(Grid::new(0.0, 1.0, 8, 8).is_err());
        let g = Grid::new(TAU, TAU, 8, 8).unwrap();
        assert_eq!(g.kx(), vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn fft_round_trip() {
        let g = Grid::new(1.0, 2.0, 8, 4).unwrap();
        let fft = Fft2::new(&g);
        let orig: Vec<Complex64> = (0..32).map(|k| Complex64::new(k as f64, (k * k % 7) as f64)).collect();
        let mut d = orig.clone();
        fft.forward(&mut d);
        assert!((d[0].re - orig.iter().map(|z| z.re).sum::<f64>()).abs() < 1e-12);
        fft.inverse(&mut d);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn poisson_cosine() {
        let g = Grid::new(TAU, TAU, 16, 16).unwrap();
        let src: Vec<f64> = g.points().map(|(x, _)| x.cos()).collect();
        let v = poisson_v(&src, &g, DS2, 0.0).unwrap();
        for ((x, _), v) in g.points().zip(&v) {
            assert!((v + 2.0 * x.cos()).abs() < 1e-13);
        }
        let src: Vec<f64> = g.points().map(|(_, y)| 1.0 + y.sin()).collect();
        let v = poisson_v(&src, &g, DS2, 0.25).unwrap();
        assert!(v.iter().all(|v| (v - 0.25).abs() < 1e-14));
        assert_eq!(poisson_v(&src, &g, Variant::new(Plus, Plus), 0.0), Err(EvolveError::UnsupportedVariant));
    }

    #[test]
    fn zero_and_constant_states() {
        let g = Grid::new(TAU, TAU, 8, 8).unwrap();
        for variant in [DS2, Variant::new(Minus, Minus)] {
            let c = 0.7;
            let mut f = Field::sample(&constant(variant, c), g, 0.0).unwrap();
            assert!((f.v_mean + variant.e2() * c * c).abs() < 1e-15);
            let s = SplitStep::new(variant, &g, 0.01).unwrap();
            s.run(&mut f, 50, |_, _| {}).unwrap();
            assert!(f.u.iter().all(|z| (z - c).norm() < 1e-13));

            let mut z = Field::sample(&constant(variant, 0.0), g, 0.0).unwrap();
            s.run(&mut z, 10, |_, _| {}).unwrap();
            assert!(z.u.iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn plane_wave_linear_step() {
        let g = Grid::new(TAU, TAU, 16, 16).unwrap();
        let (kx, ky, dt) = (2.0, 3.0, 0.05);
        let u: Vec<Complex64> = g.points().map(|(x, y)| Complex64::from_polar(1.0, kx * x + ky * y)).collect();
        let mut f = Field {
            grid: g,
            t: 0.0,
            v: vec![-1.0; g.len()],
            u: u.clone(),
            v_mean: -1.0,
        };
        SplitStep::new(DS2, &g, dt).unwrap().step(&mut f, 1).unwrap();
        let m = Complex64::from_polar(1.0, -(-kx * kx + ky * ky) * dt / 2.0);
        for (a, b) in f.u.iter().zip(&u) {
            assert!((a - b * m).norm() < 1e-12);
        }
        assert!((f.t - dt).abs() < 1e-16);
    }

    #[test]
    fn blowup_reports_step() {
        let g = Grid::new(TAU, TAU, 4, 4).unwrap();
        let mut f = Field {
            grid: g,
            t: 0.0,
            u: vec![Complex64::new(1e200, 0.0); g.len()],
            v: vec![0.0; g.len()],
            v_mean: 0.0,
        };
        let s = SplitStep::new(DS2, &g, 0.1).unwrap();
        assert_eq!(s.run(&mut f, 3, |_, _| {}), Err(EvolveError::Blowup { step: 1 }));
    }

    #[test]
    fn crosscheck_rejections() {
        let opts = CrosscheckOptions {
            box_size: None,
            nx: 8,
            ny: 8,
            t_final: 0.1,
            dt: 0.01,
            snapshot_every: None,
            v_mean: None,
        };
        let ds1 = constant(Variant::new(Plus, Plus), 1.0);
        assert_eq!(crosscheck(&ds1, opts).unwrap_err(), EvolveError::UnsupportedVariant);
        assert!(matches!(crosscheck(&constant(DS2, 1.0), opts), Err(EvolveError::Periodicity(_))));
        let a = crate::catalog::family_a(DS2, crate::timefn::TimeFunction::t(), 1.0);
        let boxed = CrosscheckOptions { box_size: Some((1.0, 1.0)), ..opts };
        assert!(matches!(crosscheck(&a, boxed), Err(EvolveError::Periodicity(_))));
        let r = crosscheck(&constant(DS2, 1.0), boxed).unwrap().report;
        assert!(r.max_dev < 1e-13 && r.steps == 10);
    }
}
