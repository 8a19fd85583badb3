//! The CSV field format shared by point evaluation and evolver snapshots.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::catalog::PointValue;

pub const HEADER: &str = "t,x,y,re_u,im_u,abs_u,v,valid";

/// Shortest decimal that reads back to the same `f64`; exponent notation
/// outside `[1e-5, 1e16)`, and `-0` printed as `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// One row; invalid points keep their coordinates and leave values empty.
pub fn write_row<W: Write>(w: &mut W, t: f64, x: f64, y: f64, p: &PointValue) -> io::Result<()> {
    let coords = format!("{},{},{}", fmt_f64(t), fmt_f64(x), fmt_f64(y));
    if p.valid {
        writeln!(w, "{coords},{}", values(p.u, p.v))
    } else {
        writeln!(w, "{coords},,,,,false")
    }
}

fn values(u: Complex64, v: f64) -> String {
    format!(
        "{},{},{},{},true",
        fmt_f64(u.re),
        fmt_f64(u.im),
        fmt_f64(u.norm()),
        fmt_f64(v)
    )
}
