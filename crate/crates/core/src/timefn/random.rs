//! Random smooth parameter functions, for randomized symmetry checks.

use rand::Rng;

use super::TimeFunction;

/// A sum of one to three bounded smooth terms with coefficients in
/// `[-amplitude, amplitude]`, returned as source text and parsed tree.
pub fn smooth<R: Rng + ?Sized>(rng: &mut R, amplitude: f64) -> (String, TimeFunction) {
    let n_terms = rng.gen_range(1..=3);
    let terms: Vec<String> = (0..n_terms)
        .map(|_| {
            let c = round4(rng.gen_range(-amplitude..=amplitude));
            let w = round4(rng.gen_range(0.2..1.5));
            match rng.gen_range(0..6) {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                2 => format!("{c}*t^2"),
                3 => format!("{c}*sin({w}*t)"),
                4 => format!("{c}*cos({w}*t)"),
                _ => format!("{c}*exp({}*t)", round4(w / 5.0)),
            }
        })
        .collect();
    let text = terms.join(" + ");
    let f = TimeFunction::parse(&text).expect("generated expression parses");
    (text, f)
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}
