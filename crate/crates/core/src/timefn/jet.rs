use std::ops::{Add, Mul, Neg, Sub};

/// A function value together with its first three derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet3 { value, d1, d2, d3 }
    }

    pub const fn constant(c: f64) -> Self {
        Jet3::new(c, 0.0, 0.0, 0.0)
    }

    /// The identity function evaluated at `t`.
    pub const fn variable(t: f64) -> Self {
        Jet3::new(t, 1.0, 0.0, 0.0)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.value, self.d1, self.d2, self.d3]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// Chain rule for `g ∘ self`, given `g, g', g'', g'''` at `self.value`.
    pub fn compose(&self, g: [f64; 4]) -> Jet3 {
        let (a, b, c) = (self.d1, self.d2, self.d3);
        Jet3 {
            value: g[0],
            d1: g[1] * a,
            d2: g[2] * a * a + g[1] * b,
            d3: g[3] * a * a * a + 3.0 * g[2] * a * b + g[1] * c,
        }
    }

    pub fn scale(&self, k: f64) -> Jet3 {
        Jet3::new(k * self.value, k * self.d1, k * self.d2, k * self.d3)
    }

    pub fn recip(&self) -> Jet3 {
        let x = self.value;
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn exp(&self) -> Jet3 {
        let e = self.value.exp();
        self.compose([e; 4])
    }

    pub fn ln(&self) -> Jet3 {
        let r = 1.0 / self.value;
        self.compose([self.value.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = self.value.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = self.value.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Jet3 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Jet3 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose([c, s, c, s])
    }

    /// `self^p`. Integer exponents use `powi`; others need a positive base.
    pub fn powf(&self, p: f64) -> Jet3 {
        let x = self.value;
        let pw = |e: f64| {
            if e == 0.0 {
                1.0
            } else if e.fract() == 0.0 {
                x.powi(e as i32)
            } else {
                x.powf(e)
            }
        };
        if p == 0.0 {
            return Jet3::constant(1.0);
        }
        // falling factorial vanishes for nonnegative integer p past order p
        let term = |c: f64, e: f64| if c == 0.0 { 0.0 } else { c * pw(e) };
        self.compose([
            pw(p),
            term(p, p - 1.0),
            term(p * (p - 1.0), p - 2.0),
            term(p * (p - 1.0) * (p - 2.0), p - 3.0),
        ])
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        Jet3::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

/// Leibniz rule, truncated at third order.
impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        let (f, g) = (self, o);
        Jet3 {
            value: f.value * g.value,
            d1: f.d1 * g.value + f.value * g.d1,
            d2: f.d2 * g.value + 2.0 * f.d1 * g.d1 + f.value * g.d2,
            d3: f.d3 * g.value + 3.0 * f.d2 * g.d1 + 3.0 * f.d1 * g.d2 + f.value * g.d3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_leibniz() {
        let f = Jet3::new(1.5, -0.25, 2.0, 0.75);
        let g = Jet3::new(-0.5, 3.0, 0.125, -1.0);
        let p = f * g;
        assert_eq!(p.value, f.value * g.value);
        assert_eq!(p.d1, f.d1 * g.value + f.value * g.d1);
        assert_eq!(p.d2, f.d2 * g.value + 2.0 * f.d1 * g.d1 + f.value * g.d2);
        assert_eq!(
            p.d3,
            f.d3 * g.value + 3.0 * f.d2 * g.d1 + 3.0 * f.d1 * g.d2 + f.value * g.d3
        );
    }

    #[test]
    fn exp_of_linear() {
        let j = Jet3::variable(0.0).scale(2.0).exp();
        assert_eq!(j.as_array(), [1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn recip_times_self_is_one() {
        let f = Jet3::new(2.0, 0.3, -0.7, 1.1);
        let one = f * f.recip();
        assert!((one.value - 1.0).abs() < 1e-15);
        assert!(one.d1.abs() < 1e-15 && one.d2.abs() < 1e-15 && one.d3.abs() < 1e-14);
    }
}
