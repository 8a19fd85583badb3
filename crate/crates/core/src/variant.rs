use std::fmt;

use serde::{Deserialize, Serialize};

/// A sign `ε = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl TryFrom<i32> for Sign {
    type Error = String;
    fn try_from(v: i32) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i32::from(*self))
    }
}

/// The sign pair `(ε₁, ε₂)`: `ε₁ = 1` is DS-I, `ε₁ = -1` is DS-II, and
/// `ε₂` is the sign of the cubic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant {
    pub eps1: Sign,
    pub eps2: Sign,
}

impl Variant {
    pub const fn new(eps1: Sign, eps2: Sign) -> Self {
        Variant { eps1, eps2 }
    }

    pub fn from_ints(eps1: i32, eps2: i32) -> Result<Self, String> {
        Ok(Variant {
            eps1: eps1.try_into()?,
            eps2: eps2.try_into()?,
        })
    }

    pub fn e1(&self) -> f64 {
        self.eps1.value()
    }

    pub fn e2(&self) -> f64 {
        self.eps2.value()
    }

    pub fn all() -> [Variant; 4] {
        use Sign::*;
        [
            Variant::new(Plus, Plus),
            Variant::new(Plus, Minus),
            Variant::new(Minus, Plus),
            Variant::new(Minus, Minus),
        ]
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.eps1 {
            Sign::Plus => "DS-I",
            Sign::Minus => "DS-II",
        };
        write!(f, "{name}(eps2={})", self.eps2)
    }
}
