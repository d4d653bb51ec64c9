//! Minimal SI dimension tags carried through the feasibility formulas.
//!
//! Every check compares two [`Quantity`] values; constructing a comparison
//! with mismatched dimensions is a programming error and asserts.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Integer exponents over the SI base units used here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dim {
    pub m: i8,
    pub kg: i8,
    pub s: i8,
    pub k: i8,
    pub a: i8,
}

impl Dim {
    pub const NONE: Dim = Dim { m: 0, kg: 0, s: 0, k: 0, a: 0 };
    pub const METER: Dim = Dim { m: 1, kg: 0, s: 0, k: 0, a: 0 };
    pub const KILOGRAM: Dim = Dim { m: 0, kg: 1, s: 0, k: 0, a: 0 };
    pub const SECOND: Dim = Dim { m: 0, kg: 0, s: 1, k: 0, a: 0 };
    pub const KELVIN: Dim = Dim { m: 0, kg: 0, s: 0, k: 1, a: 0 };
    pub const AMPERE: Dim = Dim { m: 0, kg: 0, s: 0, k: 0, a: 1 };
    pub const HERTZ: Dim = Dim { m: 0, kg: 0, s: -1, k: 0, a: 0 };
    pub const PASCAL: Dim = Dim { m: -1, kg: 1, s: -2, k: 0, a: 0 };
    pub const JOULE: Dim = Dim { m: 2, kg: 1, s: -2, k: 0, a: 0 };
    pub const WATT: Dim = Dim { m: 2, kg: 1, s: -3, k: 0, a: 0 };
    pub const TESLA: Dim = Dim { m: 0, kg: 1, s: -2, k: 0, a: -1 };
    pub const VOLT_PER_METER: Dim = Dim { m: 1, kg: 1, s: -3, k: 0, a: -1 };

    pub const fn mul(self, rhs: Dim) -> Dim {
        Dim {
            m: self.m + rhs.m,
            kg: self.kg + rhs.kg,
            s: self.s + rhs.s,
            k: self.k + rhs.k,
            a: self.a + rhs.a,
        }
    }

    pub const fn div(self, rhs: Dim) -> Dim {
        Dim {
            m: self.m - rhs.m,
            kg: self.kg - rhs.kg,
            s: self.s - rhs.s,
            k: self.k - rhs.k,
            a: self.a - rhs.a,
        }
    }

    pub const fn pow(self, e: i8) -> Dim {
        Dim {
            m: self.m * e,
            kg: self.kg * e,
            s: self.s * e,
            k: self.k * e,
            a: self.a * e,
        }
    }

    fn root(self, k: i8) -> Dim {
        assert!(
            self.m % k == 0 && self.kg % k == 0 && self.s % k == 0 && self.k % k == 0
                && self.a % k == 0,
            "dimension {self} has no integer {k}-th root"
        );
        Dim {
            m: self.m / k,
            kg: self.kg / k,
            s: self.s / k,
            k: self.k / k,
            a: self.a / k,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            ("m", self.m),
            ("kg", self.kg),
            ("s", self.s),
            ("K", self.k),
            ("A", self.a),
        ]
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(u, e)| if *e == 1 { (*u).to_string() } else { format!("{u}^{e}") })
        .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A value with an SI dimension tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dim: Dim,
}

pub const fn qty(value: f64, dim: Dim) -> Quantity {
    Quantity { value, dim }
}

pub const fn scalar(value: f64) -> Quantity {
    qty(value, Dim::NONE)
}

impl Quantity {
    pub fn sqrt(self) -> Quantity {
        qty(self.value.sqrt(), self.dim.root(2))
    }

    pub fn root(self, k: i8) -> Quantity {
        qty(self.value.powf(1.0 / k as f64), self.dim.root(k))
    }

    pub fn powi(self, e: i8) -> Quantity {
        qty(self.value.powi(e as i32), self.dim.pow(e))
    }

    pub fn abs(self) -> Quantity {
        qty(self.value.abs(), self.dim)
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        qty(self.value * rhs.value, self.dim.mul(rhs.dim))
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        qty(self.value / rhs.value, self.dim.div(rhs.dim))
    }
}

impl Add for Quantity {
    type Output = Quantity;
    fn add(self, rhs: Quantity) -> Quantity {
        assert_eq!(self.dim, rhs.dim, "adding {} to {}", self.dim, rhs.dim);
        qty(self.value + rhs.value, self.dim)
    }
}

impl Sub for Quantity {
    type Output = Quantity;
    fn sub(self, rhs: Quantity) -> Quantity {
        assert_eq!(self.dim, rhs.dim, "subtracting {} from {}", rhs.dim, self.dim);
        qty(self.value - rhs.value, self.dim)
    }
}

impl Neg for Quantity {
    type Output = Quantity;
    fn neg(self) -> Quantity {
        qty(-self.value, self.dim)
    }
}

impl Mul<f64> for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: f64) -> Quantity {
        qty(self.value * rhs, self.dim)
    }
}

impl Mul<Quantity> for f64 {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        qty(self * rhs.value, rhs.dim)
    }
}

impl Div<f64> for Quantity {
    type Output = Quantity;
    fn div(self, rhs: f64) -> Quantity {
        qty(self.value / rhs, self.dim)
    }
}
