use std::fmt;
use std::ops::{Add, Sub};

/// A value in ½ℤ stored as its double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Nearest half-integer to `x`, if `x` is one up to 1e-9.
    pub fn from_f64(x: f64) -> Option<Self> {
        let twice = (2.0 * x).round();
        ((2.0 * x - twice).abs() < 1e-9).then_some(HalfInt(twice as i64))
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }

    /// The integer value, if this is an integer.
    pub fn as_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// 2j + 1 for an angular momentum j.
    pub fn multiplicity(self) -> usize {
        (self.0 + 1) as usize
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
