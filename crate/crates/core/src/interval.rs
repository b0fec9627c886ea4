use serde::Serialize;

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo <= hi`. Either end may be infinite.
///
/// Regions that can be empty are returned as `Option<Interval>`; an
/// `Interval` value is never empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::domain(format!(
                "interval needs lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// `Some([lo, hi])` when `lo <= hi`, `None` otherwise.
    pub fn nonempty(lo: f64, hi: f64) -> Option<Self> {
        Interval::new(lo, hi).ok()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Membership with an absolute slack on both ends.
    pub fn contains_with_slack(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    /// True when `other` lies within `self`, widened by `slack`.
    pub fn encloses(&self, other: &Interval, slack: f64) -> bool {
        self.lo - slack <= other.lo && other.hi <= self.hi + slack
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Mirror image about zero.
    pub fn reflect(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
