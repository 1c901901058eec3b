//! Uniform slack convention for floating-point inequality checks.
//!
//! An inequality `lhs <= rhs` holds iff
//! `lhs <= rhs + atol + rtol * max(|lhs|, |rhs|)`.

use serde::Serialize;

pub const DEFAULT_ATOL: f64 = 1e-9;
pub const DEFAULT_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: DEFAULT_ATOL, rtol: DEFAULT_RTOL }
    }
}

impl Tolerance {
    pub const fn new(atol: f64, rtol: f64) -> Self {
        Self { atol, rtol }
    }

    /// Same absolute and relative slack.
    pub const fn uniform(eps: f64) -> Self {
        Self { atol: eps, rtol: eps }
    }

    pub fn slack(&self, lhs: f64, rhs: f64) -> f64 {
        self.atol + self.rtol * lhs.abs().max(rhs.abs())
    }

    /// `lhs <= rhs` up to slack. NaN on either side never holds.
    pub fn le(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.slack(lhs, rhs)
    }

    pub fn ge(&self, lhs: f64, rhs: f64) -> bool {
        self.le(rhs, lhs)
    }

    pub fn eq(&self, lhs: f64, rhs: f64) -> bool {
        (lhs - rhs).abs() <= self.slack(lhs, rhs)
    }

    /// Strict `lhs > rhs` beyond slack.
    pub fn gt(&self, lhs: f64, rhs: f64) -> bool {
        lhs > rhs + self.slack(lhs, rhs)
    }
}
