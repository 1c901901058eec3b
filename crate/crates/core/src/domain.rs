//! Intervals and weight families.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on the weight sum before renormalization.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Closed interval `[a, b]` with finite endpoints and `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    /// The interval `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn check(&self, x: f64) -> Result<f64> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::Domain { x, a: self.a, b: self.b })
        }
    }

    /// Reflection `t -> a + b - t`, which maps the interval onto itself.
    pub fn reflect(&self, t: f64) -> f64 {
        self.a + self.b - t
    }

    /// `n >= 2` equally spaced points; both endpoints are hit exactly.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let step = self.width() / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| self.a + step * i as f64).collect();
        pts[n - 1] = self.b;
        pts
    }

    /// Endpoints agree to within `tol * (1 + |endpoint|)`.
    pub fn approx_eq(&self, other: &Interval, tol: f64) -> bool {
        (self.a - other.a).abs() <= tol * (1.0 + self.a.abs())
            && (self.b - other.b).abs() <= tol * (1.0 + self.b.abs())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.a + self.b).abs() <= tol * (1.0 + self.b.abs())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Two nonnegative weights summing to one; `q` is stored as `1 - p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightPair {
    p: f64,
    q: f64,
}

impl WeightPair {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && (0.0..=1.0).contains(&p) {
            Ok(Self { p, q: 1.0 - p })
        } else {
            Err(Error::InvalidWeights(format!("p = {p} is not in [0, 1]")))
        }
    }

    pub fn half() -> Self {
        Self { p: 0.5, q: 0.5 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p x + q y`
    pub fn combine(&self, x: f64, y: f64) -> f64 {
        self.p * x + self.q * y
    }

    pub fn swapped(&self) -> Self {
        Self { p: self.q, q: self.p }
    }
}

/// Probability vector of length at least two.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Accepts weights whose sum is within [`WEIGHT_SUM_TOL`] of one and
    /// renormalizes them.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let sum = Self::validate(&weights)?;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self::renormalized(weights, sum))
    }

    /// Scales arbitrary nonnegative weights with a positive sum onto the simplex.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum = Self::validate(&weights)?;
        if sum <= 0.0 {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        Ok(Self::renormalized(weights, sum))
    }

    fn validate(weights: &[f64]) -> Result<f64> {
        if weights.len() < 2 {
            return Err(Error::InvalidWeights(format!(
                "need at least 2 weights, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or non-finite")));
        }
        Ok(weights.iter().sum())
    }

    fn renormalized(mut weights: Vec<f64>, sum: f64) -> Self {
        for w in &mut weights {
            *w /= sum;
        }
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl From<WeightPair> for WeightVector {
    fn from(w: WeightPair) -> Self {
        Self { weights: vec![w.p, w.q] }
    }
}
