//! Midpoint, weighted and n-point Jensen gaps, plus the elementary inequality
//! checks built on them.

use serde::Serialize;

use crate::domain::{WeightPair, WeightVector};
use crate::error::{Error, Result};
use crate::function::ConvexFunction;
use crate::tolerance::Tolerance;

/// Slack allowed on `x + y = a + b` in [`chord_sum_check`], scaled by `1 + |a| + |b|`.
pub const CHORD_SUM_TOL: f64 = 1e-12;

/// `F(s, t) = f(s) + f(t) - 2 f((s + t) / 2)`.
pub fn midpoint_gap(f: &ConvexFunction, s: f64, t: f64) -> Result<f64> {
    let fs = f.eval(s)?;
    let ft = f.eval(t)?;
    Ok(fs + ft - 2.0 * f.value((s + t) / 2.0))
}

/// `F*(p, q; x, y) = p f(x) + q f(y) - f(p x + q y)`.
pub fn weighted_gap(f: &ConvexFunction, w: WeightPair, x: f64, y: f64) -> Result<f64> {
    let fx = f.eval(x)?;
    let fy = f.eval(y)?;
    Ok(w.p() * fx + w.q() * fy - f.value(w.combine(x, y)))
}

/// `sum p_i f(x_i) - f(sum p_i x_i)`.
pub fn jensen_functional(f: &ConvexFunction, w: &WeightVector, xs: &[f64]) -> Result<f64> {
    if xs.len() != w.len() {
        return Err(Error::LengthMismatch { weights: w.len(), points: xs.len() });
    }
    let mut mean_value = 0.0;
    let mut centroid = 0.0;
    for (&p, &x) in w.weights().iter().zip(xs) {
        mean_value += p * f.eval(x)?;
        centroid += p * x;
    }
    // Rounding can push the centroid a hair past an endpoint.
    let d = f.domain();
    let centroid = centroid.clamp(d.a(), d.b());
    Ok(mean_value - f.value(centroid))
}

/// Outcome of the two-part three-point inequality for `x1 < x2 < x3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Check {
    /// `(f(x2) - f(x1)) / 2 <= f((x2 + x3)/2) - f((x1 + x3)/2)`
    pub part_i: bool,
    /// `(f(x3) - f(x2)) / 2 >= f((x1 + x3)/2) - f((x1 + x2)/2)`
    pub part_ii: bool,
    /// Left and right sides of part (i).
    pub part_i_sides: (f64, f64),
    /// Left and right sides of part (ii).
    pub part_ii_sides: (f64, f64),
}

impl Lemma1Check {
    pub fn holds(&self) -> bool {
        self.part_i && self.part_ii
    }
}

pub fn lemma1_check(
    f: &ConvexFunction,
    x1: f64,
    x2: f64,
    x3: f64,
    tol: Tolerance,
) -> Result<Lemma1Check> {
    if !(x1 < x2 && x2 < x3) {
        return Err(Error::Order(x1, x2, x3));
    }
    let (f1, f2, f3) = (f.eval(x1)?, f.eval(x2)?, f.eval(x3)?);
    let m12 = f.value((x1 + x2) / 2.0);
    let m13 = f.value((x1 + x3) / 2.0);
    let m23 = f.value((x2 + x3) / 2.0);

    let part_i_sides = ((f2 - f1) / 2.0, m23 - m13);
    let part_ii_sides = ((f3 - f2) / 2.0, m13 - m12);
    Ok(Lemma1Check {
        part_i: tol.le(part_i_sides.0, part_i_sides.1),
        part_ii: tol.ge(part_ii_sides.0, part_ii_sides.1),
        part_i_sides,
        part_ii_sides,
    })
}

/// For `x + y = a + b`, checks `f(x) + f(y) <= f(a) + f(b)`.
pub fn chord_sum_check(f: &ConvexFunction, x: f64, y: f64, tol: Tolerance) -> Result<bool> {
    let d = f.domain();
    let (a, b) = (d.a(), d.b());
    let off = (x + y - (a + b)).abs();
    if off > CHORD_SUM_TOL * (1.0 + a.abs() + b.abs()) {
        return Err(Error::Constraint(format!(
            "x + y = {} differs from a + b = {} by {off}",
            x + y,
            a + b
        )));
    }
    let lhs = f.eval(x)? + f.eval(y)?;
    let rhs = f.value(a) + f.value(b);
    Ok(tol.le(lhs, rhs))
}

/// Three ordered quantities expected to satisfy `lower <= middle <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chain {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

impl Chain {
    pub fn holds(&self, tol: Tolerance) -> bool {
        tol.le(self.lower, self.middle) && tol.le(self.middle, self.upper)
    }

    /// Smallest of the two slacks `middle - lower` and `upper - middle`.
    pub fn margin(&self) -> f64 {
        (self.middle - self.lower).min(self.upper - self.middle)
    }
}

/// `2f((a+b)/2) <= f(pa + qb) + f(pb + qa) <= f(a) + f(b)`.
pub fn chain4_bounds(f: &ConvexFunction, w: WeightPair) -> Chain {
    let d = f.domain();
    let (a, b) = (d.a(), d.b());
    Chain {
        lower: 2.0 * f.value(d.midpoint()),
        middle: f.value(w.combine(a, b)) + f.value(w.combine(b, a)),
        upper: f.value(a) + f.value(b),
    }
}
