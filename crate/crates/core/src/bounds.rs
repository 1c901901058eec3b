//! Global upper bounds on the Jensen functional over `[a, b]`.
//!
//! `T_f(a, b) = max_p [p f(a) + q f(b) - f(p a + q b)]` is the sharp bound and
//! `T'_f(a, b) = F(a, b)` the closed-form one. The objective in `p` is concave
//! whenever `f` is convex, so a golden-section search finds its global maximum.

use serde::Serialize;

use crate::domain::WeightPair;
use crate::error::{Error, Result};
use crate::function::ConvexFunction;
use crate::gap::{midpoint_gap, weighted_gap};
use crate::tolerance::Tolerance;

pub const DEFAULT_TOL_P: f64 = 1e-10;
pub const MAX_GOLDEN_ITERATIONS: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub t_opt: f64,
    pub t_prime: f64,
    pub argmax_p: f64,
    pub iterations: usize,
}

impl BoundReport {
    pub fn dominance(&self, tol: Tolerance) -> bool {
        tol.le(self.t_opt, self.t_prime)
    }
}

/// `T'_f(a, b) = f(a) + f(b) - 2 f((a + b) / 2)`.
pub fn t_prime(f: &ConvexFunction) -> f64 {
    let d = f.domain();
    midpoint_gap(f, d.a(), d.b()).expect("endpoints lie in the domain")
}

/// Endpoint weighted gap as a function of `p`.
pub fn endpoint_gap(f: &ConvexFunction, p: f64) -> f64 {
    let d = f.domain();
    let q = 1.0 - p;
    let (a, b) = (d.a(), d.b());
    p * f.value(a) + q * f.value(b) - f.value((p * a + q * b).clamp(a, b))
}

/// Maximizes [`endpoint_gap`] over `p in [0, 1]` by golden-section search,
/// stopping once the bracket is narrower than `tol_p`.
pub fn t_opt(f: &ConvexFunction, tol_p: f64) -> Result<BoundReport> {
    if tol_p.is_nan() || tol_p <= 0.0 {
        return Err(Error::Tolerance(tol_p));
    }
    let h = |p: f64| endpoint_gap(f, p);

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut hc, mut hd) = (h(c), h(d));
    let mut iterations = 0;
    while hi - lo > tol_p {
        if iterations == MAX_GOLDEN_ITERATIONS {
            return Err(Error::Convergence(format!(
                "golden-section bracket [{lo}, {hi}] still wider than {tol_p} after {iterations} iterations"
            )));
        }
        iterations += 1;
        if hc >= hd {
            hi = d;
            d = c;
            hd = hc;
            c = hi - INV_PHI * (hi - lo);
            hc = h(c);
        } else {
            lo = c;
            c = d;
            hc = hd;
            d = lo + INV_PHI * (hi - lo);
            hd = h(d);
        }
    }
    let (mut argmax_p, mut best) = if hc >= hd { (c, hc) } else { (d, hd) };
    // The endpoints p = 0 and p = 1 give exactly zero.
    if best < 0.0 {
        argmax_p = if lo < 0.5 { 0.0 } else { 1.0 };
        best = 0.0;
    }
    Ok(BoundReport { t_opt: best, t_prime: t_prime(f), argmax_p, iterations })
}

/// Both links of `F*(p, q; x, y) <= F(x, y) <= F(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropZCheck {
    pub weighted_gap: f64,
    pub pair_gap: f64,
    pub endpoint_gap: f64,
    pub first_link: bool,
    pub second_link: bool,
}

impl PropZCheck {
    pub fn holds(&self) -> bool {
        self.first_link && self.second_link
    }
}

pub fn prop_z_check(
    f: &ConvexFunction,
    w: WeightPair,
    x: f64,
    y: f64,
    tol: Tolerance,
) -> Result<PropZCheck> {
    let fstar = weighted_gap(f, w, x, y)?;
    let pair = midpoint_gap(f, x, y)?;
    let ends = t_prime(f);
    Ok(PropZCheck {
        weighted_gap: fstar,
        pair_gap: pair,
        endpoint_gap: ends,
        first_link: tol.le(fstar, pair),
        second_link: tol.le(pair, ends),
    })
}
