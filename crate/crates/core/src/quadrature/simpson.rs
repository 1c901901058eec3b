//! Adaptive Simpson integration with endpoint-singularity peeling.

use crate::domain::Interval;
use crate::error::{Error, Result};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 60;
/// Levels that are always subdivided before the error test is trusted.
const MIN_DEPTH: u32 = 3;
/// Cap on geometrically shrinking panels next to a singular endpoint.
const MAX_PEEL_PANELS: u32 = 400;

/// Integrates `h` over `interval` targeting `|error| <= tol * (1 + |result|)`.
///
/// `h` must be finite in the interior. If it is non-finite at an endpoint, a
/// quarter of the interval next to that endpoint is replaced by panels
/// `[e + w 2^-(k+1), e + w 2^-k]` that shrink toward it, and the neglected tail
/// is extrapolated from the ratio of successive panel integrals.
pub fn integrate<H>(h: H, interval: Interval, tol: f64) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Tolerance(tol));
    }
    let (a, b) = (interval.a(), interval.b());
    let (fa, fb) = (h(a), h(b));
    let lo_singular = !fa.is_finite();
    let hi_singular = !fb.is_finite();
    if !lo_singular && !hi_singular {
        return simpson(&h, a, b, fa, fb, tol);
    }

    let peel = interval.width() / 4.0;
    let core_a = if lo_singular { a + peel } else { a };
    let core_b = if hi_singular { b - peel } else { b };
    let (ca, cb) = (finite(&h, core_a)?, finite(&h, core_b)?);
    let mut total = simpson(&h, core_a, core_b, ca, cb, tol)?;
    if lo_singular {
        total += peel_tail(&h, a, peel, tol, total)?;
    }
    if hi_singular {
        total += peel_tail(&h, b, -peel, tol, total)?;
    }
    Ok(total)
}

fn finite<H: Fn(f64) -> f64>(h: &H, t: f64) -> Result<f64> {
    let v = h(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: t, value: v })
    }
}

/// Sum of panels between `edge` and `edge + width` (width may be negative).
fn peel_tail<H: Fn(f64) -> f64>(h: &H, edge: f64, width: f64, tol: f64, core: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let mut last_ratio = f64::NAN;
    let mut outer = edge + width;
    let mut f_outer = finite(h, outer)?;
    for k in 0..MAX_PEEL_PANELS {
        let inner = edge + width / 2f64.powi(k as i32 + 1);
        if inner == edge || inner == outer {
            // Out of floating-point resolution; fall back to the extrapolated tail.
            if (0.0..1.0).contains(&last_ratio) {
                let panel = prev.unwrap_or(0.0);
                return Ok(sum + panel * last_ratio / (1.0 - last_ratio));
            }
            break;
        }
        let f_inner = finite(h, inner)?;
        // Orient each panel left-to-right.
        let panel = if width > 0.0 {
            simpson(h, inner, outer, f_inner, f_outer, tol)?
        } else {
            simpson(h, outer, inner, f_outer, f_inner, tol)?
        };
        sum += panel;
        if let Some(p) = prev {
            let ratio = if p != 0.0 { panel / p } else { 0.0 };
            last_ratio = ratio;
            if (0.0..1.0).contains(&ratio) {
                let remainder = panel * ratio / (1.0 - ratio);
                if remainder.abs() <= tol * (1.0 + (core + sum).abs()) {
                    return Ok(sum + remainder);
                }
            }
        }
        if panel == 0.0 && prev == Some(0.0) {
            return Ok(sum);
        }
        prev = Some(panel);
        outer = inner;
        f_outer = f_inner;
    }
    Err(Error::Convergence(format!(
        "endpoint tail at {edge} did not converge after {MAX_PEEL_PANELS} panels"
    )))
}

fn simpson<H: Fn(f64) -> f64>(h: &H, a: f64, b: f64, fa: f64, fb: f64, tol: f64) -> Result<f64> {
    let m = (a + b) / 2.0;
    let fm = finite(h, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let eps = tol * (1.0 + whole.abs());
    refine(h, Panel { a, m, b, fa, fm, fb, whole }, eps, 0)
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn refine<H: Fn(f64) -> f64>(h: &H, p: Panel, eps: f64, depth: u32) -> Result<f64> {
    let lm = (p.a + p.m) / 2.0;
    let rm = (p.m + p.b) / 2.0;
    let flm = finite(h, lm)?;
    let frm = finite(h, rm)?;
    let left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    let right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    let delta = left + right - p.whole;

    let converged = delta.abs() <= 15.0 * eps
        || delta.abs() <= 16.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth >= MIN_DEPTH && converged {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Convergence(format!(
            "adaptive Simpson exceeded depth {MAX_DEPTH} on [{}, {}]",
            p.a, p.b
        )));
    }
    let l = Panel { a: p.a, m: lm, b: p.m, fa: p.fa, fm: flm, fb: p.fm, whole: left };
    let r = Panel { a: p.m, m: rm, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right };
    Ok(refine(h, l, eps / 2.0, depth + 1)? + refine(h, r, eps / 2.0, depth + 1)?)
}
