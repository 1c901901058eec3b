//! Evaluable functions on an interval, tagged with how their convexity is known.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::domain::Interval;
use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

/// Probe points used to check finiteness at construction.
const PROBE_POINTS: usize = 101;

/// How convexity of a [`ConvexFunction`] is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Guaranteed by construction.
    ProvablyConvex,
    /// Midpoint convexity was spot-checked on a probe grid.
    Sampled,
    /// The caller's claim; nothing was checked.
    Asserted,
}

type AnalyticFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Evaluator {
    Analytic(AnalyticFn),
    PiecewiseLinear(PiecewiseLinear),
    QuadHinge(QuadHinge),
}

impl Evaluator {
    fn value(&self, x: f64) -> f64 {
        match self {
            Evaluator::Analytic(f) => f(x),
            Evaluator::PiecewiseLinear(pl) => pl.value(x),
            Evaluator::QuadHinge(qh) => qh.value(x),
        }
    }
}

/// A real function on a closed interval together with its convexity certificate.
///
/// Values are immutable after construction and cheap to clone.
#[derive(Clone)]
pub struct ConvexFunction {
    domain: Interval,
    label: String,
    certificate: Certificate,
    evaluator: Evaluator,
}

impl fmt::Debug for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("certificate", &self.certificate)
            .finish()
    }
}

impl ConvexFunction {
    fn build(
        domain: Interval,
        label: impl Into<String>,
        certificate: Certificate,
        evaluator: Evaluator,
    ) -> Result<Self> {
        let f = Self { domain, label: label.into(), certificate, evaluator };
        for x in domain.grid(PROBE_POINTS) {
            let v = f.value(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { at: x, value: v });
            }
        }
        Ok(f)
    }

    fn analytic(
        domain: Interval,
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(domain, label, Certificate::ProvablyConvex, Evaluator::Analytic(Arc::new(f)))
    }

    pub fn square(domain: Interval) -> Result<Self> {
        Self::analytic(domain, "square", |x| x * x)
    }

    /// `x^k` for `k >= 1` on a nonnegative domain.
    pub fn power(domain: Interval, k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(Error::Parameter(format!("power exponent {k} must be >= 1")));
        }
        if domain.a() < 0.0 {
            return Err(Error::DomainRequirement(format!("power:{k} requires a >= 0")));
        }
        Self::analytic(domain, format!("power:{k}"), move |x| x.powf(k))
    }

    pub fn exp(domain: Interval) -> Result<Self> {
        Self::analytic(domain, "exp", f64::exp)
    }

    pub fn cosh(domain: Interval) -> Result<Self> {
        Self::analytic(domain, "cosh", f64::cosh)
    }

    /// `|x - c|`
    pub fn abs_shift(domain: Interval, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Parameter(format!("abs_shift center {c} is not finite")));
        }
        Self::analytic(domain, format!("abs_shift:{c}"), move |x| (x - c).abs())
    }

    /// `-ln x`, which needs `a > 0`.
    pub fn neg_log(domain: Interval) -> Result<Self> {
        if domain.a() <= 0.0 {
            return Err(Error::DomainRequirement("neglog requires a > 0".into()));
        }
        Self::analytic(domain, "neglog", |x: f64| -x.ln())
    }

    /// `c0 + c1 x`
    pub fn affine(domain: Interval, c0: f64, c1: f64) -> Result<Self> {
        Self::analytic(domain, format!("affine:{c0},{c1}"), move |x| c0 + c1 * x)
    }

    pub fn quad_hinge(domain: Interval, qh: QuadHinge) -> Result<Self> {
        let label = qh.label.clone();
        Self::build(domain, label, Certificate::ProvablyConvex, Evaluator::QuadHinge(qh))
    }

    /// Piecewise-linear interpolant; rejected unless its slopes are nondecreasing.
    pub fn piecewise_linear(pl: PiecewiseLinear) -> Result<Self> {
        if let Some(i) = pl.first_slope_decrease() {
            return Err(Error::NotConvex(format!(
                "slope decreases from {} to {} at x = {}",
                pl.slopes[i],
                pl.slopes[i + 1],
                pl.xs[i + 1]
            )));
        }
        let domain = pl.domain();
        Self::build(domain, "piecewise_linear", Certificate::ProvablyConvex, Evaluator::PiecewiseLinear(pl))
    }

    /// Piecewise-linear interpolant whose convexity is only claimed by the caller.
    pub fn piecewise_linear_asserted(pl: PiecewiseLinear) -> Result<Self> {
        let certificate = if pl.first_slope_decrease().is_none() {
            Certificate::ProvablyConvex
        } else {
            Certificate::Asserted
        };
        let domain = pl.domain();
        Self::build(domain, "piecewise_linear", certificate, Evaluator::PiecewiseLinear(pl))
    }

    /// Wraps an arbitrary closure, checking midpoint convexity on all pairs of
    /// an `n_probe`-point grid.
    pub fn sampled(
        domain: Interval,
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        n_probe: usize,
        tol: Tolerance,
    ) -> Result<Self> {
        let func = Self::build(domain, label, Certificate::Sampled, Evaluator::Analytic(Arc::new(f)))?;
        let grid = domain.grid(n_probe.max(3));
        for (i, &s) in grid.iter().enumerate() {
            for &t in &grid[i + 1..] {
                let lhs = 2.0 * func.value((s + t) / 2.0);
                let rhs = func.value(s) + func.value(t);
                if !tol.le(lhs, rhs) {
                    return Err(Error::NotConvex(format!(
                        "midpoint test fails at s = {s}, t = {t}: 2f(mid) = {lhs} > {rhs}"
                    )));
                }
            }
        }
        Ok(func)
    }

    /// Wraps an arbitrary closure on the caller's word.
    pub fn asserted(
        domain: Interval,
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(domain, label, Certificate::Asserted, Evaluator::Analytic(Arc::new(f)))
    }

    /// Reads a two-column `x,f(x)` CSV and certifies it.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        Self::piecewise_linear(PiecewiseLinear::from_csv_path(path)?)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    /// Evaluates at `x`, rejecting points outside the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.domain.check(x)?;
        Ok(self.evaluator.value(x))
    }

    /// Evaluates without a domain check.
    pub fn value(&self, x: f64) -> f64 {
        self.evaluator.value(x)
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// `c0 + c1 x + quad x^2 + sum_k w_k max(0, x - t_k)` with `quad >= 0`, `w_k >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadHinge {
    pub c0: f64,
    pub c1: f64,
    pub quad: f64,
    /// `(knot, weight)` pairs.
    pub hinges: Vec<(f64, f64)>,
    #[serde(skip)]
    label: String,
}

impl QuadHinge {
    pub fn new(c0: f64, c1: f64, quad: f64, hinges: Vec<(f64, f64)>) -> Result<Self> {
        if !(c0.is_finite() && c1.is_finite() && quad.is_finite()) {
            return Err(Error::Parameter("quad_hinge coefficients must be finite".into()));
        }
        if quad < 0.0 {
            return Err(Error::Parameter(format!("quadratic coefficient {quad} is negative")));
        }
        for &(t, w) in &hinges {
            if !(t.is_finite() && w.is_finite() && w >= 0.0) {
                return Err(Error::Parameter(format!("invalid hinge (knot {t}, weight {w})")));
            }
        }
        Ok(Self { c0, c1, quad, hinges, label: "quad_hinge".into() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_affine(&self) -> bool {
        self.quad == 0.0 && self.hinges.iter().all(|&(_, w)| w == 0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        let hinge: f64 = self.hinges.iter().map(|&(t, w)| w * (x - t).max(0.0)).sum();
        self.c0 + self.c1 * x + self.quad * x * x + hinge
    }
}

/// Linear interpolant through sorted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Samples(format!("need at least 2 samples, got {}", samples.len())));
        }
        if let Some(&(x, y)) = samples.iter().find(|(x, y)| !(x.is_finite() && y.is_finite())) {
            return Err(Error::Samples(format!("non-finite sample ({x}, {y})")));
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::Samples(format!(
                "x values must be strictly increasing: {} then {}",
                w[0].0, w[1].0
            )));
        }
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let slopes = samples
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        Ok(Self { xs, ys, slopes })
    }

    /// Parses `x,f(x)` rows. A first row whose first field is not a number is
    /// treated as a header.
    pub fn parse_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut samples = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Samples(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Samples(format!(
                    "row {} has {} fields, expected 2",
                    row + 1,
                    record.len()
                )));
            }
            let x = record[0].parse::<f64>();
            if row == 0 && x.is_err() {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Samples(format!("row {}: '{s}' is not a number", row + 1)))
            };
            samples.push((parse(&record[0])?, parse(&record[1])?));
        }
        Ok(samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::new(&Self::parse_csv(file)?)
    }

    pub fn domain(&self) -> Interval {
        // Construction guarantees strictly increasing finite xs.
        Interval::new(self.xs[0], self.xs[self.xs.len() - 1]).expect("sorted samples")
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Index `i` such that `slopes[i] > slopes[i + 1]`, if any.
    pub fn first_slope_decrease(&self) -> Option<usize> {
        self.slopes.windows(2).position(|w| w[0] > w[1])
    }

    pub fn is_convex(&self) -> bool {
        self.first_slope_decrease().is_none()
    }

    /// Interpolated value; outside the sample range the end pieces extend linearly.
    pub fn value(&self, x: f64) -> f64 {
        let seg = self.xs.partition_point(|&xi| xi <= x).clamp(1, self.xs.len() - 1) - 1;
        if x == self.xs[seg + 1] {
            return self.ys[seg + 1];
        }
        self.ys[seg] + self.slopes[seg] * (x - self.xs[seg])
    }
}
