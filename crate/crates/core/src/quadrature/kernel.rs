//! Nonnegative weight functions `g` and the built-in catalog.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::domain::Interval;
use crate::error::{Error, Result};
use crate::function::PiecewiseLinear;

use super::simpson::integrate;

/// Interior points probed for nonnegativity at construction.
pub const KERNEL_PROBE_POINTS: usize = 1001;
/// Largest negative value tolerated by the nonnegativity probe.
pub const KERNEL_NEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SineVariant {
    /// `sin t` on `[0, pi]`.
    FullSine,
    /// `sin t` on `[0, pi/2]`; its symmetrization is `sin t + cos t`.
    SinPlusCos,
}

#[derive(Clone)]
pub struct Kernel {
    domain: Interval,
    label: String,
    singular_endpoints: bool,
    closed_mass: Option<f64>,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("singular_endpoints", &self.singular_endpoints)
            .field("closed_mass", &self.closed_mass)
            .finish()
    }
}

impl Kernel {
    /// Builds a kernel and probes it for nonnegativity on the interior.
    pub fn new(
        domain: Interval,
        label: impl Into<String>,
        singular_endpoints: bool,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let step = domain.width() / (KERNEL_PROBE_POINTS + 1) as f64;
        for i in 1..=KERNEL_PROBE_POINTS {
            let t = domain.a() + step * i as f64;
            let v = g(t);
            if !v.is_finite() {
                return Err(Error::NonFinite { at: t, value: v });
            }
            if v < -KERNEL_NEG_TOL {
                return Err(Error::NegativeKernel { at: t, value: v });
            }
        }
        Ok(Self {
            domain,
            label: label.into(),
            singular_endpoints,
            closed_mass: None,
            evaluator: Arc::new(g),
        })
    }

    fn with_mass(mut self, mass: f64) -> Self {
        self.closed_mass = Some(mass);
        self
    }

    /// `g = 1`.
    pub fn uniform(domain: Interval) -> Result<Self> {
        Ok(Self::new(domain, "uniform", false, |_| 1.0)?.with_mass(domain.width()))
    }

    /// `g(t) = t^(alpha - 1)` on `[a, b]` with `a > 0`; mass `(b^alpha - a^alpha) / alpha`.
    pub fn power(domain: Interval, alpha: f64) -> Result<Self> {
        if domain.a() <= 0.0 {
            return Err(Error::DomainRequirement(format!(
                "power kernel requires a > 0, got a = {}",
                domain.a()
            )));
        }
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::Parameter(format!("power kernel exponent must be finite and nonzero, got {alpha}")));
        }
        let exponent = alpha - 1.0;
        let mass = (domain.b().powf(alpha) - domain.a().powf(alpha)) / alpha;
        Ok(Self::new(domain, format!("power:{alpha}"), alpha < 1.0, move |t| t.powf(exponent))?
            .with_mass(mass))
    }

    /// `g(t) = 1 / (t (a + b - t))`, symmetric under reflection; mass `2 ln(b/a) / (a + b)`.
    pub fn log_limit(domain: Interval) -> Result<Self> {
        if domain.a() <= 0.0 {
            return Err(Error::DomainRequirement(format!(
                "loglimit kernel requires a > 0, got a = {}",
                domain.a()
            )));
        }
        let (a, b) = (domain.a(), domain.b());
        let s = a + b;
        let mass = 2.0 * (b / a).ln() / s;
        Ok(Self::new(domain, "loglimit", false, move |t| 1.0 / (t * (s - t)))?.with_mass(mass))
    }

    pub fn sine(variant: SineVariant) -> Self {
        let (hi, label, mass) = match variant {
            SineVariant::FullSine => (PI, "sine", 2.0),
            SineVariant::SinPlusCos => (FRAC_PI_2, "sinpluscos", 1.0),
        };
        let domain = Interval::new(0.0, hi).expect("static interval");
        // `max(0)` guards against rounding at the far endpoint.
        Self::new(domain, label, false, |t: f64| t.sin().max(0.0))
            .expect("sine is nonnegative on its half period")
            .with_mass(mass)
    }

    /// Piecewise-linear kernel; must be nonnegative but need not be convex.
    pub fn piecewise_linear(pl: PiecewiseLinear, label: impl Into<String>) -> Result<Self> {
        let domain = pl.domain();
        Self::new(domain, label, false, move |t| pl.value(t))
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn singular_endpoints(&self) -> bool {
        self.singular_endpoints
    }

    /// Closed-form `int g`, when the kernel has one.
    pub fn closed_form_mass(&self) -> Option<f64> {
        self.closed_mass
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.evaluator)(t)
    }

    /// `g(t) + g(a + b - t)`.
    pub fn symmetrized(&self, t: f64) -> f64 {
        self.value(t) + self.value(self.domain.reflect(t))
    }

    /// Numerical `int g` over the kernel's domain.
    pub fn mass(&self, tol: f64) -> Result<f64> {
        integrate(|t| self.value(t), self.domain, tol)
    }
}
