use serde::Serialize;

use crate::domain::WeightPair;
use crate::error::{Error, Result};
use crate::function::ConvexFunction;
use crate::gap::{chain4_bounds, Chain};
use crate::tolerance::Tolerance;

use super::kernel::Kernel;
use super::simpson::{integrate, DEFAULT_QUAD_TOL};

/// Kernel and function domains may differ by this much, relative to `1 + |endpoint|`.
pub const DOMAIN_MATCH_TOL: f64 = 1e-8;
pub const DEFAULT_HH_POINTS: usize = 10_000;

/// `2 f(mid) M <= int (g(t) + g(a+b-t)) f(t) dt <= (f(a) + f(b)) M` with `M = int g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Enclosure {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub kernel_mass: f64,
}

impl Enclosure {
    pub fn chain(&self) -> Chain {
        Chain { lower: self.lower, middle: self.middle, upper: self.upper }
    }

    pub fn holds(&self, tol: Tolerance) -> bool {
        self.chain().holds(tol) && tol.ge(self.kernel_mass, 0.0)
    }

    /// The chain divided by the kernel mass.
    pub fn normalized(&self) -> Chain {
        let m = self.kernel_mass;
        Chain { lower: self.lower / m, middle: self.middle / m, upper: self.upper / m }
    }
}

pub fn weighted_enclosure(f: &ConvexFunction, g: &Kernel) -> Result<Enclosure> {
    weighted_enclosure_with(f, g, DEFAULT_QUAD_TOL)
}

pub fn weighted_enclosure_with(f: &ConvexFunction, g: &Kernel, tol: f64) -> Result<Enclosure> {
    let d = f.domain();
    let k = g.domain();
    if !d.approx_eq(&k, DOMAIN_MATCH_TOL) {
        return Err(Error::DomainMismatch { fa: d.a(), fb: d.b(), ka: k.a(), kb: k.b() });
    }
    let mass = integrate(|t| g.value(t), d, tol)?;
    let middle = integrate(|t| (g.value(t) + g.value(d.reflect(t))) * f.value(t), d, tol)?;
    Ok(Enclosure {
        lower: 2.0 * f.value(d.midpoint()) * mass,
        middle,
        upper: (f.value(d.a()) + f.value(d.b())) * mass,
        kernel_mass: mass,
    })
}

/// `int (f(t) + f(a+b-t)) g(t) dt`, the other side of the change-of-variables
/// identity behind the enclosure's middle term.
pub fn reflected_function_integral(f: &ConvexFunction, g: &Kernel, tol: f64) -> Result<f64> {
    let d = f.domain();
    integrate(|t| (f.value(t) + f.value(d.reflect(t))) * g.value(t), d, tol)
}

/// The enclosure on `[-a, a]`, where reflection is `t -> -t`.
pub fn symmetric_convolution_enclosure(f: &ConvexFunction, g: &Kernel, a: f64) -> Result<Enclosure> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::DomainRequirement(format!("half-width must be positive, got {a}")));
    }
    for (what, dom) in [("function", f.domain()), ("kernel", g.domain())] {
        let scale = 1.0 + a;
        if (dom.a() + a).abs() > DOMAIN_MATCH_TOL * scale || (dom.b() - a).abs() > DOMAIN_MATCH_TOL * scale {
            return Err(Error::DomainRequirement(format!(
                "{what} domain {dom} is not the symmetric interval [-{a}, {a}]"
            )));
        }
    }
    let d = f.domain();
    let mass = integrate(|t| g.value(t), d, DEFAULT_QUAD_TOL)?;
    let middle = integrate(|t| (g.value(-t) + g.value(t)) * f.value(t), d, DEFAULT_QUAD_TOL)?;
    Ok(Enclosure {
        lower: 2.0 * f.value(0.0) * mass,
        middle,
        upper: (f.value(-a) + f.value(a)) * mass,
        kernel_mass: mass,
    })
}

/// Hermite-Hadamard chain obtained by averaging the pointwise chain over `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HhRecovery {
    /// `(f(mid), mean of f, (f(a) + f(b)) / 2)`, the mean from quadrature.
    pub chain: Chain,
    /// Midpoint-rule average over `p` of `(f(pa+qb) + f(pb+qa)) / 2`.
    pub p_average: f64,
    /// `|p_average - mean| / max(1, |mean|)`.
    pub discrepancy: f64,
}

/// Mean of `f` two ways: averaging the pointwise chain's middle over `n_p`
/// midpoint-rule values of `p`, and by adaptive quadrature. They must agree
/// within `10 / n_p^2` relative to `max(1, |mean|)`.
pub fn hh_recover(f: &ConvexFunction, n_p: usize) -> Result<HhRecovery> {
    if n_p < 2 {
        return Err(Error::Parameter(format!("n_p must be at least 2, got {n_p}")));
    }
    let sum: f64 = (0..n_p)
        .map(|k| {
            let w = WeightPair::new((k as f64 + 0.5) / n_p as f64).expect("p in (0, 1)");
            chain4_bounds(f, w).middle
        })
        .sum();
    let p_average = sum / n_p as f64 / 2.0;

    let d = f.domain();
    let mean = integrate(|t| f.value(t), d, DEFAULT_QUAD_TOL)? / d.width();
    let discrepancy = (p_average - mean).abs() / mean.abs().max(1.0);
    let allowed = 10.0 / (n_p as f64 * n_p as f64);
    if discrepancy > allowed {
        return Err(Error::CrossCheck(format!(
            "p-average {p_average} and quadrature mean {mean} differ by {discrepancy:e} > {allowed:e}"
        )));
    }
    Ok(HhRecovery {
        chain: Chain {
            lower: f.value(d.midpoint()),
            middle: mean,
            upper: (f.value(d.a()) + f.value(d.b())) / 2.0,
        },
        p_average,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, PI};

    use approx::assert_relative_eq;

    use super::*;
    use crate::domain::Interval;
    use crate::quadrature::SineVariant;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn uniform_kernel_on_square() {
        let f = ConvexFunction::square(iv(0.0, 1.0)).unwrap();
        let e = weighted_enclosure(&f, &Kernel::uniform(iv(0.0, 1.0)).unwrap()).unwrap();
        assert_relative_eq!(e.lower, 0.5, max_relative = 1e-12);
        assert_relative_eq!(e.middle, 2.0 / 3.0, max_relative = 1e-10);
        assert_relative_eq!(e.upper, 1.0, max_relative = 1e-12);
        assert!(e.holds(Tolerance::default()));
    }

    #[test]
    fn affine_function_with_symmetric_kernel_is_tight() {
        let f = ConvexFunction::affine(iv(1.0, 2.0), -0.5, 2.0).unwrap();
        let g = Kernel::log_limit(iv(1.0, 2.0)).unwrap();
        let e = weighted_enclosure(&f, &g).unwrap();
        assert_relative_eq!(e.lower, e.middle, max_relative = 1e-8);
        assert_relative_eq!(e.middle, e.upper, max_relative = 1e-8);
    }

    #[test]
    fn exp_with_sine_kernel() {
        let f = ConvexFunction::exp(iv(0.0, PI)).unwrap();
        let e = weighted_enclosure(&f, &Kernel::sine(SineVariant::FullSine)).unwrap();
        // int_0^pi 2 sin t e^t dt = e^pi + 1
        assert_relative_eq!(e.middle, PI.exp() + 1.0, max_relative = 1e-9);
        assert!(e.holds(Tolerance::default()));
    }

    #[test]
    fn sine_kernel_chains() {
        let tol = Tolerance::uniform(1e-8);
        let lin = ConvexFunction::affine(iv(0.0, PI), 0.0, 1.0).unwrap();
        let e = weighted_enclosure(&lin, &Kernel::sine(SineVariant::FullSine)).unwrap();
        // Halving gives the display with a single sin t weight.
        for v in [e.lower, e.middle, e.upper] {
            assert!((v / 2.0 - PI).abs() < 1e-8, "{v}");
        }

        let sq = ConvexFunction::square(iv(0.0, PI)).unwrap();
        let c = weighted_enclosure(&sq, &Kernel::sine(SineVariant::FullSine)).unwrap().chain();
        assert_relative_eq!(c.lower / 2.0, 2.0 * (PI / 2.0).powi(2), max_relative = 1e-12);
        assert_relative_eq!(c.middle / 2.0, PI * PI - 4.0, max_relative = 1e-9);
        assert_relative_eq!(c.upper / 2.0, PI * PI, max_relative = 1e-12);
        assert!(c.holds(tol));

        let constant = ConvexFunction::affine(iv(0.0, PI / 2.0), 1.75, 0.0).unwrap();
        let e = weighted_enclosure(&constant, &Kernel::sine(SineVariant::SinPlusCos)).unwrap();
        for v in [e.lower, e.middle, e.upper] {
            assert!((v - 2.0 * 1.75).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn domain_mismatch() {
        let f = ConvexFunction::square(iv(0.0, 1.0)).unwrap();
        let g = Kernel::uniform(iv(0.0, 2.0)).unwrap();
        assert!(matches!(weighted_enclosure(&f, &g), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn nearly_pi_interval_matches_sine_kernel() {
        let f = ConvexFunction::square(iv(0.0, 3.14159265)).unwrap();
        assert!(weighted_enclosure(&f, &Kernel::sine(SineVariant::FullSine)).is_ok());
    }

    #[test]
    fn symmetric_convolution_examples() {
        let i = Interval::symmetric(1.0).unwrap();
        let f = ConvexFunction::square(i).unwrap();
        let e = symmetric_convolution_enclosure(&f, &Kernel::uniform(i).unwrap(), 1.0).unwrap();
        assert_eq!(e.lower, 0.0);
        assert_relative_eq!(e.middle, 4.0 / 3.0, max_relative = 1e-10);
        // (f(-1) + f(1)) * int g = 2 * 2
        assert_relative_eq!(e.upper, 4.0, max_relative = 1e-12);

        let tent = Kernel::new(i, "tent", false, |t: f64| 1.0 - t.abs()).unwrap();
        let lin = ConvexFunction::affine(i, 0.7, -1.3).unwrap();
        let e = symmetric_convolution_enclosure(&lin, &tent, 1.0).unwrap();
        assert_relative_eq!(e.lower, e.middle, max_relative = 1e-8);
        assert_relative_eq!(e.middle, e.upper, max_relative = 1e-8);

        let c = ConvexFunction::cosh(i).unwrap();
        let e = symmetric_convolution_enclosure(&c, &tent, 1.0).unwrap();
        // int_-1^1 2 (1 - |t|) cosh t dt = 4 (cosh 1 - 1)
        assert_relative_eq!(e.middle, 4.0 * (1f64.cosh() - 1.0), max_relative = 1e-9);
        assert!(e.holds(Tolerance::default()));

        let off = ConvexFunction::square(iv(-1.0, 2.0)).unwrap();
        let g = Kernel::uniform(iv(-1.0, 2.0)).unwrap();
        assert!(matches!(
            symmetric_convolution_enclosure(&off, &g, 1.0),
            Err(Error::DomainRequirement(_))
        ));
    }

    #[test]
    fn hh_recover_closed_forms() {
        let f = ConvexFunction::square(iv(0.0, 1.0)).unwrap();
        let r = hh_recover(&f, DEFAULT_HH_POINTS).unwrap();
        assert!((r.chain.lower - 0.25).abs() < 1e-9);
        assert!((r.chain.middle - 1.0 / 3.0).abs() < 1e-9);
        assert!((r.chain.upper - 0.5).abs() < 1e-9);

        let e = ConvexFunction::exp(iv(0.0, 1.0)).unwrap();
        let r = hh_recover(&e, DEFAULT_HH_POINTS).unwrap();
        assert_relative_eq!(r.chain.lower, 0.5f64.exp(), max_relative = 1e-12);
        assert_relative_eq!(r.chain.middle, E - 1.0, max_relative = 1e-10);
        assert_relative_eq!(r.chain.upper, (1.0 + E) / 2.0, max_relative = 1e-12);
        assert!(r.chain.holds(Tolerance::default()));

        let lin = ConvexFunction::affine(iv(-2.0, 5.0), 3.0, 0.25).unwrap();
        let c = hh_recover(&lin, 100).unwrap().chain;
        assert_relative_eq!(c.lower, c.middle, max_relative = 1e-10);
        assert_relative_eq!(c.middle, c.upper, max_relative = 1e-10);
    }

    #[test]
    fn hh_recover_needs_two_points() {
        let f = ConvexFunction::square(iv(0.0, 1.0)).unwrap();
        assert!(matches!(hh_recover(&f, 1), Err(Error::Parameter(_))));
    }
}
