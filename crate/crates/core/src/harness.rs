//! Random convex test functions, brute-force grid oracles and the search for
//! weighted-gap configurations whose maximum is not at the endpoints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::t_prime;
use crate::domain::{Interval, WeightPair};
use crate::error::{Error, Result};
use crate::exec::{map_range, map_slice, Execution};
use crate::function::{ConvexFunction, QuadHinge};
use crate::gap::{midpoint_gap, weighted_gap};
use crate::tolerance::Tolerance;

pub const DEFAULT_GRID: usize = 101;

/// Seedable, platform-independent generator used for every randomized draw.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; derives independent sub-seeds from `(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Parameters of `c0 + c1 x + q x^2 + sum w_k max(0, x - t_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexGeneratorSpec {
    pub n_hinges: usize,
    pub quad_coeff_range: (f64, f64),
    pub hinge_weight_range: (f64, f64),
    pub affine_range: (f64, f64),
    pub seed: u64,
}

impl Default for ConvexGeneratorSpec {
    fn default() -> Self {
        Self {
            n_hinges: 3,
            quad_coeff_range: (0.0, 2.0),
            hinge_weight_range: (0.0, 3.0),
            affine_range: (-2.0, 2.0),
            seed: 0,
        }
    }
}

impl ConvexGeneratorSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// Only the affine part is random.
    pub fn affine(seed: u64) -> Self {
        Self { n_hinges: 0, quad_coeff_range: (0.0, 0.0), seed, ..Self::default() }
    }

    /// Random quadratic without hinges.
    pub fn quadratic(seed: u64) -> Self {
        Self { n_hinges: 0, quad_coeff_range: (0.1, 2.0), seed, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        let check = |name: &str, (lo, hi): (f64, f64), nonneg: bool| {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Range(format!("{name} range ({lo}, {hi}) is not a finite interval")));
            }
            if nonneg && lo < 0.0 {
                return Err(Error::Range(format!("{name} range ({lo}, {hi}) must be nonnegative")));
            }
            Ok(())
        };
        check("quad_coeff", self.quad_coeff_range, true)?;
        check("hinge_weight", self.hinge_weight_range, true)?;
        check("affine", self.affine_range, false)
    }
}

fn sample(rng: &mut SeededRng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Draws a convex function from `spec` on `interval`; the same inputs always
/// give the same function.
pub fn generate_convex(spec: &ConvexGeneratorSpec, interval: Interval) -> Result<ConvexFunction> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let c0 = sample(&mut rng, spec.affine_range);
    let c1 = sample(&mut rng, spec.affine_range);
    let quad = sample(&mut rng, spec.quad_coeff_range);
    let hinges = (0..spec.n_hinges)
        .map(|_| {
            // Knots strictly inside (a, b).
            let mut u: f64 = rng.random();
            while u == 0.0 {
                u = rng.random();
            }
            let knot = interval.a() + u * interval.width();
            (knot, sample(&mut rng, spec.hinge_weight_range))
        })
        .collect();
    let qh = QuadHinge::new(c0, c1, quad, hinges)?.with_label(format!("quad_hinge:{}", spec.seed));
    ConvexFunction::quad_hinge(interval, qh)
}

/// A generated function with the inputs that reproduce it.
#[derive(Debug, Clone)]
pub struct PoolEntry {
    pub seed: u64,
    pub spec: ConvexGeneratorSpec,
    pub interval: Interval,
    pub affine: bool,
    pub function: ConvexFunction,
}

/// Every tenth entry of a pool is affine.
const AFFINE_EVERY: usize = 10;

fn pool_spec(index: usize, seed: u64) -> ConvexGeneratorSpec {
    let sub = derive_seed(seed, index as u64);
    if index % AFFINE_EVERY == AFFINE_EVERY - 1 {
        return ConvexGeneratorSpec::affine(sub);
    }
    let n_hinges = (derive_seed(sub, 0xA5) % 5) as usize;
    ConvexGeneratorSpec { n_hinges, ..ConvexGeneratorSpec::with_seed(sub) }
}

fn entry(spec: ConvexGeneratorSpec, interval: Interval) -> PoolEntry {
    let function = generate_convex(&spec, interval).expect("pool specs are valid");
    PoolEntry {
        seed: spec.seed,
        affine: spec.n_hinges == 0 && spec.quad_coeff_range == (0.0, 0.0),
        spec,
        interval,
        function,
    }
}

/// `count` functions on random intervals with left endpoint in `[-3, 3]` and
/// width in `[0.5, 4]`.
pub fn function_pool(count: usize, seed: u64) -> Vec<PoolEntry> {
    (0..count)
        .map(|i| {
            let spec = pool_spec(i, seed);
            let mut rng = rng_from_seed(derive_seed(spec.seed, 0x1D));
            let a = rng.random_range(-3.0..=3.0);
            let width = rng.random_range(0.5..=4.0);
            entry(spec, Interval::new(a, a + width).expect("positive width"))
        })
        .collect()
}

/// `count` functions on one fixed interval.
pub fn function_pool_on(count: usize, seed: u64, interval: Interval) -> Vec<PoolEntry> {
    (0..count).map(|i| entry(pool_spec(i, seed), interval)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOracleResult {
    pub max_value: f64,
    /// First grid point (row-major) attaining `max_value`.
    pub argmax: (f64, f64),
    /// Value at the corner `(a, b)`.
    pub endpoint_value: f64,
    pub grid_size: usize,
}

impl GridOracleResult {
    /// The corner `(a, b)` attains the grid maximum up to slack.
    pub fn endpoint_attains_max(&self, tol: Tolerance) -> bool {
        tol.le(self.max_value, self.endpoint_value)
    }

    pub fn argmax_is_corner(&self, interval: Interval) -> bool {
        let (s, t) = self.argmax;
        let corner = |x: f64| x == interval.a() || x == interval.b();
        corner(s) && corner(t) && s != t
    }
}

fn grid_scan<G>(interval: Interval, n: usize, exec: Execution, endpoint_value: f64, gap: G) -> GridOracleResult
where
    G: Fn(f64, f64) -> f64 + Sync + Send,
{
    let grid = interval.grid(n);
    let rows = map_range(n, exec, |i| {
        let s = grid[i];
        let mut best = (f64::NEG_INFINITY, (s, s));
        for &t in &grid {
            let v = gap(s, t);
            if v > best.0 {
                best = (v, (s, t));
            }
        }
        best
    });
    let mut best = rows[0];
    for row in &rows[1..] {
        if row.0 > best.0 {
            best = *row;
        }
    }
    GridOracleResult { max_value: best.0, argmax: best.1, endpoint_value, grid_size: n }
}

/// Exhaustive maximum of `F(s, t)` over an `n x n` grid including the corners.
pub fn grid_max_f(f: &ConvexFunction, n: usize) -> GridOracleResult {
    grid_max_f_with(f, n, Execution::Sequential)
}

pub fn grid_max_f_with(f: &ConvexFunction, n: usize, exec: Execution) -> GridOracleResult {
    let d = f.domain();
    let gap = |s, t| midpoint_gap(f, s, t).expect("grid lies in the domain");
    grid_scan(d, n, exec, gap(d.a(), d.b()), gap)
}

/// Exhaustive maximum of `F*(p, q; x, y)` at fixed weights over an `n x n` grid.
pub fn grid_max_fstar(f: &ConvexFunction, w: WeightPair, n: usize) -> GridOracleResult {
    grid_max_fstar_with(f, w, n, Execution::Sequential)
}

pub fn grid_max_fstar_with(f: &ConvexFunction, w: WeightPair, n: usize, exec: Execution) -> GridOracleResult {
    let d = f.domain();
    let gap = |x, y| weighted_gap(f, w, x, y).expect("grid lies in the domain");
    grid_scan(d, n, exec, gap(d.a(), d.b()), gap)
}

/// A grid point where the weighted gap beats its value at `(a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleRecord {
    pub seed: u64,
    pub interval: Interval,
    pub p: f64,
    pub x: f64,
    pub y: f64,
    /// `F*(p, q; x, y)`
    pub fstar_xy: f64,
    /// `F*(p, q; a, b)`
    pub fstar_ab: f64,
    /// `F(a, b)`
    pub f_ab: f64,
    /// `F*(p, q; x, y) <= F(a, b)` up to slack.
    pub prop_z_holds: bool,
}

/// Recomputes `p f(x) + q f(y) - f(p x + q y)` term by term, independently of
/// [`weighted_gap`].
fn fresh_weighted_gap(f: &ConvexFunction, p: f64, x: f64, y: f64) -> f64 {
    let q = 1.0 - p;
    let mix = q.mul_add(y, p * x);
    p.mul_add(f.value(x), q * f.value(y)) - f.value(mix)
}

/// Scans every `(spec, p)` pair on an `n x n` grid of `interval` and returns
/// each point where `F*(p, q; x, y) > F*(p, q; a, b)` beyond slack, after
/// re-verifying it.
pub fn fstar_counterexample_search(
    specs: &[ConvexGeneratorSpec],
    interval: Interval,
    p_grid: &[f64],
    n: usize,
    tol: Tolerance,
    exec: Execution,
) -> Result<Vec<CounterexampleRecord>> {
    if specs.is_empty() || p_grid.is_empty() {
        return Err(Error::Parameter("counterexample search needs specs and weights".into()));
    }
    if n < 2 {
        return Err(Error::Parameter(format!("grid size must be at least 2, got {n}")));
    }
    let weights = p_grid.iter().map(|&p| WeightPair::new(p)).collect::<Result<Vec<_>>>()?;
    let functions = specs
        .iter()
        .map(|s| generate_convex(s, interval).map(|f| (s.seed, f)))
        .collect::<Result<Vec<_>>>()?;
    let per_function = map_slice(&functions, exec, |(seed, f)| fstar_exceedances(f, *seed, &weights, n, tol));
    Ok(per_function.into_iter().flatten().collect())
}

/// The search for a single function: every grid point where
/// `F*(p, q; x, y) > F*(p, q; a, b)` beyond slack, for each weight pair.
pub fn fstar_exceedances(
    f: &ConvexFunction,
    seed: u64,
    weights: &[WeightPair],
    n: usize,
    tol: Tolerance,
) -> Vec<CounterexampleRecord> {
    let interval = f.domain();
    let grid = interval.grid(n);
    let (a, b) = (interval.a(), interval.b());
    let f_ab = t_prime(f);
    let mut found = Vec::new();
    for w in weights {
        let fstar_ab = weighted_gap(f, *w, a, b).expect("endpoints");
        let fresh_ab = fresh_weighted_gap(f, w.p(), a, b);
        for &x in &grid {
            for &y in &grid {
                let v = weighted_gap(f, *w, x, y).expect("grid point");
                if !tol.gt(v, fstar_ab) || !tol.gt(fresh_weighted_gap(f, w.p(), x, y), fresh_ab) {
                    continue;
                }
                found.push(CounterexampleRecord {
                    seed,
                    interval,
                    p: w.p(),
                    x,
                    y,
                    fstar_xy: v,
                    fstar_ab,
                    f_ab,
                    prop_z_holds: tol.le(v, f_ab),
                });
            }
        }
    }
    found
}
