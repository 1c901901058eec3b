//! Verification campaigns: run one property suite over a pool of generated
//! convex functions and collect a deterministic, ordered report.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::bounds::prop_z_check;
use crate::domain::{Interval, WeightPair};
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::function::ConvexFunction;
use crate::gap::{chain4_bounds, lemma1_check};
use crate::harness::{
    derive_seed, fstar_exceedances, function_pool, grid_max_f, rng_from_seed, ConvexGeneratorSpec,
    PoolEntry, SeededRng, DEFAULT_GRID,
};
use crate::quadrature::{hh_recover, DEFAULT_HH_POINTS};
use crate::report::{interval_pair, witness, Num, Witness};
use crate::tolerance::Tolerance;

pub const PROP_Z_DRAWS: usize = 1_000;
pub const LEMMA1_DRAWS: usize = 500;
pub const CHAIN4_DRAWS: usize = 50;
/// Equality slack for affine functions in the three-point inequality.
pub const AFFINE_EQ_TOL: f64 = 1e-10;
/// Slack for the exact collapse of the pointwise chain at `p in {0, 1/2, 1}`.
pub const CHAIN_COLLAPSE_TOL: f64 = 1e-12;
/// Weights scanned by the endpoint-maximum search.
pub const REMARK3_P_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const REMARK3_GRID: usize = 51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CampaignKind {
    #[serde(rename = "prop-x")]
    PropX,
    #[serde(rename = "prop-z")]
    PropZ,
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "chain4")]
    Chain4,
    #[serde(rename = "hh")]
    Hh,
    #[serde(rename = "remark3")]
    Remark3,
}

impl CampaignKind {
    pub const ALL: [CampaignKind; 6] = [
        CampaignKind::PropX,
        CampaignKind::PropZ,
        CampaignKind::Lemma1,
        CampaignKind::Chain4,
        CampaignKind::Hh,
        CampaignKind::Remark3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignKind::PropX => "prop-x",
            CampaignKind::PropZ => "prop-z",
            CampaignKind::Lemma1 => "lemma1",
            CampaignKind::Chain4 => "chain4",
            CampaignKind::Hh => "hh",
            CampaignKind::Remark3 => "remark3",
        }
    }

    fn salt(self) -> u64 {
        self as u64 + 0x51
    }
}

impl fmt::Display for CampaignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CampaignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown campaign '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub kind: CampaignKind,
    pub count: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub exec: Execution,
    /// Run on this function instead of a generated pool.
    pub function: Option<ConvexFunction>,
}

impl CampaignConfig {
    pub fn new(kind: CampaignKind, count: usize, seed: u64) -> Self {
        Self { kind, count, seed, tol: Tolerance::default(), exec: Execution::default(), function: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropXRecord {
    pub seed: u64,
    pub label: String,
    pub interval: [Num; 2],
    #[serde(rename = "F_ab")]
    pub f_ab: Num,
    pub grid_max: Num,
    pub argmax: [Num; 2],
    pub argmax_is_corner: bool,
    pub pass: bool,
}

/// Summary of many random draws against one function.
#[derive(Debug, Clone, Serialize)]
pub struct DrawRecord {
    pub seed: u64,
    pub label: String,
    pub interval: [Num; 2],
    pub draws: usize,
    pub failures: usize,
    /// Smallest `rhs - lhs` over all checked inequalities.
    pub worst_margin: Num,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HhRecord {
    pub seed: u64,
    pub label: String,
    pub interval: [Num; 2],
    pub lower: Num,
    pub middle: Num,
    pub upper: Num,
    pub p_average: Num,
    pub discrepancy: Num,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Remark3Record {
    pub seed: u64,
    pub label: String,
    pub interval: [Num; 2],
    /// Grid points whose weighted gap beats the endpoint value.
    pub exceedances: usize,
    pub prop_z_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_excess: Option<Witness>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CampaignRecords {
    PropX(Vec<PropXRecord>),
    Draws(Vec<DrawRecord>),
    Hh(Vec<HhRecord>),
    Remark3(Vec<Remark3Record>),
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub campaign: CampaignKind,
    pub seed: u64,
    pub count: usize,
    pub atol: Num,
    pub rtol: Num,
    pub pass: bool,
    pub failures: usize,
    pub records: CampaignRecords,
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        crate::report::to_json(self)
    }
}

fn pool_for(config: &CampaignConfig) -> Vec<PoolEntry> {
    match &config.function {
        Some(f) => vec![PoolEntry {
            seed: config.seed,
            spec: ConvexGeneratorSpec::with_seed(config.seed),
            interval: f.domain(),
            affine: false,
            function: f.clone(),
        }],
        None => function_pool(config.count, config.seed),
    }
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    if config.count == 0 {
        return Err(Error::Parameter("count must be at least 1".into()));
    }
    let pool = pool_for(config);
    let (records, failures) = match config.kind {
        CampaignKind::PropX => {
            let recs = map_slice(&pool, config.exec, |e| prop_x(e, config.tol));
            let failures = recs.iter().filter(|r| !r.pass).count();
            (CampaignRecords::PropX(recs), failures)
        }
        CampaignKind::PropZ | CampaignKind::Lemma1 | CampaignKind::Chain4 => {
            let recs = map_slice(&pool, config.exec, |e| {
                let mut rng = rng_from_seed(derive_seed(e.seed, config.kind.salt()));
                match config.kind {
                    CampaignKind::PropZ => prop_z(e, &mut rng, config.tol),
                    CampaignKind::Lemma1 => lemma1(e, &mut rng, config.tol),
                    _ => chain4(e, &mut rng, config.tol),
                }
            });
            let failures = recs.iter().filter(|r| !r.pass).count();
            (CampaignRecords::Draws(recs), failures)
        }
        CampaignKind::Hh => {
            let recs = map_slice(&pool, config.exec, |e| hh(e, config.tol));
            let failures = recs.iter().filter(|r| !r.pass).count();
            (CampaignRecords::Hh(recs), failures)
        }
        CampaignKind::Remark3 => {
            let recs = map_slice(&pool, config.exec, |e| remark3(e, config.tol));
            let failures = recs.iter().filter(|r| !r.pass).count();
            (CampaignRecords::Remark3(recs), failures)
        }
    };
    Ok(CampaignReport {
        campaign: config.kind,
        seed: config.seed,
        count: pool.len(),
        atol: Num(config.tol.atol),
        rtol: Num(config.tol.rtol),
        pass: failures == 0,
        failures,
        records,
    })
}

fn prop_x(e: &PoolEntry, tol: Tolerance) -> PropXRecord {
    let r = grid_max_f(&e.function, DEFAULT_GRID);
    PropXRecord {
        seed: e.seed,
        label: e.function.label().to_string(),
        interval: interval_pair(e.interval),
        f_ab: Num(r.endpoint_value),
        grid_max: Num(r.max_value),
        argmax: [Num(r.argmax.0), Num(r.argmax.1)],
        argmax_is_corner: r.argmax_is_corner(e.interval),
        pass: r.endpoint_attains_max(tol),
    }
}

/// Accumulates outcomes of `lhs <= rhs` checks.
struct Tally {
    draws: usize,
    failures: usize,
    worst_margin: f64,
    witness: Option<Witness>,
}

impl Tally {
    fn new() -> Self {
        Self { draws: 0, failures: 0, worst_margin: f64::INFINITY, witness: None }
    }

    fn margin(&mut self, lhs: f64, rhs: f64) {
        self.worst_margin = self.worst_margin.min(rhs - lhs);
    }

    fn fail(&mut self, w: impl FnOnce() -> Witness) {
        self.failures += 1;
        if self.witness.is_none() {
            self.witness = Some(w());
        }
    }

    fn into_record(self, e: &PoolEntry) -> DrawRecord {
        DrawRecord {
            seed: e.seed,
            label: e.function.label().to_string(),
            interval: interval_pair(e.interval),
            draws: self.draws,
            failures: self.failures,
            worst_margin: Num(self.worst_margin),
            pass: self.failures == 0,
            witness: self.witness,
        }
    }
}

fn uniform_in(rng: &mut SeededRng, i: Interval) -> f64 {
    rng.random_range(i.a()..=i.b())
}

fn prop_z(e: &PoolEntry, rng: &mut SeededRng, tol: Tolerance) -> DrawRecord {
    let mut tally = Tally::new();
    for _ in 0..PROP_Z_DRAWS {
        let p = rng.random_range(0.0..=1.0);
        let (x, y) = (uniform_in(rng, e.interval), uniform_in(rng, e.interval));
        let r = prop_z_check(&e.function, WeightPair::new(p).expect("p in [0, 1]"), x, y, tol)
            .expect("draws lie in the domain");
        tally.draws += 1;
        tally.margin(r.weighted_gap, r.pair_gap);
        tally.margin(r.pair_gap, r.endpoint_gap);
        if !r.holds() {
            tally.fail(|| {
                witness([
                    ("p", p),
                    ("x", x),
                    ("y", y),
                    ("fstar_xy", r.weighted_gap),
                    ("f_xy", r.pair_gap),
                    ("f_ab", r.endpoint_gap),
                ])
            });
        }
    }
    tally.into_record(e)
}

fn ordered_triple(rng: &mut SeededRng, i: Interval) -> (f64, f64, f64) {
    loop {
        let mut v = [uniform_in(rng, i), uniform_in(rng, i), uniform_in(rng, i)];
        v.sort_by(f64::total_cmp);
        if v[0] < v[1] && v[1] < v[2] {
            return (v[0], v[1], v[2]);
        }
    }
}

fn lemma1(e: &PoolEntry, rng: &mut SeededRng, tol: Tolerance) -> DrawRecord {
    let mut tally = Tally::new();
    let affine_eq = |l: f64, r: f64| (l - r).abs() <= AFFINE_EQ_TOL * (1.0 + l.abs().max(r.abs()));
    for _ in 0..LEMMA1_DRAWS {
        let (x1, x2, x3) = ordered_triple(rng, e.interval);
        let r = lemma1_check(&e.function, x1, x2, x3, tol).expect("ordered draws in the domain");
        tally.draws += 1;
        tally.margin(r.part_i_sides.0, r.part_i_sides.1);
        tally.margin(r.part_ii_sides.1, r.part_ii_sides.0);
        let equal = !e.affine
            || (affine_eq(r.part_i_sides.0, r.part_i_sides.1) && affine_eq(r.part_ii_sides.0, r.part_ii_sides.1));
        if !(r.holds() && equal) {
            tally.fail(|| {
                witness([
                    ("x1", x1),
                    ("x2", x2),
                    ("x3", x3),
                    ("part_i_lhs", r.part_i_sides.0),
                    ("part_i_rhs", r.part_i_sides.1),
                    ("part_ii_lhs", r.part_ii_sides.0),
                    ("part_ii_rhs", r.part_ii_sides.1),
                ])
            });
        }
    }
    tally.into_record(e)
}

fn collapse_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= CHAIN_COLLAPSE_TOL * x.abs().max(y.abs()).max(1.0)
}

fn chain4(e: &PoolEntry, rng: &mut SeededRng, tol: Tolerance) -> DrawRecord {
    let mut tally = Tally::new();
    let f = &e.function;
    for _ in 0..CHAIN4_DRAWS {
        let p = rng.random_range(0.0..=1.0);
        let c = chain4_bounds(f, WeightPair::new(p).expect("p in [0, 1]"));
        tally.draws += 1;
        tally.margin(c.lower, c.middle);
        tally.margin(c.middle, c.upper);
        if !c.holds(tol) {
            tally.fail(|| witness([("p", p), ("lower", c.lower), ("middle", c.middle), ("upper", c.upper)]));
        }
    }
    let half = chain4_bounds(f, WeightPair::half());
    tally.draws += 1;
    if !collapse_eq(half.middle, half.lower) {
        tally.fail(|| witness([("p", 0.5), ("lower", half.lower), ("middle", half.middle)]));
    }
    for p in [0.0, 1.0] {
        let c = chain4_bounds(f, WeightPair::new(p).expect("boundary weight"));
        tally.draws += 1;
        if !collapse_eq(c.middle, c.upper) {
            tally.fail(|| witness([("p", p), ("middle", c.middle), ("upper", c.upper)]));
        }
    }
    tally.into_record(e)
}

fn hh(e: &PoolEntry, tol: Tolerance) -> HhRecord {
    let mut rec = HhRecord {
        seed: e.seed,
        label: e.function.label().to_string(),
        interval: interval_pair(e.interval),
        lower: Num(f64::NAN),
        middle: Num(f64::NAN),
        upper: Num(f64::NAN),
        p_average: Num(f64::NAN),
        discrepancy: Num(f64::NAN),
        pass: false,
        error: None,
    };
    match hh_recover(&e.function, DEFAULT_HH_POINTS) {
        Ok(r) => {
            rec.lower = Num(r.chain.lower);
            rec.middle = Num(r.chain.middle);
            rec.upper = Num(r.chain.upper);
            rec.p_average = Num(r.p_average);
            rec.discrepancy = Num(r.discrepancy);
            rec.pass = r.chain.holds(tol);
        }
        Err(err) => rec.error = Some(err.to_string()),
    }
    rec
}

fn remark3(e: &PoolEntry, tol: Tolerance) -> Remark3Record {
    let weights: Vec<WeightPair> =
        REMARK3_P_GRID.iter().map(|&p| WeightPair::new(p).expect("p in (0, 1)")).collect();
    let found = fstar_exceedances(&e.function, e.seed, &weights, REMARK3_GRID, tol);
    let prop_z_violations = found.iter().filter(|r| !r.prop_z_holds).count();
    let largest = found
        .iter()
        .max_by(|a, b| (a.fstar_xy - a.fstar_ab).total_cmp(&(b.fstar_xy - b.fstar_ab)))
        .map(|r| {
            witness([
                ("p", r.p),
                ("x", r.x),
                ("y", r.y),
                ("fstar_xy", r.fstar_xy),
                ("fstar_ab", r.fstar_ab),
                ("f_ab", r.f_ab),
            ])
        });
    Remark3Record {
        seed: e.seed,
        label: e.function.label().to_string(),
        interval: interval_pair(e.interval),
        exceedances: found.len(),
        prop_z_violations,
        largest_excess: largest,
        pass: prop_z_violations == 0,
    }
}
