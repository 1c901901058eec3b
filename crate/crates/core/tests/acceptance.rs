//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use convex_gap::bounds::DEFAULT_TOL_P;
use convex_gap::campaign::{run_campaign, CampaignConfig, CampaignKind, CampaignRecords};
use convex_gap::harness::{derive_seed, function_pool, function_pool_on, rng_from_seed, PoolEntry};
use convex_gap::quadrature::DEFAULT_HH_POINTS;
use convex_gap::{
    fstar_counterexample_search, hh_recover, jensen_functional, t_opt, t_prime, weighted_enclosure, ConvexFunction,
    ConvexGeneratorSpec, Execution, Interval, Kernel, SineVariant, Tolerance, WeightVector,
};
use rand::Rng;

const SEED: u64 = 20_240_611;
const POOL: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pool() -> Vec<PoolEntry> {
    function_pool(POOL, SEED)
}

fn draw_campaign(kind: CampaignKind) -> Result<(usize, usize), String> {
    let report = run_campaign(&CampaignConfig::new(kind, POOL, SEED)).map_err(|e| e.to_string())?;
    let CampaignRecords::Draws(recs) = &report.records else {
        return Err("unexpected record type".into());
    };
    let draws = recs.iter().map(|r| r.draws).sum();
    if let Some(bad) = recs.iter().find(|r| !r.pass) {
        return Err(format!(
            "seed {} failed {} of {} draws; witness {}",
            bad.seed,
            bad.failures,
            bad.draws,
            serde_json::to_string(&bad.witness).unwrap()
        ));
    }
    Ok((draws, recs.len()))
}

fn prop_x_suite() -> Outcome {
    let start = Instant::now();
    let report = run_campaign(&CampaignConfig::new(CampaignKind::PropX, POOL, SEED)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let CampaignRecords::PropX(recs) = &report.records else {
        return Err("unexpected record type".into());
    };
    let entries = pool();
    ensure(recs.len() == POOL, || format!("{} records", recs.len()))?;
    for (r, e) in recs.iter().zip(&entries) {
        ensure(r.pass, || format!("seed {}: grid max {:?} exceeds F(a,b) {:?}", r.seed, r.grid_max, r.f_ab))?;
        // Affine functions have F = 0 up to rounding, so any point is a maximizer.
        ensure(e.affine || r.argmax_is_corner, || format!("seed {}: argmax {:?} not a corner", r.seed, r.argmax))?;
    }
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{POOL} functions, 101x101 grid, {elapsed:.2?}"))
}

fn lemma1_suite() -> Outcome {
    let (draws, n) = draw_campaign(CampaignKind::Lemma1)?;
    ensure(draws >= 100_000, || format!("only {draws} triples"))?;
    Ok(format!("{draws} ordered triples over {n} functions, affine equality within 1e-10"))
}

fn chain4_suite() -> Outcome {
    let (draws, n) = draw_campaign(CampaignKind::Chain4)?;
    ensure(draws >= 10_000, || format!("only {draws} draws"))?;
    Ok(format!("{draws} (f, p) draws over {n} functions incl. p in {{0, 1/2, 1}} collapses"))
}

fn closed_form_bounds() -> Outcome {
    let sq = ConvexFunction::square(Interval::new(0.0, 1.0).unwrap()).unwrap();
    let tp = t_prime(&sq);
    ensure((tp - 0.5).abs() <= 1e-8, || format!("t_prime = {tp}"))?;
    let r = t_opt(&sq, DEFAULT_TOL_P).map_err(|e| e.to_string())?;
    ensure((r.t_opt - 0.25).abs() <= 1e-8, || format!("t_opt = {}", r.t_opt))?;
    ensure((r.argmax_p - 0.5).abs() <= 1e-8, || format!("argmax_p = {}", r.argmax_p))?;
    let tol = Tolerance::default();
    for e in pool() {
        let r = t_opt(&e.function, DEFAULT_TOL_P).map_err(|err| err.to_string())?;
        ensure(r.dominance(tol), || format!("seed {}: t_opt {} > t_prime {}", e.seed, r.t_opt, r.t_prime))?;
    }
    Ok(format!("square: t_prime {tp}, t_opt {} at p {}; dominance over {POOL} functions", r.t_opt, r.argmax_p))
}

fn jensen_global_bounds() -> Outcome {
    let tol = Tolerance::default();
    let entries = pool();
    let bounds: Vec<_> = entries.iter().map(|e| t_opt(&e.function, DEFAULT_TOL_P).unwrap()).collect();
    let mut rng = rng_from_seed(derive_seed(SEED, 0xB0));
    let draws = 10_000;
    let mut worst = f64::INFINITY;
    for k in 0..draws {
        let idx = k % entries.len();
        let (e, b) = (&entries[idx], bounds[idx]);
        let n = rng.random_range(2..=8);
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let w = WeightVector::normalized(raw).map_err(|err| err.to_string())?;
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(e.interval.a()..=e.interval.b())).collect();
        let j = jensen_functional(&e.function, &w, &xs).map_err(|err| err.to_string())?;
        worst = worst.min(b.t_opt - j);
        ensure(tol.le(j, b.t_opt) && tol.le(j, b.t_prime), || {
            format!("seed {}: J = {j} vs t_opt {} / t_prime {}", e.seed, b.t_opt, b.t_prime)
        })?;
    }
    Ok(format!("{draws} draws with n in 2..=8; min t_opt - J = {worst:.3e}"))
}

fn kernel_catalog() -> Vec<Kernel> {
    let pos = Interval::new(0.5, 2.5).unwrap();
    let mut ks: Vec<Kernel> = [0.5, 1.0, 2.0, 3.0].iter().map(|&a| Kernel::power(pos, a).unwrap()).collect();
    ks.push(Kernel::log_limit(pos).unwrap());
    ks.push(Kernel::sine(SineVariant::FullSine));
    ks.push(Kernel::sine(SineVariant::SinPlusCos));
    ks
}

fn prop_y_suite() -> Outcome {
    let tol = Tolerance::uniform(1e-8);
    let equal = |x: f64, y: f64| (x - y).abs() <= 1e-8 * x.abs().max(y.abs()).max(1.0);
    let mut pairs = 0;
    let mut linear = 0;
    // Uniform kernel on each function's own random interval.
    let mut cases: Vec<(PoolEntry, Kernel)> =
        function_pool(50, SEED).into_iter().map(|e| (e.clone(), Kernel::uniform(e.interval).unwrap())).collect();
    for k in kernel_catalog() {
        cases.extend(function_pool_on(50, SEED, k.domain()).into_iter().map(|e| (e, k.clone())));
    }
    for (e, k) in &cases {
        let enc = weighted_enclosure(&e.function, k).map_err(|err| format!("{}: {err}", k.label()))?;
        pairs += 1;
        ensure(enc.holds(tol), || format!("{} / seed {}: {:?}", k.label(), e.seed, enc))?;
        if e.affine {
            linear += 1;
            ensure(equal(enc.lower, enc.middle) && equal(enc.middle, enc.upper), || {
                format!("{} / affine seed {}: {:?}", k.label(), e.seed, enc)
            })?;
        }
    }
    Ok(format!("{pairs} (f, kernel) pairs over 8 kernels; {linear} affine equality witnesses"))
}

fn hh_recovery() -> Outcome {
    let tol = Tolerance::default();
    let mut worst = 0.0f64;
    for e in function_pool(50, SEED) {
        let r = hh_recover(&e.function, DEFAULT_HH_POINTS).map_err(|err| format!("seed {}: {err}", e.seed))?;
        worst = worst.max(r.discrepancy);
        ensure(r.chain.holds(tol), || format!("seed {}: {:?}", e.seed, r.chain))?;
    }
    let sq = ConvexFunction::square(Interval::new(0.0, 1.0).unwrap()).unwrap();
    let c = hh_recover(&sq, DEFAULT_HH_POINTS).map_err(|e| e.to_string())?.chain;
    ensure(
        (c.lower - 0.25).abs() <= 1e-9 && (c.middle - 1.0 / 3.0).abs() <= 1e-9 && (c.upper - 0.5).abs() <= 1e-9,
        || format!("square chain {c:?}"),
    )?;
    Ok(format!("50 functions, worst p-average discrepancy {worst:.2e} <= {:.0e}", 10.0 / 1e8))
}

fn corollary6_witness() -> Outcome {
    let f = ConvexFunction::affine(Interval::new(0.0, PI).unwrap(), 0.0, 1.0).unwrap();
    let enc = weighted_enclosure(&f, &Kernel::sine(SineVariant::FullSine)).map_err(|e| e.to_string())?;
    // Dividing by the kernel mass (= 2) gives 2f(pi/2), int t sin t, f(0) + f(pi).
    let c = enc.normalized();
    for (name, v) in [("lower", c.lower), ("middle", c.middle), ("upper", c.upper)] {
        ensure((v - PI).abs() <= 1e-8, || format!("{name} = {v}"))?;
    }
    Ok(format!("lower {:.12}, middle {:.12}, upper {:.12}", c.lower, c.middle, c.upper))
}

fn prop_z_suite() -> Outcome {
    let (draws, n) = draw_campaign(CampaignKind::PropZ)?;
    ensure(draws >= 10_000, || format!("only {draws} draws"))?;
    Ok(format!("{draws} (p, x, y) draws over {n} functions, both links"))
}

fn remark3_soundness() -> Outcome {
    let tol = Tolerance::default();
    let p_grid: Vec<f64> = (1..10).map(|k| k as f64 / 10.0).collect();
    let interval = Interval::new(-1.0, 2.0).unwrap();

    let quadratics: Vec<_> = (0..20).map(|i| ConvexGeneratorSpec::quadratic(derive_seed(SEED, i))).collect();
    let found = fstar_counterexample_search(&quadratics, interval, &p_grid, 51, tol, Execution::Parallel)
        .map_err(|e| e.to_string())?;
    ensure(found.is_empty(), || format!("{} records for pure quadratics", found.len()))?;

    let hinged: Vec<_> = (0..20)
        .map(|i| ConvexGeneratorSpec { n_hinges: 2, ..ConvexGeneratorSpec::with_seed(derive_seed(SEED, 100 + i)) })
        .collect();
    let found = fstar_counterexample_search(&hinged, interval, &p_grid, 51, tol, Execution::Parallel)
        .map_err(|e| e.to_string())?;
    for r in &found {
        let spec = hinged.iter().find(|s| s.seed == r.seed).unwrap();
        let f = convex_gap::generate_convex(spec, interval).unwrap();
        let direct = |x: f64, y: f64| r.p * f.value(x) + (1.0 - r.p) * f.value(y) - f.value(r.p * x + (1.0 - r.p) * y);
        let (at_xy, at_ab) = (direct(r.x, r.y), direct(interval.a(), interval.b()));
        ensure(tol.gt(at_xy, at_ab), || format!("record does not re-verify: {r:?}"))?;
        let f_ab = f.value(interval.a()) + f.value(interval.b()) - 2.0 * f.value(interval.midpoint());
        ensure(tol.le(at_xy, f_ab), || format!("F* exceeds F(a,b): {r:?}"))?;
    }
    Ok(format!("quadratics: 0 records; hinged: {} records, all re-verified and capped by F(a,b)", found.len()))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_convex-gap");
    let run = || {
        Command::new(bin)
            .args(["verify", "prop-x", "--count", "50", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("exit {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("proposition-x grid maximum at endpoints", prop_x_suite),
        ("three-point lemma, both parts", lemma1_suite),
        ("pointwise chain lower <= middle <= upper", chain4_suite),
        ("closed-form bounds and dominance", closed_form_bounds),
        ("Jensen functional global bounds", jensen_global_bounds),
        ("weighted enclosure over kernel catalog", prop_y_suite),
        ("Hermite-Hadamard recovery", hh_recovery),
        ("sine-kernel equality witness", corollary6_witness),
        ("proposition-z dominance chain", prop_z_suite),
        ("endpoint-maximum search soundness", remark3_soundness),
        ("byte-identical verify output", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.2?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{:.2?}]", t.elapsed());
            }
        }
    }
    let total = start.elapsed();
    println!("acceptance: {} passed, {failed} failed in {total:.2?}", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
