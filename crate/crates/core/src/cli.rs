//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical property
//! fails (the JSON carries the witness), 2 on input or usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{t_opt, DEFAULT_TOL_P};
use crate::campaign::{run_campaign, CampaignConfig, CampaignKind};
use crate::domain::Interval;
use crate::error::Error;
use crate::function::{ConvexFunction, PiecewiseLinear};
use crate::harness::{generate_convex, ConvexGeneratorSpec};
use crate::quadrature::{weighted_enclosure, Kernel, SineVariant};
use crate::report::{to_json, Num};
use crate::tolerance::{Tolerance, DEFAULT_ATOL, DEFAULT_RTOL};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "convex-gap", version, about = "Gap bounds and integral enclosures for convex functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal and closed-form global bounds on the Jensen functional.
    Bounds {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Weighted Hermite-Hadamard enclosure for a kernel.
    Enclose {
        #[command(flatten)]
        function: FunctionArgs,
        /// uniform, power:<alpha>, loglimit, sine, sinpluscos or file:<path>
        #[arg(long)]
        kernel: String,
        /// Also print the chain divided by the kernel mass.
        #[arg(long)]
        normalized: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification campaign over generated convex functions.
    Verify {
        /// prop-x, prop-z, lemma1, chain4, hh or remark3
        campaign: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check a single function instead of a generated pool.
        #[arg(long = "fn")]
        function: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        /// Accept a non-convex CSV with an asserted certificate.
        #[arg(long)]
        asserted: bool,
        /// Run sequentially.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
struct FunctionArgs {
    /// square, exp, abs_shift:<c>, neglog, quad_hinge:<seed> or file:<path>
    #[arg(long = "fn")]
    function: String,
    /// Domain as `a,b`; taken from the samples for file:<path>.
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
    /// Accept a non-convex CSV with an asserted certificate.
    #[arg(long)]
    asserted: bool,
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = DEFAULT_ATOL)]
    atol: f64,
    #[arg(long, default_value_t = DEFAULT_RTOL)]
    rtol: f64,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn tolerance(&self) -> Result<Tolerance, Error> {
        if !(self.atol >= 0.0 && self.rtol >= 0.0) {
            return Err(Error::Parameter(format!("atol {} and rtol {} must be nonnegative", self.atol, self.rtol)));
        }
        Ok(Tolerance::new(self.atol, self.rtol))
    }
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Usage(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub fn parse_interval(s: &str) -> Result<Interval, Error> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parameter(format!("interval '{s}' is not of the form a,b")))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parameter(format!("'{t}' in interval '{s}' is not a number")))
    };
    Interval::new(num(a)?, num(b)?)
}

/// Builds a function from its CLI name.
pub fn parse_function(name: &str, interval: Option<Interval>, asserted: bool) -> Result<ConvexFunction, Error> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    if kind == "file" {
        let path = arg.ok_or_else(|| Error::Parameter("file: needs a path".into()))?;
        let pl = PiecewiseLinear::from_csv_path(path.as_ref())?;
        if let Some(i) = interval {
            if i != pl.domain() {
                return Err(Error::Parameter(format!(
                    "--interval {i} differs from the sample range {}",
                    pl.domain()
                )));
            }
        }
        let f = if asserted {
            ConvexFunction::piecewise_linear_asserted(pl)?
        } else {
            ConvexFunction::piecewise_linear(pl)?
        };
        return Ok(f.relabel(name));
    }
    let interval = interval.ok_or_else(|| Error::Parameter(format!("--interval is required for '{name}'")))?;
    let number = |what: &str| -> Result<&str, Error> {
        arg.ok_or_else(|| Error::Parameter(format!("{kind} needs a {what}, e.g. {kind}:1")))
    };
    match (kind, arg) {
        ("square", None) => ConvexFunction::square(interval),
        ("exp", None) => ConvexFunction::exp(interval),
        ("neglog", None) => ConvexFunction::neg_log(interval),
        ("abs_shift", _) => {
            let c = number("center")?;
            let c = c.parse().map_err(|_| Error::Parameter(format!("bad center '{c}'")))?;
            ConvexFunction::abs_shift(interval, c)
        }
        ("quad_hinge", _) => {
            let seed = number("seed")?;
            let seed = seed.parse().map_err(|_| Error::Parameter(format!("bad seed '{seed}'")))?;
            generate_convex(&ConvexGeneratorSpec::with_seed(seed), interval)
        }
        _ => Err(Error::Parameter(format!("unknown function '{name}'"))),
    }
}

/// Builds a kernel from its CLI name on the function's domain.
pub fn parse_kernel(name: &str, domain: Interval) -> Result<Kernel, Error> {
    match name.split_once(':') {
        Some(("power", alpha)) => {
            let alpha = alpha.parse().map_err(|_| Error::Parameter(format!("bad exponent '{alpha}'")))?;
            Kernel::power(domain, alpha)
        }
        Some(("file", path)) => {
            let pl = PiecewiseLinear::from_csv_path(path.as_ref())?;
            Kernel::piecewise_linear(pl, name)
        }
        None => match name {
            "uniform" => Kernel::uniform(domain),
            "loglimit" => Kernel::log_limit(domain),
            "sine" => Ok(Kernel::sine(SineVariant::FullSine)),
            "sinpluscos" => Ok(Kernel::sine(SineVariant::SinPlusCos)),
            _ => Err(Error::Parameter(format!("unknown kernel '{name}'"))),
        },
        _ => Err(Error::Parameter(format!("unknown kernel '{name}'"))),
    }
}

#[derive(Serialize)]
struct BoundsOutput {
    t_opt: Num,
    t_prime: Num,
    argmax_p: Num,
    dominance: bool,
}

#[derive(Serialize)]
struct ChainOutput {
    lower: Num,
    middle: Num,
    upper: Num,
}

#[derive(Serialize)]
struct EncloseOutput {
    lower: Num,
    middle: Num,
    upper: Num,
    kernel_mass: Num,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<ChainOutput>,
}

/// JSON text and whether every check passed.
type Outcome = (String, bool);

fn build_function(args: &FunctionArgs) -> Result<ConvexFunction, Error> {
    let interval = args.interval.as_deref().map(parse_interval).transpose()?;
    parse_function(&args.function, interval, args.asserted)
}

fn cmd_bounds(function: &FunctionArgs, common: &CommonArgs) -> Result<Outcome, Failure> {
    let tol = common.tolerance()?;
    let f = build_function(function)?;
    let r = t_opt(&f, DEFAULT_TOL_P).map_err(|e| Failure::Property(e.to_string()))?;
    let dominance = r.dominance(tol);
    let out = BoundsOutput { t_opt: Num(r.t_opt), t_prime: Num(r.t_prime), argmax_p: Num(r.argmax_p), dominance };
    Ok((to_json(&out), dominance))
}

fn cmd_enclose(function: &FunctionArgs, kernel: &str, normalized: bool, common: &CommonArgs) -> Result<Outcome, Failure> {
    let tol = common.tolerance()?;
    let f = build_function(function)?;
    let g = parse_kernel(kernel, f.domain())?;
    let e = weighted_enclosure(&f, &g).map_err(|e| match e {
        Error::DomainMismatch { .. } => Failure::Usage(e.to_string()),
        other => Failure::Property(other.to_string()),
    })?;
    let holds = e.holds(tol);
    let out = EncloseOutput {
        lower: Num(e.lower),
        middle: Num(e.middle),
        upper: Num(e.upper),
        kernel_mass: Num(e.kernel_mass),
        holds,
        normalized: normalized.then(|| {
            let c = e.normalized();
            ChainOutput { lower: Num(c.lower), middle: Num(c.middle), upper: Num(c.upper) }
        }),
    };
    Ok((to_json(&out), holds))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    campaign: &str,
    count: usize,
    seed: u64,
    function: Option<&str>,
    interval: Option<&str>,
    asserted: bool,
    sequential: bool,
    common: &CommonArgs,
) -> Result<Outcome, Failure> {
    let kind: CampaignKind = campaign.parse()?;
    if count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let mut config = CampaignConfig::new(kind, count, seed);
    config.tol = common.tolerance()?;
    if sequential {
        config.exec = crate::exec::Execution::Sequential;
    }
    if let Some(name) = function {
        let interval = interval.map(parse_interval).transpose()?;
        config.function = Some(parse_function(name, interval, asserted)?);
    }
    let report = run_campaign(&config)?;
    Ok((report.to_json(), report.pass))
}

fn dispatch(cli: &Cli) -> Result<(Outcome, Option<&PathBuf>), Failure> {
    match &cli.command {
        Command::Bounds { function, common } => Ok((cmd_bounds(function, common)?, common.out.as_ref())),
        Command::Enclose { function, kernel, normalized, common } => {
            Ok((cmd_enclose(function, kernel, *normalized, common)?, common.out.as_ref()))
        }
        Command::Verify { campaign, count, seed, function, interval, asserted, sequential, common } => Ok((
            cmd_verify(
                campaign,
                *count,
                *seed,
                function.as_deref(),
                interval.as_deref(),
                *asserted,
                *sequential,
                common,
            )?,
            common.out.as_ref(),
        )),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(&cli) {
        Ok(((json, pass), out)) => {
            let written = match out {
                Some(path) => std::fs::write(path, &json).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(json.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_USAGE;
            }
            if pass {
                EXIT_PASS
            } else {
                let _ = writeln!(stderr, "property check failed; see report");
                EXIT_PROPERTY
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Property(msg)) => {
            let _ = writeln!(stderr, "property failure: {msg}");
            EXIT_PROPERTY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_parsing() {
        assert_eq!(parse_interval("0,1").unwrap(), Interval::new(0.0, 1.0).unwrap());
        assert_eq!(parse_interval(" -1 , 2.5 ").unwrap(), Interval::new(-1.0, 2.5).unwrap());
        assert!(parse_interval("1,1").is_err());
        assert!(parse_interval("1").is_err());
        assert!(parse_interval("a,1").is_err());
    }

    #[test]
    fn function_catalog() {
        let i = Some(Interval::new(0.5, 2.0).unwrap());
        for name in ["square", "exp", "neglog", "abs_shift:1", "quad_hinge:3"] {
            let f = parse_function(name, i, false).unwrap();
            assert_eq!(f.certificate(), crate::function::Certificate::ProvablyConvex);
        }
        assert!(parse_function("sin", i, false).is_err());
        assert!(parse_function("abs_shift", i, false).is_err());
        assert!(parse_function("square", None, false).is_err());
        assert!(parse_function("square:2", i, false).is_err());
    }

    #[test]
    fn kernel_catalog() {
        let d = Interval::new(1.0, 2.0).unwrap();
        for name in ["uniform", "power:0.5", "power:3", "loglimit", "sine", "sinpluscos"] {
            assert!(parse_kernel(name, d).is_ok(), "{name}");
        }
        assert!(parse_kernel("gauss", d).is_err());
        assert!(parse_kernel("power:0", d).is_err());
        assert!(parse_kernel("loglimit", Interval::new(-1.0, 1.0).unwrap()).is_err());
    }
}
