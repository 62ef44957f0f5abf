//! `weyl` command-line front end.
//!
//! Every run prints one JSON document (`"schema": "weyl/1"`) on standard
//! output and stores a [`cache::RunRecord`] under `$WEYL_CACHE_DIR`
//! (default `./.weyl-cache`). Diagnostics go to standard error.

pub mod cache;
pub mod csv;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use weyl_core::counterexample::{
    build_certificate_with, good_set_census_with, trivial_lower_bound, verify_certificate, LowerBoundCertificate,
    Sampling, DEFAULT_C1,
};
use weyl_core::maximal::{
    conjecture_scan, exponent_fits, locate_major_arc, lp_norms_max, sup_over_t_with, superlevel_measure, FitOptions,
    LpNormOptions, ProfileOptions, SupOptions, DEFAULT_BUDGET, DEFAULT_OVERSAMPLE,
};
use weyl_core::nt::{decompose_modulus, dirichlet_approx, enumerate_power_full, factorize, gauss_bound_ratio};
use weyl_core::quadrature::eval_oscillatory_integral;
use weyl_core::sums::{
    eval_gauss_sum, eval_weyl_grid_t, eval_weyl_grid_x, eval_weyl_sum, major_arc_decompose, ArcCenter, PhasePoint,
    WeylParams,
};
use weyl_core::{Error, Exec, Rational};

use crate::csv::GridRow;

pub const SCHEMA: &str = "weyl/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "weyl", version, about = "Weyl sums and maximal-function experiments")]
pub struct Cli {
    /// Recompute even if a cached record exists.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (1 runs sequentially; 0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Maximum `oversample·N^k` per sup computation.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for randomized scans.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GridAxis {
    X,
    T,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct EvalArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Exact `t = t_num/t_den` (overrides `--t`).
    #[arg(long, requires = "t_den", allow_negative_numbers = true)]
    pub t_num: Option<i64>,
    #[arg(long, requires = "t_num")]
    pub t_den: Option<u64>,
    /// Evaluate a whole grid along this axis instead of one point.
    #[arg(long, requires = "m")]
    pub grid: Option<GridAxis>,
    /// Grid size (power of two).
    #[arg(long)]
    pub m: Option<usize>,
    /// Write the grid as CSV here.
    #[arg(long, requires = "grid")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct GaussArgs {
    #[arg(long)]
    pub k: u32,
    /// Coefficient of `n^k`.
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    /// Coefficient of `n`.
    #[arg(long, allow_negative_numbers = true)]
    pub b: i64,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct IntegralArgs {
    #[arg(long = "N")]
    pub n: u64,
    /// `ξ₁,…,ξ_k`, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub xi: Vec<f64>,
    /// Absolute tolerance; default `1e-8·N`.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct ArcArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Decompose around this center instead of locating one.
    #[arg(long, requires_all = ["r1", "rk"])]
    pub q: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r1: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rk: Option<i64>,
    /// Level `A` for locating an arc; default `0.99·|ω(x,t)|`.
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: u32,
    /// Coefficients `b₁,…,b_k` for the complete-sum bound ratio.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub b: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct PowerfullArgs {
    #[arg(long)]
    pub i: u32,
    #[arg(long)]
    pub x: u64,
    /// Include the list itself.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct DirichletArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long = "M")]
    pub m: f64,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct SupArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    pub oversample: u32,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct LpNormArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    /// Uniform x nodes; default `8N`.
    #[arg(long)]
    pub x_grid: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    pub oversample: u32,
    /// Skip the Farey points `r/q`, `q ≤ √N`.
    #[arg(long)]
    pub no_farey: bool,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct LevelSetArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    /// Levels `A`, comma separated.
    #[arg(long = "A", value_delimiter = ',')]
    pub a: Vec<f64>,
    /// Levels given as exponents `e` in `A = N^e`.
    #[arg(long, value_delimiter = ',')]
    pub a_exp: Vec<f64>,
    /// Uniform x nodes; default `8N`.
    #[arg(long)]
    pub x_grid: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    pub oversample: u32,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct ExponentFitArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 8)]
    pub x_grid_factor: u64,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    pub oversample: u32,
    #[arg(long)]
    pub no_farey: bool,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct CertificateArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_C1)]
    pub c1: f64,
    /// Exponent for the constructive-interference bound reported alongside.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Also write the full certificate JSON here.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Args)]
pub struct VerifyArgs {
    /// Certificate file written by `certificate --out`.
    #[arg(long, conflicts_with = "n")]
    pub cert: Option<PathBuf>,
    /// Rebuild the certificate for this `N` instead.
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_C1)]
    pub c1: f64,
    /// Random points per rectangle besides the center.
    #[arg(long, default_value_t = 8)]
    pub points: u32,
}

#[derive(Debug, Clone, Serialize, Subcommand)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// ω_{N,k}(x,t) at a point, or on a grid.
    Eval(EvalArgs),
    /// Complete sum S_k(a, b, q).
    Gauss(GaussArgs),
    /// Oscillatory integral over [0, N].
    Integral(IntegralArgs),
    /// Major-arc decomposition around a center, or location of an arc.
    Arc(ArcArgs),
    /// Power-class split of a modulus.
    Decompose(DecomposeArgs),
    /// i-th power full integers up to x.
    Powerfull(PowerfullArgs),
    /// Rational approximation with denominator at most M.
    Dirichlet(DirichletArgs),
    /// sup over t of |ω(x, t)|.
    Sup(SupArgs),
    /// L^p norms of the maximal function.
    Lpnorm(LpNormArgs),
    /// Super-level set measures of the maximal function.
    Levelset(LevelSetArgs),
    /// Log-log slope of the L^p norm against N.
    ExponentFit(ExponentFitArgs),
    /// Largest observed ratio to the conjectured bound.
    ConjectureScan(ConjectureArgs),
    /// Good-set counts for a prime modulus.
    Census(CensusArgs),
    /// Build the lower-bound certificate.
    Certificate(CertificateArgs),
    /// Re-evaluate a certificate by direct summation.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Gauss(_) => "gauss",
            Command::Integral(_) => "integral",
            Command::Arc(_) => "arc",
            Command::Decompose(_) => "decompose",
            Command::Powerfull(_) => "powerfull",
            Command::Dirichlet(_) => "dirichlet",
            Command::Sup(_) => "sup",
            Command::Lpnorm(_) => "lpnorm",
            Command::Levelset(_) => "levelset",
            Command::ExponentFit(_) => "exponent-fit",
            Command::ConjectureScan(_) => "conjecture-scan",
            Command::Census(_) => "census",
            Command::Certificate(_) => "certificate",
            Command::Verify(_) => "verify",
        }
    }

    /// Commands whose output includes a file side effect are never replayed.
    fn replayable(&self) -> bool {
        match self {
            Command::Eval(a) => a.csv.is_none(),
            Command::Certificate(a) => a.out.is_none(),
            Command::Verify(a) => a.cert.is_none(),
            _ => true,
        }
    }
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } | Error::Quadrature { .. } => EXIT_RESOURCE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(context: &str, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{context}: {e}"),
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs serialize")
}

fn complex(v: weyl_core::ComplexValue) -> Value {
    json!({ "re": v.re, "im": v.im, "magnitude": v.norm() })
}

/// Settings shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub budget: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Context {
    fn sup(&self, oversample: u32) -> SupOptions {
        SupOptions {
            oversample,
            budget: self.budget,
        }
    }
}

fn eval(a: &EvalArgs) -> Result<Value, Failure> {
    let params = WeylParams::new(a.n, a.k)?;
    let exact = match (a.t_num, a.t_den) {
        (Some(num), Some(den)) => Some(Rational::new(num, den)?),
        _ => None,
    };
    let Some(axis) = a.grid else {
        let pt = match exact {
            Some(r) => PhasePoint::with_exact_t(a.x, r),
            None => PhasePoint::new(a.x, a.t),
        };
        return Ok(complex(eval_weyl_sum(params, &pt)));
    };
    let m = a.m.expect("clap enforces --m with --grid");
    let t = exact.map_or(a.t, Rational::to_f64);
    let values = match axis {
        GridAxis::X => eval_weyl_grid_x(params, t, m)?,
        GridAxis::T => eval_weyl_grid_t(params, a.x, m)?,
    };
    let rows: Vec<GridRow> = values
        .iter()
        .enumerate()
        .map(|(j, &value)| {
            let g = j as f64 / m as f64;
            match axis {
                GridAxis::X => GridRow { x: g, t, value },
                GridAxis::T => GridRow { x: a.x, t: g, value },
            }
        })
        .collect();
    let (argmax, max) = rows
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, r)| {
            let v = r.value.norm();
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    let mut out = json!({ "axis": axis, "m": m, "argmax": argmax, "max_magnitude": max });
    match &a.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| io_failure("cannot create CSV", e))?;
            csv::write_csv(&rows, std::io::BufWriter::new(file)).map_err(|e| io_failure("cannot write CSV", e))?;
            out["csv"] = json!(path.display().to_string());
        }
        None => {
            out["points"] = rows
                .iter()
                .map(|r| json!({ "x": r.x, "t": r.t, "re": r.value.re, "im": r.value.im }))
                .collect();
        }
    }
    Ok(out)
}

fn arc(a: &ArcArgs) -> Result<Value, Failure> {
    let params = WeylParams::new(a.n, a.k)?;
    let pt = PhasePoint::new(a.x, a.t);
    if let (Some(q), Some(r1), Some(rk)) = (a.q, a.r1, a.rk) {
        let d = major_arc_decompose(params, &pt, ArcCenter::new(q, r1, rk)?)?;
        return Ok(json!({
            "mode": "decompose",
            "exact": complex(d.exact),
            "main_term": complex(d.main_term),
            "delta": complex(d.delta),
            "delta_bound": d.delta_bound,
            "constant": d.constant(),
            "xi1": d.xi1,
            "xik": d.xik,
            "gauss": complex(d.gauss),
            "integral": complex(d.integral),
        }));
    }
    let level = match a.a {
        Some(v) => v,
        None => 0.99 * eval_weyl_sum(params, &pt).norm(),
    };
    let loc = locate_major_arc(params, &pt, level, a.eps)?;
    let mut out = to_value(&loc);
    out["mode"] = json!("locate");
    out["found"] = json!(loc.arc().is_some());
    Ok(out)
}

fn decompose(a: &DecomposeArgs) -> Result<Value, Failure> {
    let d = decompose_modulus(a.q, a.k)?;
    let mut out = json!({
        "q": a.q,
        "k": a.k,
        "factors": factorize(a.q).factors,
        "parts": d.parts,
        "valid": d.is_valid_for(a.q),
    });
    if let Some(b) = &a.b {
        out["gauss_bound_ratio"] = json!(gauss_bound_ratio(a.k, a.q, b)?);
    }
    Ok(out)
}

fn powerfull(a: &PowerfullArgs) -> Result<Value, Failure> {
    if a.i < 2 || a.x == 0 {
        return Err(invalid("need i ≥ 2 and x ≥ 1"));
    }
    let list = enumerate_power_full(a.i, a.x);
    let mut out = json!({
        "count": list.len(),
        "ratio": list.len() as f64 / (a.x as f64).powf(1.0 / a.i as f64),
    });
    if a.list {
        out["list"] = json!(list);
    }
    Ok(out)
}

fn dirichlet(a: &DirichletArgs) -> Result<Value, Failure> {
    if !a.alpha.is_finite() || !(a.m >= 1.0) {
        return Err(invalid("need finite alpha and M ≥ 1"));
    }
    let r = dirichlet_approx(a.alpha, a.m);
    let err = (a.alpha - r.to_f64()).abs();
    Ok(json!({
        "a": r.num(),
        "q": r.den(),
        "error": err,
        "bound": 1.0 / (r.den() as f64 * a.m),
    }))
}

fn levelset(a: &LevelSetArgs, ctx: &Context) -> Result<Value, Failure> {
    let params = WeylParams::new(a.n, a.k)?;
    let mut levels = a.a.clone();
    levels.extend(a.a_exp.iter().map(|e| (a.n as f64).powf(*e)));
    if levels.is_empty() {
        return Err(invalid("give at least one level with --A or --a-exp"));
    }
    let opts = ProfileOptions {
        sup: ctx.sup(a.oversample),
        exec: ctx.exec,
        use_symmetry: true,
    };
    let x_grid = a.x_grid.unwrap_or(8 * a.n);
    let reports = levels
        .iter()
        .map(|&lvl| superlevel_measure(params, lvl, x_grid, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({ "x_grid": x_grid, "reports": reports }))
}

fn certificate(a: &CertificateArgs, ctx: &Context) -> Result<Value, Failure> {
    let cert = build_certificate_with(a.n, a.k, a.c1, Sampling::default(), ctx.exec)?;
    let trivial = trivial_lower_bound(a.n, a.k, a.p)?;
    if let Some(path) = &a.out {
        fs::write(path, serde_json::to_vec_pretty(&cert).expect("certificate serializes"))
            .map_err(|e| io_failure("cannot write certificate", e))?;
    }
    Ok(json!({
        "primes": cert.primes,
        "chosen_b": cert.chosen_b,
        "intervals": cert.intervals.len(),
        "l1_lower": cert.l1_lower,
        "target": cert.target,
        "ratio": cert.ratio(),
        "disjoint": cert.intervals_disjoint(),
        "trivial_bound": trivial,
        "certificate": cert,
    }))
}

fn verify(a: &VerifyArgs, ctx: &Context) -> Result<Value, Failure> {
    let cert: LowerBoundCertificate = match (&a.cert, a.n) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure("cannot read certificate", e))?;
            serde_json::from_str(&text).map_err(|e| invalid(format!("malformed certificate: {e}")))?
        }
        (None, Some(n)) => build_certificate_with(n, a.k, a.c1, Sampling::default(), ctx.exec)?,
        (None, None) => return Err(invalid("give --cert or --N")),
    };
    let v = verify_certificate(&cert, a.points, ctx.seed, ctx.exec)?;
    Ok(to_value(&v))
}

/// Runs one command and returns its `outputs` value.
pub fn execute(command: &Command, ctx: &Context) -> Result<Value, Failure> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Gauss(a) => {
            if a.q == 0 {
                return Err(invalid("q must be ≥ 1"));
            }
            Ok(complex(eval_gauss_sum(a.k, a.a, a.b, a.q)))
        }
        Command::Integral(a) => {
            let tol = a.tol.unwrap_or(1e-8 * a.n as f64);
            Ok(complex(eval_oscillatory_integral(&a.xi, a.n, tol)?))
        }
        Command::Arc(a) => arc(a),
        Command::Decompose(a) => decompose(a),
        Command::Powerfull(a) => powerfull(a),
        Command::Dirichlet(a) => dirichlet(a),
        Command::Sup(a) => {
            let params = WeylParams::new(a.n, a.k)?;
            Ok(to_value(&sup_over_t_with(params, a.x, &ctx.sup(a.oversample))?))
        }
        Command::Lpnorm(a) => {
            let params = WeylParams::new(a.n, a.k)?;
            let opts = LpNormOptions {
                x_grid: a.x_grid.unwrap_or(8 * a.n),
                sup: ctx.sup(a.oversample),
                farey: !a.no_farey,
                exec: ctx.exec,
            };
            Ok(json!({ "norms": lp_norms_max(params, &a.p, &opts)? }))
        }
        Command::Levelset(a) => levelset(a, ctx),
        Command::ExponentFit(a) => {
            let opts = FitOptions {
                x_grid_factor: a.x_grid_factor,
                sup: ctx.sup(a.oversample),
                farey: !a.no_farey,
                exec: ctx.exec,
            };
            let fits = exponent_fits(a.k, &a.p, &a.n, &opts)?;
            let mut out = json!({ "fits": fits });
            // single-exponent runs also expose the fit fields at the top level
            if let [fit] = fits.as_slice() {
                if let (Value::Object(dst), Value::Object(src)) = (&mut out, to_value(fit)) {
                    dst.extend(src);
                }
            }
            Ok(out)
        }
        Command::ConjectureScan(a) => Ok(to_value(&conjecture_scan(a.k, a.n, a.samples, ctx.seed, ctx.exec)?)),
        Command::Census(a) => Ok(to_value(&good_set_census_with(a.k, a.q, ctx.exec)?)),
        Command::Certificate(a) => certificate(a, ctx),
        Command::Verify(a) => verify(a, ctx),
    }
}

/// The configuration that determines the outputs; thread count and cache
/// flags are excluded because they never change results.
pub fn config_value(cli: &Cli) -> Value {
    let mut v = to_value(&cli.command);
    v["budget"] = json!(cli.budget);
    v["seed"] = json!(cli.seed);
    v
}

fn document(config: &Value, hash: &str, outputs: &Value) -> Value {
    json!({
        "schema": SCHEMA,
        "version": VERSION,
        "command": config["command"],
        "config_hash": hash,
        "config": config,
        "outputs": outputs,
    })
}

fn run_in_pool<R: Send>(threads: usize, f: impl FnOnce(Exec) -> R + Send) -> R {
    if threads == 1 {
        return f(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| f(Exec::Parallel)),
            Err(_) => f(Exec::Parallel),
        }
    }
    #[cfg(not(feature = "parallel"))]
    f(Exec::Sequential)
}

/// Parses `argv`, runs the command, writes the JSON document to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };

    let config = config_value(&cli);
    let hash = cache::config_hash(&config);
    let dir = cache::cache_dir();

    if !cli.no_cache && cli.command.replayable() {
        if let Some(record) = cache::load(&dir, &hash, VERSION) {
            let _ = writeln!(err, "replaying cached record {hash}");
            return emit(out, err, &document(&config, &hash, &record.outputs));
        }
    }

    let start = Instant::now();
    let ctx_base = (cli.budget, cli.seed);
    let result = run_in_pool(cli.threads, |exec| {
        let ctx = Context {
            budget: ctx_base.0,
            seed: ctx_base.1,
            exec,
        };
        execute(&cli.command, &ctx)
    });
    let outputs = match result {
        Ok(v) => v,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let record = cache::RunRecord {
        config_hash: hash.clone(),
        version: VERSION.to_string(),
        timestamp: cache::now(),
        wall_time_secs: start.elapsed().as_secs_f64(),
        config: config.clone(),
        outputs,
    };
    if let Err(e) = cache::store(&dir, &record) {
        let _ = writeln!(err, "warning: run record not stored in {}: {e}", dir.display());
    }
    emit(out, err, &document(&config, &hash, &record.outputs))
}

fn emit(out: &mut dyn Write, err: &mut dyn Write, doc: &Value) -> i32 {
    let text = serde_json::to_string_pretty(doc).expect("document serializes");
    match writeln!(out, "{text}") {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            EXIT_IO
        }
    }
}
