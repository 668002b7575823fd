//! Command-line front end.
//!
//! Every run prints a report `{schema, version, config, ...}`. The `config`
//! block holds every parameter after defaults were filled in, so
//! `sonine replay report.json` reruns the same computation and prints the same
//! bytes. Exit codes: 0 pass, 1 verification failure or numerical failure,
//! 2 usage error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cones::{matrix_bessel, verify_chamber_sonine, verify_group_integral, verify_limit_corollary, ConeField};
use crate::error::{Error, Result};
use crate::hyper::{bessel_1d, bessel_a, bessel_b, MultiplicityB, TruncationPolicy};
use crate::jack::{binomial, jack_eval};
use crate::laguerre::{laguerre_bessel_limit_error, laguerre_normalized, wallach_sign_scan, LaguerreParams};
use crate::partitions::Partition;
use crate::quadrature::RuleKind;
use crate::scalar::{parse_rational, rational_string, Rational, Scalar};
use crate::sonine::{
    a_from_b_residual, b_to_a_residual, second_moment_check, verify_discrete_sonine, verify_restricted_sonine,
    SonineParams,
};

pub const SCHEMA: &str = "sonine.report.v1";

/// Environment variable naming the directory for cached exact connection tables.
pub const CACHE_ENV: &str = "SONINE_CACHE_DIR";

const AFTER_HELP: &str = "\
Input syntax:
  vectors      comma-separated decimals, e.g. --x 1,0.5 (complex entries such as 0.5i or 1+2i
               are accepted where the function allows complex arguments)
  rationals    p/q or exact decimals, e.g. --k2 1/2 or --k2 0.5 (decimals are read exactly)
  partitions   comma-separated integers, e.g. --kappa 2,1,0
  ranges       (sweep only) a..b doubles from a to b, a..b:s steps linearly by s,
               a,b,c lists values; a range with a > b is empty
Environment:
  SONINE_CACHE_DIR  directory for cached exact connection tables
Exit codes: 0 pass, 1 verification or numerical failure, 2 usage error";

#[derive(Parser, Debug)]
#[command(name = "sonine", version, about = "Dunkl-type Bessel functions, Laguerre connection coefficients and Sonine formula checks", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a single function.
    Eval {
        target: EvalTarget,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite; exit 0 iff it passes.
    Verify {
        suite: VerifySuite,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a residual over a parameter range, one CSV row per point.
    Sweep {
        suite: SweepSuite,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        output: Output,
    },
    /// Rerun the configuration recorded in a report.
    Replay {
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalTarget {
    BesselB,
    BesselA,
    #[value(name = "bessel-1d")]
    #[serde(rename = "bessel-1d")]
    Bessel1d,
    Jack,
    Binom,
    Laguerre,
    MatrixBessel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifySuite {
    RestrictedSonine,
    DiscreteSonine,
    SecondMoment,
    BToA,
    ChamberSonine,
    GroupIntegral,
    LimitCorollary,
    WallachScan,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepSuite {
    LaguerreLimit,
    BToA,
    DiscreteSonine,
    AFromB,
    SecondMoment,
    GroupIntegral,
    ChamberSonine,
    LimitCorollary,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Raw parameter flags. Values stay strings until a command reads them.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    /// Rank (number of variables).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    /// Multiplicity on the short roots.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<String>,
    /// Multiplicity on the long roots (α = 1/k2).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k2: Option<String>,
    /// Parameter shift.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    /// Real dimension of the field (1 or 2).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    /// Second argument of the limit corollary; scalar argument of bessel-1d.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    /// Resolution / refinement level.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    /// Number of unit shifts k2 in the discrete formula.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    /// Monte-Carlo sample count.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<String>,
    /// Quadrature order per axis.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_order: Option<String>,
    /// Series truncation: maximal degree.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<String>,
    /// Series truncation: relative tolerance.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// Jack parameter.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// Laguerre parameter.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// Index of the matrix Bessel function.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    /// Laguerre resolution L for the type-A limit measures.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
    /// Largest |κ| in the sign scan (at most 8).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<String>,
    /// Pass threshold; each suite has its own default.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
}

/// Everything needed to rerun a command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub target: String,
    pub params: Params,
    pub format: Format,
}

/// Outcome of a run: the text to emit and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } | Error::Disagreement { .. } | Error::Io(_) => 1,
        _ => 2,
    }
}

// ---- parameter access -------------------------------------------------------

impl Params {
    fn fill(slot: &mut Option<String>, v: impl Into<String>) {
        if slot.is_none() {
            *slot = Some(v.into());
        }
    }

    fn req<'a>(slot: &'a Option<String>, name: &str) -> Result<&'a str> {
        slot.as_deref().ok_or_else(|| usage(format!("--{name} is required")))
    }
}

fn parse_num<T: FromStr>(s: &str, name: &str) -> Result<T> {
    s.trim().parse().map_err(|_| usage(format!("--{name}: cannot parse {s:?}")))
}

fn num<T: FromStr>(slot: &Option<String>, name: &str) -> Result<T> {
    parse_num(Params::req(slot, name)?, name)
}

fn rational(slot: &Option<String>, name: &str) -> Result<Rational> {
    parse_rational(Params::req(slot, name)?).map_err(|e| usage(format!("--{name}: {e}")))
}

fn real(slot: &Option<String>, name: &str) -> Result<f64> {
    Ok(rational(slot, name)?.to_f64())
}

fn real_list(slot: &Option<String>, name: &str) -> Result<Vec<f64>> {
    Params::req(slot, name)?
        .split(',')
        .map(|t| parse_rational(t).map(|r| r.to_f64()).map_err(|e| usage(format!("--{name}: {e}"))))
        .collect()
}

fn complex_list(slot: &Option<String>, name: &str) -> Result<Vec<Complex64>> {
    Params::req(slot, name)?
        .split(',')
        .map(|t| {
            let t = t.trim();
            match parse_rational(t) {
                Ok(r) => Ok(Complex64::new(r.to_f64(), 0.0)),
                Err(_) => Complex64::from_str(t).map_err(|_| usage(format!("--{name}: cannot parse {t:?}"))),
            }
        })
        .collect()
}

fn partition(slot: &Option<String>, name: &str) -> Result<Partition> {
    Params::req(slot, name)?.parse().map_err(|e: Error| usage(format!("--{name}: {e}")))
}

fn policy(p: &Params) -> Result<TruncationPolicy> {
    let pol = TruncationPolicy {
        max_degree: num(&p.max_degree, "max-degree")?,
        rel_tol: num(&p.tol, "tol")?,
        consecutive_small: 3,
    };
    pol.validate()?;
    Ok(pol)
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn fill_policy(p: &mut Params) {
    let d = TruncationPolicy::default();
    Params::fill(&mut p.max_degree, d.max_degree.to_string());
    Params::fill(&mut p.tol, format!("{:e}", d.rel_tol));
}

/// Values of a sweep flag.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = || usage(format!("malformed range {s:?}"));
    let s = s.trim();
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, st)) => (hi, Some(st)),
            None => (rest, None),
        };
        let lo = parse_rational(lo).map_err(|_| bad())?.to_f64();
        let hi = parse_rational(hi).map_err(|_| bad())?.to_f64();
        let mut out = Vec::new();
        match step {
            Some(st) => {
                let st = parse_rational(st).map_err(|_| bad())?.to_f64();
                if !(st > 0.0) {
                    return Err(bad());
                }
                let count = if hi < lo { 0 } else { ((hi - lo) / st + 1e-9).floor() as usize + 1 };
                out.extend((0..count).map(|i| lo + i as f64 * st));
            }
            None => {
                if !(lo > 0.0) {
                    return Err(usage(format!("doubling range {s:?} must start above 0")));
                }
                let mut v = lo;
                while v <= hi * (1.0 + 1e-12) {
                    out.push(v);
                    v *= 2.0;
                }
            }
        }
        return Ok(out);
    }
    s.split(',').map(|t| parse_rational(t).map(|r| r.to_f64()).map_err(|_| bad())).collect()
}

fn format_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

// ---- dispatch ---------------------------------------------------------------

/// Parses `args` and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { code, text: e.to_string() };
        }
    };
    let (config, out) = match cli.command {
        Command::Eval { target, params, output } => (config("eval", &target, params, output.format), output.out),
        Command::Verify { suite, params, output } => (config("verify", &suite, params, output.format), output.out),
        Command::Sweep { suite, params, output } => {
            (config("sweep", &suite, params, Some(output.format.unwrap_or(Format::Csv))), output.out)
        }
        Command::Replay { report, out } => match load_config(&report) {
            Ok(c) => (c, out),
            Err(e) => return Outcome { code: exit_code(&e), text: format!("error: {e}\n") },
        },
    };
    let (outcome, resolved) = execute_resolved(config);
    if let Some(path) = out {
        let mut written = std::fs::write(&path, &outcome.text);
        if written.is_ok() && resolved.format == Format::Csv {
            // CSV has no room for the run record, so it goes next to the table
            let record = Value::Object(header(&resolved));
            let mut side = path.clone().into_os_string();
            side.push(".run.json");
            written = std::fs::write(side, serde_json::to_string_pretty(&record).expect("record serializes") + "\n");
        }
        if let Err(e) = written {
            return Outcome { code: 1, text: format!("error: cannot write {}: {e}\n", path.display()) };
        }
        return Outcome { code: outcome.code, text: String::new() };
    }
    outcome
}

fn config<T: Serialize>(command: &str, target: &T, params: Params, format: Option<Format>) -> RunConfig {
    let target = serde_json::to_value(target).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    RunConfig { command: command.into(), target, params, format: format.unwrap_or_default() }
}

fn load_config(path: &PathBuf) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        let cfg = v.get("config").cloned().unwrap_or(v);
        return serde_json::from_value(cfg).map_err(|e| Error::Parse(format!("report config: {e}")));
    }
    Err(Error::Parse("report is not JSON; replay the .run.json record written next to CSV output".into()))
}

/// Runs a resolved or partially resolved configuration.
pub fn execute(config: RunConfig) -> Outcome {
    execute_resolved(config).0
}

/// Like [`execute`], also returning the configuration with defaults filled in.
pub fn execute_resolved(mut config: RunConfig) -> (Outcome, RunConfig) {
    let result = match config.command.as_str() {
        "eval" => from_name::<EvalTarget>(&config.target).and_then(|t| eval(t, &mut config)),
        "verify" => from_name::<VerifySuite>(&config.target).and_then(|s| verify(s, &mut config)),
        "sweep" => from_name::<SweepSuite>(&config.target).and_then(|s| sweep(s, &mut config)),
        other => Err(usage(format!("unknown command {other:?}"))),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => Outcome { code: exit_code(&e), text: format!("error: {e}\n") },
    };
    (outcome, config)
}

fn from_name<T: for<'de> Deserialize<'de>>(name: &str) -> Result<T> {
    serde_json::from_value(Value::String(name.into())).map_err(|_| usage(format!("unknown target {name:?}")))
}

fn header(config: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    m
}

fn render(config: &RunConfig, body: Map<String, Value>, code: i32) -> Result<Outcome> {
    let mut m = header(config);
    m.extend(body);
    let text = match config.format {
        Format::Json => serde_json::to_string_pretty(&Value::Object(m))? + "\n",
        Format::Csv => flat_csv(&m)?,
    };
    Ok(Outcome { code, text })
}

/// One CSV row of the scalar fields of `result` (and `pass`).
fn flat_csv(m: &Map<String, Value>) -> Result<String> {
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    if let Some(Value::Object(r)) = m.get("result") {
        for (k, v) in r {
            if !(v.is_object() || v.is_array()) {
                cols.push(k.clone());
                vals.push(scalar_text(v));
            }
        }
    }
    if let Some(v) = m.get("pass") {
        cols.push("pass".into());
        vals.push(scalar_text(v));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&cols)?;
    w.write_record(&vals)?;
    String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn body(result: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("result".into(), result);
    m
}

// ---- eval -------------------------------------------------------------------

fn eval(target: EvalTarget, config: &mut RunConfig) -> Result<Outcome> {
    let p = &mut config.params;
    fill_policy(p);
    let result = match target {
        EvalTarget::BesselB => {
            Params::fill(&mut p.k1, "1/2");
            Params::fill(&mut p.k2, "1/2");
            let x = complex_list(&p.x, "x")?;
            let y = complex_list(&p.y, "y")?;
            let k = MultiplicityB::new(x.len(), real(&p.k1, "k1")?, real(&p.k2, "k2")?)?;
            serde_json::to_value(bessel_b(&k, &x, &y, &policy(p)?)?)?
        }
        EvalTarget::BesselA => {
            Params::fill(&mut p.k2, "1/2");
            let x = complex_list(&p.x, "x")?;
            let y = complex_list(&p.y, "y")?;
            serde_json::to_value(bessel_a(real(&p.k2, "k2")?, &x, &y, &policy(p)?)?)?
        }
        EvalTarget::Bessel1d => {
            let z = complex_list(&p.z, "z")?;
            if z.len() != 1 {
                return Err(usage("--z must be a single value"));
            }
            let v = bessel_1d(real(&p.alpha, "alpha")?, z[0])?;
            json!({ "value_re": v.re, "value_im": v.im })
        }
        EvalTarget::Jack => {
            let kappa = partition(&p.kappa, "kappa")?;
            let x = complex_list(&p.x, "x")?;
            let v = jack_eval(&kappa, &rational(&p.alpha, "alpha")?, &x)?;
            json!({ "value_re": v.re, "value_im": v.im })
        }
        EvalTarget::Binom => {
            let kappa = partition(&p.kappa, "kappa")?;
            let lambda = partition(&p.lambda, "lambda")?;
            json!({ "value": rational_string(&binomial(&kappa, &lambda, &rational(&p.alpha, "alpha")?)?) })
        }
        EvalTarget::Laguerre => {
            let x = real_list(&p.x, "x")?;
            let kappa = partition(&p.kappa, "kappa")?;
            let lp = LaguerreParams::new(x.len(), real(&p.a, "a")?, real(&p.alpha, "alpha")?)?;
            serde_json::to_value(laguerre_normalized(&kappa, &lp, &x, &policy(p)?)?)?
        }
        EvalTarget::MatrixBessel => {
            Params::fill(&mut p.d, "1");
            let spec = real_list(&p.x, "x")?;
            let cf = ConeField::new(num(&p.d, "d")?, spec.len())?;
            serde_json::to_value(matrix_bessel(real(&p.mu, "mu")?, &spec, &cf, &policy(p)?)?)?
        }
    };
    render(config, body(result), 0)
}

// ---- verify -----------------------------------------------------------------

fn exact_multiplicity(p: &Params, n: usize) -> Result<MultiplicityB<Rational>> {
    MultiplicityB::new(n, rational(&p.k1, "k1")?, rational(&p.k2, "k2")?)
}

fn verify(suite: VerifySuite, config: &mut RunConfig) -> Result<Outcome> {
    let p = &mut config.params;
    fill_policy(p);
    let cache = cache_dir();
    let (result, threshold, pass, csv_override): (Value, Value, bool, Option<String>) = match suite {
        VerifySuite::RestrictedSonine => {
            Params::fill(&mut p.k1, "1/2");
            Params::fill(&mut p.k2, "1/2");
            Params::fill(&mut p.h, "2");
            Params::fill(&mut p.rule_order, "64");
            Params::fill(&mut p.threshold, "1e-6");
            let y = real_list(&p.y, "y")?;
            let k = MultiplicityB::new(y.len(), real(&p.k1, "k1")?, real(&p.k2, "k2")?)?;
            let sp = SonineParams::density(k, real(&p.h, "h")?)?;
            let rule = sp.rule(RuleKind::Chamber, num(&p.rule_order, "rule-order")?)?;
            let r = verify_restricted_sonine(&sp, &y, &rule, &policy(p)?)?;
            let t: f64 = real(&p.threshold, "threshold")?;
            (serde_json::to_value(&r)?, json!(t), r.residual <= t, None)
        }
        VerifySuite::DiscreteSonine => {
            Params::fill(&mut p.k1, "1");
            Params::fill(&mut p.k2, "1");
            Params::fill(&mut p.j, "64");
            Params::fill(&mut p.m, "1");
            Params::fill(&mut p.threshold, "1e-3");
            let x = real_list(&p.x, "x")?;
            let y = real_list(&p.y, "y")?;
            let k = exact_multiplicity(p, x.len())?;
            let r = verify_discrete_sonine(
                &x,
                &y,
                &k,
                num(&p.j, "j")?,
                num(&p.m, "m")?,
                &policy(p)?,
                cache.as_deref(),
            )?;
            let t: f64 = real(&p.threshold, "threshold")?;
            (serde_json::to_value(&r)?, json!(t), r.residual <= t, None)
        }
        VerifySuite::SecondMoment => {
            Params::fill(&mut p.k1, "1");
            Params::fill(&mut p.k2, "1");
            Params::fill(&mut p.j, "16");
            Params::fill(&mut p.resolution, "1");
            Params::fill(&mut p.threshold, "1e-8");
            let x = real_list(&p.x, "x")?;
            let k = exact_multiplicity(p, x.len())?;
            let r = second_moment_check(&x, &k, num(&p.j, "j")?, num(&p.resolution, "resolution")?, cache.as_deref())?;
            let t: f64 = real(&p.threshold, "threshold")?;
            let rel = if r.predicted == 0.0 { r.measured.abs() } else { (r.measured / r.predicted - 1.0).abs() };
            let mut v = serde_json::to_value(&r)?;
            v["relative"] = json!(rel);
            (v, json!(t), rel <= t, None)
        }
        VerifySuite::BToA => {
            Params::fill(&mut p.k2, "1/2");
            Params::fill(&mut p.k1, "100");
            Params::fill(&mut p.threshold, "0.02");
            let x = real_list(&p.x, "x")?;
            let y = real_list(&p.y, "y")?;
            let r = b_to_a_residual(real(&p.k1, "k1")?, real(&p.k2, "k2")?, &x, &y, &policy(p)?)?;
            let t: f64 = real(&p.threshold, "threshold")?;
            (json!({ "residual": r }), json!(t), r <= t, None)
        }
        VerifySuite::ChamberSonine | VerifySuite::GroupIntegral | VerifySuite::LimitCorollary => {
            Params::fill(&mut p.d, "1");
            Params::fill(&mut p.k1, "1/2");
            Params::fill(&mut p.seed, "0");
            Params::fill(&mut p.mc, "100000");
            Params::fill(&mut p.threshold, "3");
            let x = real_list(&p.x, "x")?;
            let cf = ConeField::new(num(&p.d, "d")?, x.len())?;
            let k1 = real(&p.k1, "k1")?;
            let mc: usize = num(&p.mc, "mc")?;
            let seed: u64 = num(&p.seed, "seed")?;
            let sigmas = real(&p.threshold, "threshold")?;
            let (r, floor) = match suite {
                VerifySuite::ChamberSonine => {
                    Params::fill(&mut p.h, "2");
                    Params::fill(&mut p.rule_order, "6");
                    let y = real_list(&p.y, "y")?;
                    let order = num(&p.rule_order, "rule-order")?;
                    (verify_chamber_sonine(&cf, k1, real(&p.h, "h")?, &x, &y, mc, order, seed, &policy(p)?)?, 0.0)
                }
                VerifySuite::GroupIntegral => {
                    let y = real_list(&p.y, "y")?;
                    (verify_group_integral(&cf, k1, &x, &y, mc, seed, &policy(p)?)?, 0.0)
                }
                _ => {
                    Params::fill(&mut p.rule_order, "10");
                    let z = real_list(&p.z, "z")?;
                    let order = num(&p.rule_order, "rule-order")?;
                    (verify_limit_corollary(&cf, k1, &x, &z, mc, order, seed, &policy(p)?)?, 1e-3)
                }
            };
            let pass = r.within(sigmas, floor);
            (serde_json::to_value(&r)?, json!({ "sigmas": sigmas, "floor": floor }), pass, None)
        }
        VerifySuite::WallachScan => {
            Params::fill(&mut p.n, "2");
            Params::fill(&mut p.a, "0");
            Params::fill(&mut p.max_weight, "6");
            if p.alpha.is_none() {
                let k2 = rational(&p.k2, "k2").map_err(|_| usage("--alpha or --k2 is required"))?;
                p.alpha = Some(rational_string(&(Rational::from_int(1) / k2)));
            }
            if p.h.is_none() {
                let alpha = rational(&p.alpha, "alpha")?;
                p.h = Some(rational_string(&(Rational::from_int(1) / alpha)));
            }
            let lp = LaguerreParams::new(num(&p.n, "n")?, rational(&p.a, "a")?, rational(&p.alpha, "alpha")?)?;
            let report = wallach_sign_scan(&lp, &rational(&p.h, "h")?, num(&p.max_weight, "max-weight")?)?;
            let pass = report.violations.is_empty();
            let csv = report.to_csv()?;
            (serde_json::to_value(&report)?, json!("no negative coefficient"), pass, Some(csv))
        }
    };
    let code = if pass { 0 } else { 1 };
    if let (Format::Csv, Some(csv)) = (config.format, csv_override) {
        return Ok(Outcome { code, text: csv });
    }
    let mut b = body(result);
    b.insert("threshold".into(), threshold);
    b.insert("pass".into(), json!(pass));
    render(config, b, code)
}

// ---- sweep ------------------------------------------------------------------

fn sweep(suite: SweepSuite, config: &mut RunConfig) -> Result<Outcome> {
    let p = &mut config.params;
    fill_policy(p);
    let cache = cache_dir();
    let pol = policy(p)?;
    let (columns, rows): (Vec<&str>, Vec<Vec<String>>) = match suite {
        SweepSuite::LaguerreLimit => {
            Params::fill(&mut p.k1, "1");
            Params::fill(&mut p.k2, "1");
            Params::fill(&mut p.j, "8..128");
            let x = real_list(&p.x, "x")?;
            let y = real_list(&p.y, "y")?;
            let k = MultiplicityB::new(x.len(), real(&p.k1, "k1")?, real(&p.k2, "k2")?)?;
            let js = integer_range(Params::req(&p.j, "j")?, "j")?;
            let rows = js
                .par_iter()
                .map(|&j| {
                    let r = laguerre_bessel_limit_error(&k, &x, &y, j, &pol)?;
                    Ok(vec![
                        j.to_string(),
                        r.kappa.to_string(),
                        format_num(r.error),
                        r.laguerre.degree_used.to_string(),
                        r.bessel.degree_used.to_string(),
                    ])
                })
                .collect::<Result<_>>()?;
            (vec!["j", "kappa", "residual", "laguerre_degree", "bessel_degree"], rows)
        }
        SweepSuite::BToA => {
            Params::fill(&mut p.k2, "1");
            Params::fill(&mut p.k1, "25,100,400");
            let x = real_list(&p.x, "x")?;
            let y = real_list(&p.y, "y")?;
            let k2 = real(&p.k2, "k2")?;
            let k1s = parse_range(Params::req(&p.k1, "k1")?)?;
            let rows = k1s
                .par_iter()
                .map(|&k1| Ok(vec![format_num(k1), format_num(b_to_a_residual(k1, k2, &x, &y, &pol)?)]))
                .collect::<Result<_>>()?;
            (vec!["k1", "residual"], rows)
        }
        SweepSuite::DiscreteSonine | SweepSuite::AFromB | SweepSuite::SecondMoment => {
            Params::fill(&mut p.k1, "1");
            Params::fill(&mut p.k2, "1");
            let default_j = if suite == SweepSuite::DiscreteSonine { "8..64" } else { "4..64:12" };
            Params::fill(&mut p.j, default_j);
            let x = real_list(&p.x, "x")?;
            let k = exact_multiplicity(p, x.len())?;
            let js = integer_range(Params::req(&p.j, "j")?, "j")?;
            match suite {
                SweepSuite::DiscreteSonine => {
                    Params::fill(&mut p.m, "1");
                    let y = real_list(&p.y, "y")?;
                    let m: u32 = num(&p.m, "m")?;
                    let rows = js
                        .par_iter()
                        .map(|&j| {
                            let r = verify_discrete_sonine(&x, &y, &k, j, m, &pol, cache.as_deref())?;
                            Ok(vec![j.to_string(), r.atoms.to_string(), format_num(r.residual)])
                        })
                        .collect::<Result<_>>()?;
                    (vec!["j", "atoms", "residual"], rows)
                }
                SweepSuite::AFromB => {
                    Params::fill(&mut p.resolution, "4");
                    let y = real_list(&p.y, "y")?;
                    let l: u32 = num(&p.resolution, "resolution")?;
                    let rows = js
                        .par_iter()
                        .map(|&j| {
                            let r = a_from_b_residual(&x, &y, &k, j, l, &pol, cache.as_deref())?;
                            Ok(vec![j.to_string(), r.atoms.to_string(), format_num(r.residual)])
                        })
                        .collect::<Result<_>>()?;
                    (vec!["j", "atoms", "residual"], rows)
                }
                _ => {
                    Params::fill(&mut p.resolution, "1");
                    let l: u32 = num(&p.resolution, "resolution")?;
                    let rows = js
                        .par_iter()
                        .map(|&j| {
                            let r = second_moment_check(&x, &k, j, l, cache.as_deref())?;
                            let rel = (r.measured / r.predicted - 1.0).abs();
                            Ok(vec![j.to_string(), format_num(r.measured), format_num(r.predicted), format_num(rel)])
                        })
                        .collect::<Result<_>>()?;
                    (vec!["j", "measured", "predicted", "relative"], rows)
                }
            }
        }
        SweepSuite::GroupIntegral | SweepSuite::ChamberSonine | SweepSuite::LimitCorollary => {
            Params::fill(&mut p.d, "1");
            Params::fill(&mut p.k1, "1/2");
            Params::fill(&mut p.seed, "0");
            Params::fill(&mut p.mc, "1000..16000");
            match suite {
                SweepSuite::ChamberSonine => {
                    Params::fill(&mut p.h, "2");
                    Params::fill(&mut p.rule_order, "6");
                }
                SweepSuite::LimitCorollary => Params::fill(&mut p.rule_order, "10"),
                SweepSuite::GroupIntegral => {}
                _ => unreachable!(),
            }
            let p = &*p;
            let x = real_list(&p.x, "x")?;
            let cf = ConeField::new(num(&p.d, "d")?, x.len())?;
            let k1 = real(&p.k1, "k1")?;
            let seed: u64 = num(&p.seed, "seed")?;
            let mcs = integer_range(Params::req(&p.mc, "mc")?, "mc")?;
            let run = |mc: u32| -> Result<crate::cones::McReport> {
                let mc = mc as usize;
                match suite {
                    SweepSuite::GroupIntegral => {
                        verify_group_integral(&cf, k1, &x, &real_list(&p.y, "y")?, mc, seed, &pol)
                    }
                    SweepSuite::ChamberSonine => {
                        let h = real(&p.h, "h")?;
                        let order = num(&p.rule_order, "rule-order")?;
                        verify_chamber_sonine(&cf, k1, h, &x, &real_list(&p.y, "y")?, mc, order, seed, &pol)
                    }
                    _ => {
                        let order = num(&p.rule_order, "rule-order")?;
                        verify_limit_corollary(&cf, k1, &x, &real_list(&p.z, "z")?, mc, order, seed, &pol)
                    }
                }
            };
            let rows = mcs
                .iter()
                .map(|&mc| {
                    let r = run(mc)?;
                    Ok(vec![mc.to_string(), format_num(r.residual), format_num(r.mc_stderr)])
                })
                .collect::<Result<_>>()?;
            (vec!["mc", "residual", "mc_stderr"], rows)
        }
    };
    match config.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&columns)?;
            for r in &rows {
                w.write_record(r)?;
            }
            let table = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
                .map_err(|e| Error::Io(e.to_string()))?;
            Ok(Outcome { code: 0, text: table })
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(columns.iter().map(|c| c.to_string()).zip(r.iter().map(|v| json!(v))).collect()))
                .collect();
            render(config, body(json!({ "columns": columns, "rows": rows })), 0)
        }
    }
}

fn integer_range(s: &str, name: &str) -> Result<Vec<u32>> {
    parse_range(s)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(usage(format!("--{name}: {v} is not a nonnegative integer")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("8..128").unwrap(), vec![8.0, 16.0, 32.0, 64.0, 128.0]);
        assert_eq!(parse_range("4..16:6").unwrap(), vec![4.0, 10.0, 16.0]);
        assert_eq!(parse_range("25,100,400").unwrap(), vec![25.0, 100.0, 400.0]);
        assert!(parse_range("5..1").unwrap().is_empty());
        assert!(parse_range("0..8").is_err());
        assert!(parse_range("1..x").is_err());
    }
}
