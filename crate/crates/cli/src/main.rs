//! `bconv`: command-line front end for the moment engine, identity verifiers
//! and floating-point oracles.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or a computation
//! errors), 2 on usage errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bconv::analytic::{charfn, sample_s, silver_density, silver_density_exact_moment, SamplerConfig};
use bconv::moments::{moments, Method};
use bconv::selfsim::{run_suite, SelfsimParams, Suite};
use bconv::sequences::{SequenceName, SequenceTable};
use bconv::weights::weights_recursive;
use bconv::{Error, ExactRational, Execution, VerificationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "bconv", version, about = "Exact moments of symmetric infinite Bernoulli convolutions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Even moments m_0, m_2, ..., m_2N of S(λ), keyed by q = λ².
    Moments(MomentsArgs),
    /// Weights W^(k)_{2n}, n = 0..N.
    Weights(WeightsArgs),
    /// Integer sequences, indices 0..N.
    Sequences(SequencesArgs),
    /// Run identity suites; exit 1 if any identity fails.
    Verify(VerifyArgs),
    /// Characteristic function by truncated cosine product.
    Charfn(CharfnArgs),
    /// Density of S(√2), or its exact moments.
    Density(DensityArgs),
    /// Seeded Monte Carlo samples of S(λ).
    Sample(SampleArgs),
}

fn parse_rational(s: &str) -> Result<ExactRational, String> {
    s.parse::<ExactRational>()
        .map_err(|_| format!("expected an integer or p/q rational, got {s:?}"))
}

#[derive(Args, Debug)]
struct MomentsArgs {
    /// q = λ² as an integer or p/q.
    #[arg(long, value_parser = parse_rational)]
    q: ExactRational,
    /// Largest half-index N.
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Bezp)]
    method: MethodArg,
    /// Block size for `--method general`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=6))]
    k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Bezp,
    L4,
    General,
    Euler,
    Silver,
    SilverTau,
    Uniform,
}

#[derive(Args, Debug)]
struct WeightsArgs {
    #[arg(long, value_parser = parse_rational)]
    q: ExactRational,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
    k: u32,
    #[arg(long)]
    n: u64,
}

#[derive(Args, Debug)]
struct SequencesArgs {
    #[arg(long, value_enum)]
    name: SeqArg,
    #[arg(long)]
    n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeqArg {
    Pell,
    PellLucas,
    Lucas,
    Euler,
    Tau,
    Delta,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long)]
    n_max: u64,
    /// q for the self-similarity identities.
    #[arg(long, value_parser = parse_rational, default_value = "2")]
    q: ExactRational,
    /// Block size for the general self-similarity identity.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..=6))]
    k: u32,
    /// Run suites on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Selfsim,
    Remarks,
    Pell,
    Euler,
    All,
}

#[derive(Args, Debug)]
struct CharfnArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DensityArgs {
    /// Evaluate the density at x.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Exact moment E S(√2)^(2N) by piecewise integration.
    #[arg(long)]
    moment: Option<u64>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    count: usize,
    /// Number of terms; defaults to the depth that makes the tail < 1e-12.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include the raw samples in the output.
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Usage(String),
    Verification,
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QNotAboveOne(_)
            | Error::QNotPositive(_)
            | Error::LambdaNotAboveOne(_)
            | Error::TooSmall { .. }
            | Error::BadTolerance(_)
            | Error::Parse { .. }
            | Error::InvalidRadicand(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn emit_rows(out: &mut dyn Write, format: Format, key: &str, rows: &[(u64, String)]) -> io::Result<()> {
    match format {
        Format::Json => {
            for (n, v) in rows {
                writeln!(out, "{}", json!({ "n": n, key: v }))?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,{key}")?;
            for (n, v) in rows {
                writeln!(out, "{n},{v}")?;
            }
        }
        Format::Plain => {
            for (n, v) in rows {
                writeln!(out, "{n}\t{v}")?;
            }
        }
    }
    Ok(())
}

fn emit_reports(out: &mut dyn Write, format: Format, reports: &[VerificationReport]) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r).map_err(io::Error::other)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "identity,n_min,n_max,checked,failures,passed")?;
            for r in reports {
                let (lo, hi) = r.index_range;
                writeln!(out, "{},{lo},{hi},{},{},{}", r.identity_name, r.checked, r.failures.len(), r.passed)?;
            }
        }
        Format::Plain => {
            for r in reports {
                let (lo, hi) = r.index_range;
                let tag = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {} n={lo}..{hi} checked={}", r.identity_name, r.checked)?;
                for f in &r.failures {
                    writeln!(out, "    n={}: lhs={} rhs={}", f.n, f.lhs, f.rhs)?;
                }
            }
        }
    }
    Ok(())
}

fn emit_object(out: &mut dyn Write, format: Format, value: serde_json::Value) -> io::Result<()> {
    let fields = value.as_object().cloned().unwrap_or_default();
    let scalar = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match format {
        Format::Json => writeln!(out, "{value}"),
        Format::Csv => {
            let keys: Vec<&str> = fields.keys().map(String::as_str).collect();
            writeln!(out, "{}", keys.join(","))?;
            let vals: Vec<String> = fields.values().map(scalar).collect();
            writeln!(out, "{}", vals.join(","))
        }
        Format::Plain => {
            for (k, v) in &fields {
                writeln!(out, "{k}\t{}", scalar(v))?;
            }
            Ok(())
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Moments(a) => {
            let method = match a.method {
                MethodArg::Bezp => Method::Bezp,
                MethodArg::L4 => Method::L4,
                MethodArg::General => Method::GeneralK(a.k),
                MethodArg::Euler => Method::EulerInverse,
                MethodArg::Silver => Method::ClosedFormSilver,
                MethodArg::SilverTau => Method::SilverTau,
                MethodArg::Uniform => Method::ClosedFormUniform,
            };
            let t = moments(&a.q, a.n, method)?;
            let rows: Vec<_> = (0..).zip(t.m.iter().map(ToString::to_string)).collect();
            emit_rows(out, format, "m2n", &rows)?;
        }
        Command::Weights(a) => {
            let w = weights_recursive(&a.q, a.k, a.n)?;
            let rows: Vec<_> = (0..).zip(w.values.iter().map(ToString::to_string)).collect();
            emit_rows(out, format, "value", &rows)?;
        }
        Command::Sequences(a) => {
            let name = match a.name {
                SeqArg::Pell => SequenceName::Pell,
                SeqArg::PellLucas => SequenceName::PellLucas,
                SeqArg::Lucas => SequenceName::Lucas,
                SeqArg::Euler => SequenceName::EulerEven,
                SeqArg::Tau => SequenceName::Tau,
                SeqArg::Delta => SequenceName::DeltaPower,
            };
            let t = SequenceTable::build(name, a.n);
            let rows: Vec<_> = t.values.iter().map(|(n, v)| (*n, v.to_string())).collect();
            emit_rows(out, format, "value", &rows)?;
        }
        Command::Verify(a) => {
            let suite = match a.suite {
                SuiteArg::Selfsim => Suite::Selfsim,
                SuiteArg::Remarks => Suite::Remarks,
                SuiteArg::Pell => Suite::Pell,
                SuiteArg::Euler => Suite::Euler,
                SuiteArg::All => Suite::All,
            };
            let params = SelfsimParams { q: a.q, k: a.k };
            let reports = run_suite(suite, a.n_max, &params, exec(a.sequential))?;
            emit_reports(out, format, &reports)?;
            if !reports.iter().all(|r| r.passed) {
                out.flush()?;
                return Err(Failure::Verification);
            }
        }
        Command::Charfn(a) => {
            let e = charfn(a.lambda, a.t, a.tol)?;
            emit_object(out, format, serde_json::to_value(e).map_err(io::Error::other)?)?;
        }
        Command::Density(a) => {
            let value = match (a.x, a.moment) {
                (Some(x), _) => json!({ "x": x, "density": silver_density(x) }),
                (None, Some(n)) => {
                    json!({ "n": n, "moment": silver_density_exact_moment(n)?.to_string() })
                }
                (None, None) => unreachable!("clap enforces one of --x / --moment"),
            };
            emit_object(out, format, value)?;
        }
        Command::Sample(a) => {
            if !(a.lambda > 1.0 && a.lambda.is_finite()) {
                return Err(Error::LambdaNotAboveOne(a.lambda).into());
            }
            let depth = a.depth.unwrap_or_else(|| SamplerConfig::recommended_depth(a.lambda));
            let cfg = SamplerConfig { lambda: a.lambda, depth, seed: a.seed, count: a.count };
            let run = sample_s(&cfg, exec(a.sequential))?;
            let mut value = serde_json::to_value(&run).map_err(io::Error::other)?;
            if format == Format::Json {
                if a.raw {
                    value["samples"] = json!(run.samples);
                }
                writeln!(out, "{value}")?;
            } else {
                emit_object(out, format, serde_json::to_value(run.stats).map_err(io::Error::other)?)?;
                if a.raw {
                    writeln!(out)?;
                    emit_rows(
                        out,
                        format,
                        "sample",
                        &(0..).zip(run.samples.iter().map(|x| x.to_string())).collect::<Vec<_>>(),
                    )?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot open {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match run(cli, out.as_mut()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
