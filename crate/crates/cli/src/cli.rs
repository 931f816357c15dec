use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schrograph_core::OperatorCoefficients;

use crate::corpus::Manifest;
use crate::error::{CliError, Result};
use crate::io::{emit, read_text};
use crate::report::{self, BoundStatesReport, DEFAULT_ORACLE_DEPTH, DEFAULT_SCAN_STEP};
use crate::spec::SpecDocument;
use crate::suite;

#[derive(Debug, Parser)]
#[command(name = "schrograph", version, about = "Spectral and scattering analysis of Schrödinger operators on graphs with tails")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a spec file.
    Validate(Single),
    /// Eigenvalues of the base operator and its singular eigenvalues.
    BaseSpectrum(Single),
    /// Wronskian chains of a solution basis: closedness and tail constants.
    WronskianCheck(AtLambda),
    /// The Lagrangian frame of extendable tail data, and its intersection with the decaying plane.
    Lagrangian(AtLambda),
    /// The scattering matrix inside the band.
    Scattering(AtLambda),
    /// Bound states: in a window, or in both zones with embedded singular states.
    BoundStates(Scan),
    /// Number of bound states above 2 and below -2.
    Morse(Scan),
    /// The sufficient conditions for discrete spectrum, checked against a scan.
    Prop1(Scan),
    /// A table over a grid of spectral parameters.
    Sweep(SweepArgs),
    /// Scanned bound states against the eigenvalues of a Dirichlet truncation.
    OracleCompare(OracleArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Graph spec file (JSON).
    #[arg(long, conflicts_with = "manifest")]
    pub spec: Option<PathBuf>,
    /// Corpus manifest; runs the check over every instance of `--suite`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Suite of the manifest to run.
    #[arg(long, default_value = "main", requires = "manifest")]
    pub suite: String,
    /// Seed for the random spectral parameters of corpus runs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here (atomically) instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Single {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AtLambda {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub output: Output,
    /// Spectral parameter; required with `--spec`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Working depth (defaults depend on the command).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Random spectral parameters per instance in corpus runs.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Scan {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub output: Output,
    #[arg(long, allow_hyphen_values = true, requires = "lambda_max")]
    pub lambda_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "lambda_min")]
    pub lambda_max: Option<f64>,
    /// Largest grid spacing of the scan.
    #[arg(long, default_value_t = DEFAULT_SCAN_STEP)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub output: Output,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_max: f64,
    #[arg(long)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub output: Output,
    /// Truncation depth N.
    #[arg(long, default_value_t = DEFAULT_ORACLE_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = DEFAULT_SCAN_STEP)]
    pub step: f64,
}

/// Either one operator or a corpus.
enum Target {
    One(OperatorCoefficients),
    Corpus(Vec<crate::corpus::Instance>),
}

pub fn load_spec(path: &Path) -> Result<OperatorCoefficients> {
    SpecDocument::from_json(&read_text(path)?, &path.display().to_string())?.build()
}

fn target(input: &Input) -> Result<Target> {
    match (&input.spec, &input.manifest) {
        (Some(p), _) => Ok(Target::One(load_spec(p)?)),
        (None, Some(m)) => Ok(Target::Corpus(Manifest::load(m)?.instances(&input.suite)?)),
        (None, None) => Err(CliError::Usage("one of --spec or --manifest is required".into())),
    }
}

fn single(input: &Input, what: &str) -> Result<OperatorCoefficients> {
    match target(input)? {
        Target::One(op) => Ok(op),
        Target::Corpus(_) => Err(CliError::Usage(format!("{what} takes --spec, not --manifest"))),
    }
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

fn write_json<T: Serialize>(out: &Output, what: &str, value: &T) -> Result<()> {
    if out.format == Format::Csv {
        return Err(CliError::Usage(format!("{what} has no CSV form")));
    }
    emit(out.out.as_deref(), &json(value))
}

fn need_lambda(a: &AtLambda) -> Result<f64> {
    a.lambda.ok_or_else(|| CliError::Usage("--lambda is required with --spec".into()))
}

/// Run one command. `Ok(false)` means the report was written but a corpus check
/// or an oracle comparison did not hold.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate(a) => {
            let op = single(&a.input, "validate")?;
            write_json(&a.output, "validate", &report::validate(&op))?;
        }
        Command::BaseSpectrum(a) => {
            let op = single(&a.input, "base-spectrum")?;
            write_json(&a.output, "base-spectrum", &report::base_spectrum(&op))?;
        }
        Command::WronskianCheck(a) => match target(&a.input)? {
            Target::One(op) => write_json(&a.output, "wronskian-check", &report::wronskian_check(&op, need_lambda(&a)?, a.depth)?)?,
            Target::Corpus(c) => {
                let s = suite::wronskian_suite(&c, a.input.seed, a.count.unwrap_or(5));
                write_json(&a.output, "wronskian-check", &s)?;
                return Ok(s.passed());
            }
        },
        Command::Lagrangian(a) => match target(&a.input)? {
            Target::One(op) => write_json(&a.output, "lagrangian", &report::lagrangian(&op, need_lambda(&a)?, a.depth)?)?,
            Target::Corpus(c) => {
                let s = suite::lagrangian_suite(&c, a.input.seed, a.count.unwrap_or(20));
                write_json(&a.output, "lagrangian", &s)?;
                return Ok(s.passed());
            }
        },
        Command::Scattering(a) => match target(&a.input)? {
            Target::One(op) => write_json(&a.output, "scattering", &report::scattering(&op, need_lambda(&a)?)?)?,
            Target::Corpus(c) => {
                let s = suite::scattering_suite(&c, a.input.seed, a.count.unwrap_or(50));
                write_json(&a.output, "scattering", &s)?;
                return Ok(s.passed());
            }
        },
        Command::BoundStates(a) => {
            let op = single(&a.input, "bound-states")?;
            let range = a.lambda_min.zip(a.lambda_max);
            let r = report::bound_states(&op, range, a.step)?;
            match a.output.format {
                Format::Json => emit(a.output.out.as_deref(), &json(&r))?,
                Format::Csv => {
                    let states = match &r {
                        BoundStatesReport::Window(w) => &w.bound_states,
                        BoundStatesReport::Full(f) => &f.bound_states,
                    };
                    emit(a.output.out.as_deref(), &report::bound_states_csv(states)?)?;
                }
            }
        }
        Command::Morse(a) => {
            let op = single(&a.input, "morse")?;
            if a.lambda_min.is_some() {
                return Err(CliError::Usage("morse scans both zones; drop --lambda-min/--lambda-max".into()));
            }
            write_json(&a.output, "morse", &report::morse(&op, a.step)?)?;
        }
        Command::Prop1(a) => match target(&a.input)? {
            Target::One(op) => {
                let r = report::prop1(&op, a.step)?;
                write_json(&a.output, "prop1", &r)?;
                return Ok(r.consistent);
            }
            Target::Corpus(c) => {
                let s = suite::prop1_suite(&c, a.step);
                write_json(&a.output, "prop1", &s)?;
                return Ok(s.failures.is_empty() && s.violations.is_empty());
            }
        },
        Command::Sweep(a) => {
            let op = single(&a.input, "sweep")?;
            let s = report::sweep(&op, a.lambda_min, a.lambda_max, a.step)?;
            let bytes = match a.output.format {
                Format::Json => json(&s),
                Format::Csv => report::sweep_csv(&s)?,
            };
            emit(a.output.out.as_deref(), &bytes)?;
        }
        Command::OracleCompare(a) => match target(&a.input)? {
            Target::One(op) => {
                let r = report::oracle_compare(&op, a.depth, a.step)?;
                write_json(&a.output, "oracle-compare", &r)?;
                return Ok(r.agree);
            }
            Target::Corpus(c) => {
                let s = suite::oracle_suite(&c, a.depth, a.step);
                write_json(&a.output, "oracle-compare", &s)?;
                return Ok(s.failures.is_empty() && s.agreeing == s.instances);
            }
        },
    }
    Ok(true)
}
