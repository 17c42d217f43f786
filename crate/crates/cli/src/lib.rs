//! Command-line front end: argument parsing, manifest loading, command
//! dispatch and report output.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use lndkit::embedding::Method;

pub mod commands;
pub mod manifest;
pub mod report;

use manifest::{InputError, Manifest, Overrides, Source};
use report::Report;

/// Bundled example manifests, addressable as `example:NAME`.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("danielewski", include_str!("../manifests/danielewski.toml")),
    ("char2-conic", include_str!("../manifests/char2-conic.toml")),
    ("quadric-qi", include_str!("../manifests/quadric-qi.toml")),
    ("affine-plane", include_str!("../manifests/affine-plane.toml")),
];

pub fn example(name: &str) -> Option<&'static str> {
    EXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Debug, Parser)]
#[command(name = "lndkit", version, about = "Locally nilpotent derivations and their embedding maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Manifest file, or `example:NAME` for a bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<String>,
    /// Seed for point sampling and random substitutions.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Orbit bound for nilpotency checks and exponential series.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    /// Number of candidate substitutions tried by the target reduction.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Injectivity test: jacobian, elimination or both.
    #[arg(long, global = true, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Writes the text report to PATH and the TOML dump to PATH.toml.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify local nilpotency and list generator degrees.
    CheckLnd,
    /// Exponential automorphisms of the sequence derivations.
    Exp,
    /// Local slices and the Dixmier projection of `run.element`.
    Slice,
    /// Bounded common kernel of the sequence derivations.
    Kernel,
    /// The embedding map of the sequence and its generic rank.
    Psi,
    /// Injectivity of the specialized embedding at the manifest points.
    Inject,
    /// Target reduction and the open-locus certificate.
    Certify,
    /// The full pipeline: sequence choice, reduction, certificate, sampling.
    Pipeline,
    /// Classify points of the characteristic-two conic.
    XkConic {
        /// Comma-separated values of lambda, overriding `run.conic_lambda`.
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<String>>,
    },
    /// Print a bundled manifest.
    Example {
        /// One of danielewski, char2-conic, quadric-qi, affine-plane.
        name: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(e: &InputError) -> Self {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

fn load_source(spec: &str) -> Result<Source, InputError> {
    if let Some(name) = spec.strip_prefix("example:") {
        return example(name)
            .map(|t| Source::new(spec, t))
            .ok_or_else(|| InputError::new(None, format!("unknown bundled example `{name}`")));
    }
    std::fs::read_to_string(spec)
        .map(|t| Source::new(spec, t))
        .map_err(|e| InputError::new(None, format!("cannot read manifest {spec}: {e}")))
}

fn dump_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".toml");
    PathBuf::from(s)
}

fn write_out(out: &Path, text: &str, dump: Option<&str>) -> Result<(), InputError> {
    let io = |p: &Path, e: std::io::Error| InputError::new(None, format!("cannot write {}: {e}", p.display()));
    std::fs::write(out, text).map_err(|e| io(out, e))?;
    if let Some(d) = dump {
        let p = dump_path(out);
        std::fs::write(&p, d).map_err(|e| io(&p, e))?;
    }
    Ok(())
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    if let Command::Example { name } = &cli.command {
        let Some(text) = example(name) else {
            let known: Vec<&str> = EXAMPLES.iter().map(|(n, _)| *n).collect();
            return Outcome::input_error(&InputError::new(
                None,
                format!("unknown example `{name}` (known: {})", known.join(", ")),
            ));
        };
        if let Some(out) = &cli.out {
            if let Err(e) = write_out(out, text, None) {
                return Outcome::input_error(&e);
            }
        }
        return Outcome { code: 0, stdout: text.to_string(), stderr: String::new() };
    }
    let report = match execute(cli) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(&e),
    };
    let text = report.text();
    if let Some(out) = &cli.out {
        if let Err(e) = write_out(out, &text, Some(&report.toml())) {
            return Outcome::input_error(&e);
        }
    }
    Outcome { code: report.exit_code, stdout: text, stderr: String::new() }
}

fn execute(cli: &Cli) -> Result<Report, InputError> {
    let spec = cli
        .manifest
        .as_deref()
        .ok_or_else(|| InputError::new(None, "--manifest PATH is required (or example:NAME)"))?;
    let overrides = Overrides { seed: cli.seed, bound: cli.bound, trials: cli.trials, method: cli.method };
    let m = Manifest::parse(load_source(spec)?, &overrides)?;
    match &cli.command {
        Command::CheckLnd => commands::check_lnd(&m),
        Command::Exp => commands::exp(&m),
        Command::Slice => commands::slice(&m),
        Command::Kernel => commands::kernel(&m),
        Command::Psi => commands::psi(&m),
        Command::Inject => commands::inject(&m),
        Command::Certify => commands::certify(&m),
        Command::Pipeline => commands::pipeline(&m),
        Command::XkConic { lambda } => commands::xk_conic(&m, lambda.as_deref()),
        Command::Example { .. } => unreachable!("handled in run"),
    }
}

/// Parses arguments and runs. Usage errors exit with 1, help and version
/// with 0.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            }
        }
    }
}
