//! Command-line workflows over `ginfan-core`, kept in a library so tests can
//! drive the exact code path of the binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ginfan_core::generic::{SamplerConfig, DEFAULT_HEIGHT, DEFAULT_SAMPLES, DEFAULT_SEED};

mod commands;
pub mod report;

pub use report::{RunReport, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ginfan", version, about = "Degree components of generic Groebner fans in three variables")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Print the verdict only.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct Sampling {
    /// Number of random coordinate changes that must agree.
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Entries are drawn from [-height, height].
    #[arg(long, default_value_t = DEFAULT_HEIGHT, value_parser = clap::value_parser!(u64).range(1..))]
    pub height: u64,
}

impl Sampling {
    pub fn config(&self) -> SamplerConfig {
        SamplerConfig {
            seed: self.seed,
            height: self.height,
            samples: self.samples,
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check that ω(n) separates J(n) from the other degree-d exponents.
    VerifyVertices {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        dmax: u32,
    },
    /// Run the block-matrix determinant reduction over 1 <= d <= dmax, 0 <= n < d.
    VerifyAppendix {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        dmax: u32,
    },
    /// Generic degree-d component of I(d) and the ω(n) cone checks.
    FamilyBound {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        d: u32,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Generic degree component of an ideal read from a JSON file.
    Fan {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        sampling: Sampling,
        /// Cross-check against exhaustive Plücker enumeration.
        #[arg(long)]
        brute: bool,
        /// Subset limit for --brute (default from GINFAN_BRUTE_LIMIT or 100000).
        #[arg(long)]
        brute_limit: Option<u64>,
    },
    /// Per-degree and cumulative refined vertex counts over LO..HI.
    Refine {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, value_parser = parse_range)]
        degrees: (u32, u32),
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Lower-bound experiment on random dense ideals generated in degree d.
    RandomQ {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        d: u32,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[command(flatten)]
        sampling: Sampling,
        /// Minimum fraction of passing trials for a pass verdict.
        #[arg(long, default_value_t = 0.95)]
        min_rate: f64,
        /// Replace every sample by one with all generators equal.
        #[arg(long)]
        degenerate: bool,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo > hi {
        return Err(format!("LO must not exceed HI, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Failed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<ginfan_core::Error> for CliError {
    fn from(e: ginfan_core::Error) -> Self {
        use ginfan_core::Error as E;
        match e {
            E::Internal(_) | E::ResampleCap(_) | E::Stability(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }
}

/// Runs a parsed command.
pub fn execute(command: &Command) -> Result<RunReport, CliError> {
    commands::execute(command)
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

/// Parses `args` (including the program name), runs the command and renders
/// its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let stdout = if cli.quiet {
                format!("{}\n", report.verdict.as_str())
            } else {
                match cli.format {
                    Format::Json => format!("{}\n", report.to_json()),
                    Format::Csv => report.to_csv(),
                }
            };
            Outcome {
                code: if report.passed() { EXIT_PASS } else { EXIT_FAIL },
                stdout,
                stderr: String::new(),
                report: Some(report),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
            report: None,
        },
    }
}
