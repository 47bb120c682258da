//! The `normality-lab` command line: subcommand dispatch, seeding and
//! CSV/JSON emission.

mod commands;
pub mod output;

use crate::algebra::AlgebraError;
use crate::fourier::{FourierError, DEFAULT_BUDGET, DEFAULT_TOL};
use crate::ifs::IfsError;
use crate::martingale::MartingaleError;
use crate::rational::ParseRationalError;
use crate::sampling::{SamplingError, DEFAULT_GUARD};
use crate::stats::StatsError;
use clap::{Args, Parser, Subcommand};
pub use output::{Format, Report};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("precision or budget exhausted: {0}")]
    Precision(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Precision(_) => EXIT_PRECISION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<ParseRationalError> for CliError {
    fn from(e: ParseRationalError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<IfsError> for CliError {
    fn from(e: IfsError) -> Self {
        match e {
            IfsError::Format(_) => CliError::Config(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::System(e) => e.into(),
            AlgebraError::PrecisionExhausted(_) => CliError::Precision(e.to_string()),
            AlgebraError::InvalidInput(_) => CliError::Config(e.to_string()),
            AlgebraError::NotAlgebraicInteger(_) | AlgebraError::ReduciblePolynomial(_) => {
                CliError::Validation(e.to_string())
            }
        }
    }
}

impl From<SamplingError> for CliError {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::System(e) => e.into(),
            SamplingError::InvalidInput(_) => CliError::Config(e.to_string()),
            _ => CliError::Precision(e.to_string()),
        }
    }
}

impl From<FourierError> for CliError {
    fn from(e: FourierError) -> Self {
        match e {
            FourierError::BudgetExceeded(_) => CliError::Precision(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MartingaleError> for CliError {
    fn from(e: MartingaleError) -> Self {
        match e {
            MartingaleError::Sampling(e) => e.into(),
            MartingaleError::Fourier(e) => e.into(),
            MartingaleError::StreamExhausted(_) => CliError::Precision(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "normality-lab", version, about = "Experiments on normality of points of self-similar measures")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads.
    #[arg(long, global = true, env = "NORMALITY_LAB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SystemArg {
    /// System file (JSON).
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent points, one PRNG stream each.
    #[arg(long, default_value_t = 1)]
    pub samples: u64,
    /// Orbit points (or digits) per sample.
    #[arg(long, default_value_t = 1000)]
    pub length: usize,
}

#[derive(Debug, Args)]
pub struct DigitArgs {
    #[arg(long, default_value_t = 2)]
    pub base: u32,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: usize,
}

/// Where a statistic's sequence comes from.
#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// System whose sampled points are iterated by `x ↦ bx mod 1`.
    #[arg(long, required_unless_present = "uniform")]
    pub system: Option<PathBuf>,
    /// Use i.i.d. uniform values instead of orbits.
    #[arg(long, conflicts_with = "system")]
    pub uniform: bool,
    #[command(flatten)]
    pub sample: SampleArgs,
    #[command(flatten)]
    pub digits: DigitArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a system file and print its maps.
    Validate(SystemArg),
    /// Test a system against the obstruction form for base b.
    Classify {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        base: u64,
    },
    /// F_q of the self-similar measure at one rational frequency.
    Fourier {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[command(flatten)]
        fourier: FourierArgs,
    },
    /// sup |F_q| over dyadic bands, with a decay-regime fit.
    Decay {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = 12)]
        j_max: u32,
        #[arg(long, default_value_t = crate::fourier::profile::DEFAULT_PER_BAND)]
        per_band: u64,
        /// Exponent for the log-log envelope check.
        #[arg(long)]
        del_alpha: Option<f64>,
        #[command(flatten)]
        fourier: FourierArgs,
    },
    /// T_b^n(x) for sampled points x.
    Orbit {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        digits: DigitArgs,
    },
    /// Certified base-b digits of sampled points.
    Digits {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        digits: DigitArgs,
    },
    /// T_β^n(x) for sampled points x.
    BetaOrbit {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        sample: SampleArgs,
        /// Rational β.
        #[arg(long, conflicts_with = "beta_poly")]
        beta: Option<String>,
        /// Algebraic β: integer coefficients, highest degree first.
        #[arg(long, requires = "beta_bracket", allow_hyphen_values = true)]
        beta_poly: Option<String>,
        /// `lo,hi` isolating the root of --beta-poly.
        #[arg(long)]
        beta_bracket: Option<String>,
        /// Bits of the starting enclosure (default: enough for --length).
        #[arg(long)]
        precision_bits: Option<u64>,
    },
    /// x^n mod 1.
    PowerOrbit {
        #[arg(long, conflicts_with = "x_poly")]
        x: Option<String>,
        #[arg(long, requires = "x_bracket", allow_hyphen_values = true)]
        x_poly: Option<String>,
        #[arg(long)]
        x_bracket: Option<String>,
        #[arg(long, default_value_t = 1000)]
        length: usize,
    },
    /// Discrepancy, digit block frequencies and Weyl sums of orbits.
    Normality {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        digits: DigitArgs,
        #[arg(long, default_value_t = 2)]
        block: usize,
        #[arg(long, default_value_t = 10)]
        q_max: i64,
        #[arg(long, default_value_t = 0.05)]
        discrepancy_threshold: f64,
        #[arg(long, default_value_t = 0.05)]
        weyl_threshold: f64,
        #[arg(long, default_value_t = 0.02)]
        frequency_threshold: f64,
    },
    /// k-level correlations with a box or triangle test function.
    Correlations {
        #[command(flatten)]
        seq: SequenceArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Box half-width.
        #[arg(long = "box", conflicts_with = "triangle")]
        box_width: Option<f64>,
        /// Triangle half-width.
        #[arg(long)]
        triangle: Option<f64>,
        /// Allowed relative deviation from the Poisson value.
        #[arg(long, default_value_t = 0.1)]
        tolerance: f64,
    },
    /// Nearest-neighbour spacing distribution.
    Spacings {
        #[command(flatten)]
        seq: SequenceArgs,
        /// `start:stop:step` or a comma separated list.
        #[arg(long)]
        s_grid: Option<String>,
        #[arg(long, default_value_t = 0.03)]
        threshold: f64,
    },
    /// Gap between empirical and cylinder Fourier modes along one orbit.
    Martingale {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// The base p.
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        q: i64,
        #[arg(long = "N-list", default_value = "100,1000,10000")]
        n_list: String,
        #[command(flatten)]
        fourier: FourierArgs,
    },
}

/// Runs a parsed command and returns its report.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    commands::execute(command)
}

/// Parses arguments, runs, writes output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("thread count must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    let report = pool.install(|| execute(&cli.command))?;
    let text = report.render(cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
