mod artifacts;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::artifacts::CliError;

#[derive(Parser, Debug)]
#[command(name = "toric-degrees", version, about = "Degree sequences and generating series of monomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Problem inputs shared by every subcommand; flags override the file.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON or TOML problem file.
    #[arg(long)]
    pub problem: Option<PathBuf>,
    /// Integer matrix literal, e.g. "[[2,-1],[1,2]]".
    #[arg(long)]
    pub matrix: Option<String>,
    /// Pd, P<n>, P1xP1 (use --fan for a custom fan).
    #[arg(long)]
    pub variety: Option<String>,
    /// JSON file with {dim, rays, cones}.
    #[arg(long)]
    pub fan: Option<PathBuf>,
    /// "O(1)" or a JSON list of support numbers, e.g. "[0,0,1]".
    #[arg(long)]
    pub divisor: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Highest index n; N + 1 terms.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Directory memoizing degree sequences.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact degree sequence deg_{D,k}(φⁿ), n = 0..=N.
    Degrees {
        #[command(flatten)]
        common: Common,
    },
    /// Certified dynamical degrees λ_0..λ_d.
    Dyndeg {
        #[command(flatten)]
        common: Common,
    },
    /// Rational closed form or natural-boundary evidence.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long, default_value_t = 50)]
        modes: usize,
    },
    /// Circle function and Fourier coefficients (surfaces).
    Fourier {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        modes: usize,
    },
    /// Radial-limit probe of a Fourier coefficient.
    Radial {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_delimiter = ',', default_values_t = toric_core::fourier::DEFAULT_RHOS)]
        rho: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        terms: usize,
    },
    /// Δ_f = 2/(2 - Δ_φ) - 1 with a dominant-pole estimate.
    Bdj {
        #[command(flatten)]
        common: Common,
    },
    /// Mod-p reductions, weak-periodicity and p-kernel probes.
    Modp {
        #[command(flatten)]
        common: Common,
        /// Progressions as "a:b" pairs.
        #[arg(long, value_delimiter = ',', default_values_t = vec!["1:0".to_string(), "2:1".to_string()])]
        progressions: Vec<String>,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        /// p-kernel depth; 0 skips the probe.
        #[arg(long, default_value_t = 0)]
        depth: u32,
        #[arg(long, default_value_t = 50)]
        window: usize,
    },
    /// Integer semiconjugacy between powers of two 2×2 matrices.
    Semiconj {
        #[command(flatten)]
        common: Common,
        #[arg(long = "Aprime")]
        matrix_prime: Option<String>,
        #[arg(long = "box", default_value_t = toric_core::semiconj::DEFAULT_BOX)]
        search_box: i64,
    },
    /// Zeta and Cesàro transforms with the log-derivative check.
    Zeta {
        #[command(flatten)]
        common: Common,
    },
}

fn configure_threads() {
    if let Some(n) = std::env::var("TORIC_DEGREES_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let started = std::time::SystemTime::now();
    let clock = std::time::Instant::now();
    let (name, common, result) = match cli.command {
        Command::Degrees { common } => ("degrees", common.clone(), commands::degrees(&common)),
        Command::Dyndeg { common } => ("dyndeg", common.clone(), commands::dyndeg(&common)),
        Command::Classify { common, max_order, modes } => {
            ("classify", common.clone(), commands::classify(&common, max_order, modes))
        }
        Command::Fourier { common, modes } => ("fourier", common.clone(), commands::fourier(&common, modes)),
        Command::Radial { common, m, rho, terms } => ("radial", common.clone(), commands::radial(&common, m, &rho, terms)),
        Command::Bdj { common } => ("bdj", common.clone(), commands::bdj(&common)),
        Command::Modp { common, progressions, k_max, depth, window } => {
            ("modp", common.clone(), commands::modp(&common, &progressions, k_max, depth, window))
        }
        Command::Semiconj { common, matrix_prime, search_box } => {
            ("semiconj", common.clone(), commands::semiconj(&common, matrix_prime.as_deref(), search_box))
        }
        Command::Zeta { common } => ("zeta", common.clone(), commands::zeta(&common)),
    };
    let outcome = result.and_then(|out| out.write(&common.out, name, started, clock.elapsed()));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic(name));
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<toric_core::Error> for CliError {
    fn from(e: toric_core::Error) -> Self {
        CliError::Core(e)
    }
}
