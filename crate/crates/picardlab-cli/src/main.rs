//! `picardlab`: runs the toolkit's checks and emits JSON or CSV reports.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 for
//! usage and input errors. `PICARDLAB_THREADS` caps the worker pool.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "picardlab", version, about = "Numerical checks for PSL(2, Z[i])")]
pub struct Cli {
    /// Largest modulus norm in modulus panels
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(i64).range(1..))]
    pub qmax_norm: i64,
    /// Largest norm for m, n panels
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
    pub nmax_norm: i64,
    /// Lattice truncation for series checks
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(i64).range(1..))]
    pub truncation_norm: i64,
    /// Override every check's own tolerance
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Spectral parameter table: one r_j per line, ascending, `#` comments
    #[arg(long, global = true, value_name = "FILE")]
    pub eigenvalues: Option<PathBuf>,
    /// Entry height of the matrix box for geodesic counting
    #[arg(long = "H", global = true, default_value_t = 40, value_parser = clap::value_parser!(i64).range(1..))]
    pub h: i64,
    /// Entry height of the conjugator box
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(i64).range(1..))]
    pub conj_height: i64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kloosterman sums against the Weil bound (one sum, or a panel)
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Twisted sums of S(c, c; q) against norm(q) rho_q(conj(n)^2 - 4)
    Identity,
    /// rho_q(conj(n)^2 - 4) and the trace congruence count
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Dedekind zeta of Q(i): lattice sum, functional equation, residue
    Zeta,
    /// Functional equation of the angular Lerch zeta
    LerchFe,
    /// Gamma, Bessel and kernel identities
    SpecfunCheck,
    /// Weight functions, transforms and the I integrals
    MomentsCheck,
    /// Conjugacy-class census and the counting functions
    Geodesics {
        #[arg(long = "X")]
        x: Option<f64>,
        /// Points in the emitted (X, Psi) series
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// S(T, X) with its dyadic smoothed counterpart
    SpectralSum {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "X")]
        x: f64,
        #[arg(long = "G", default_value_t = 1.0)]
        g: f64,
    },
    /// X^2/2 plus the spectral terms up to T
    ExplicitFormula {
        #[arg(long = "X")]
        x: f64,
        #[arg(long = "T")]
        t: f64,
    },
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("PICARDLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("PICARDLAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            print!("{text}");
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
