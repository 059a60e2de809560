use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Construct, certify and probe MDS multidimensional convolutional codes.
///
/// Results are printed as JSON on stdout. Exit status: 0 success, 1 property
/// failed, 2 usage or parameter error, 3 construction infeasible.
#[derive(Debug, Parser)]
#[command(name = "mdconv", version)]
struct Cli {
    /// Pretty-print JSON output
    #[arg(long, global = true)]
    pretty: bool,

    /// Worker threads for superregularity checks and distance enumeration
    #[arg(long, global = true, env = "MDCONV_WORKERS", default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Field characteristic
    #[arg(long)]
    p: u64,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    e: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceKind {
    Cauchy,
    Random,
    Explicit,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Where the superregular flattened matrix comes from
    #[arg(long, value_enum, default_value_t = SourceKind::Cauchy)]
    source: SourceKind,
    /// Seed for --source random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attempts before a random search gives up
    #[arg(long, default_value_t = 100_000)]
    max_tries: u64,
    /// Matrix JSON file for --source explicit
    #[arg(long, required_if_eq("source", "explicit"))]
    matrix: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the generalized Singleton bound
    Bound {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
    },
    /// Build a rate 1/n MDS code of degree delta
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
        #[command(flatten)]
        source: SourceArgs,
        /// Write the code here and print only the certificate
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a rate k/n MDS code with row degrees nu+1 (k-1 times) and nu
    ConstructStaircase {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        nu: u32,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Flatten a code's generator into its constant coefficient matrix
    Flatten {
        /// Code JSON, or - for stdin
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Check that every minor of a constant matrix is nonzero
    CheckSr {
        /// Matrix JSON, or - for stdin
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Re-derive the MDS certificate of a code
    Certify {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Low-weight codeword from the Singleton bound argument
    Witness {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Encode a message, given as a JSON list of polynomials
    Encode {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        message: String,
    },
    /// Minimum codeword weight over messages of bounded total degree
    Distance {
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Total-degree cap on messages (default: delta+1 for k=1, else 1)
        #[arg(long)]
        cap: Option<u32>,
        /// Stop at the first codeword lighter than this
        #[arg(long)]
        stop_below: Option<u64>,
    },
    /// Run the lemma, identity, closure and witness property suites
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.json);
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
