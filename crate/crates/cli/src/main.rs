use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use ffl::error::Error;
use ffl::FieldSpec;

mod commands;

/// Exact quadratic Dirichlet L-functions over F_q(T) for prime-polynomial
/// moduli, and exhaustive moment sweeps over whole families.
#[derive(Parser)]
#[command(name = "ffl", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run exact-identity verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Compute one L-function: coefficients, central value, validations.
    Lfunc(LfuncArgs),
    /// Family sweeps and trend tables.
    #[command(subcommand)]
    Moments(MomentsCommand),
    /// Cross-route oracle checks on seeded sample primes.
    OracleSample(OracleArgs),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Exact identity suite: prime counts, divisor sums, residue symbols,
    /// character-sum measurements.
    Identities(IdentitiesArgs),
}

#[derive(Args)]
struct IdentitiesArgs {
    /// Base field size (odd prime, q ≡ 1 mod 4).
    #[arg(long)]
    q: u64,
    /// Run identities for polynomial degrees up to this bound.
    #[arg(long)]
    max_degree: usize,
    /// Emit a machine-readable JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Coefficient sums over all monic f (cost q^(2g)).
    Direct,
    /// Exact half-sum formula for L(1/2) (cost ~2q^g).
    Halfsum,
    /// Point counting over extension fields plus Newton identities.
    Pointcount,
}

#[derive(Args)]
struct LfuncArgs {
    /// Base field size (odd prime, q ≡ 1 mod 4).
    #[arg(long)]
    q: u64,
    /// Modulus P: comma-separated coefficients, low-to-high, e.g. "1,1,0,1"
    /// for T³+T+1. Must be monic, irreducible, of odd degree.
    #[arg(long)]
    poly: String,
    #[arg(long, value_enum)]
    method: Method,
    /// With --method direct: enumerate all 2g coefficient degrees and check
    /// the functional equation instead of filling from it.
    #[arg(long)]
    full_enum: bool,
    /// Relative tolerance for the root-modulus circle check.
    #[arg(long, default_value_t = 1e-9)]
    rh_tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum MomentsCommand {
    /// Sweep every monic irreducible of degree 2g+1 and accumulate exact
    /// first and second moments of L(1/2, χ_P).
    Sweep(SweepArgs),
    /// Combine sweep reports into an asymptotic trend table.
    Table(TableArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Base field size (odd prime, q ≡ 1 mod 4).
    #[arg(long)]
    q: u64,
    /// Genus g; the modulus family has degree 2g+1.
    #[arg(long)]
    genus: u32,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Checkpoint file: written after every committed chunk, resumed from if
    /// present.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Write the canonical JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one CSV row per prime: poly, X, Y, float central value.
    #[arg(long)]
    dump_primes: Option<PathBuf>,
    /// Candidates per work unit (checkpoint granularity).
    #[arg(long, default_value_t = ffl::moments::DEFAULT_CHUNK_SIZE)]
    chunk_size: u64,
    /// Also accumulate Σ L^k for 3 ≤ k ≤ this value (reported without any
    /// main-term comparison).
    #[arg(long)]
    higher_moments: Option<u32>,
    /// Stop after committing this many chunks (requires --checkpoint);
    /// used to exercise crash recovery.
    #[arg(long, hide = true)]
    max_chunks: Option<u64>,
}

#[derive(Args)]
struct TableArgs {
    /// Sweep report JSON files (same q, distinct genus, at least two).
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Emit CSV instead of the aligned text table.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Base field size (odd prime, q ≡ 1 mod 4).
    #[arg(long)]
    q: u64,
    /// Genus (≤ 2: the cross-check routes cost q^(2g)).
    #[arg(long)]
    genus: u32,
    /// How many primes to sample.
    #[arg(long)]
    count: usize,
    /// Seed for the deterministic sample selection.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    rh_tol: f64,
    #[arg(long)]
    json: bool,
}

/// Exit contract: 0 all-pass, 1 assertion/verification failure, 2 usage.
fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn field(q: u64) -> Result<FieldSpec, Error> {
    FieldSpec::new(q)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify(VerifyCommand::Identities(args)) => {
            commands::verify::run(field(args.q)?, args.max_degree, args.json)
        }
        Command::Lfunc(args) => {
            let spec = field(args.q)?;
            if args.full_enum && args.method != Method::Direct {
                return Err(Error::domain(
                    "--full-enum only applies to --method direct",
                ));
            }
            let method = match args.method {
                Method::Direct => commands::lfunc::Method::Direct {
                    full_enumeration: args.full_enum,
                },
                Method::Halfsum => commands::lfunc::Method::Halfsum,
                Method::Pointcount => commands::lfunc::Method::Pointcount,
            };
            commands::lfunc::run(spec, &args.poly, method, args.rh_tol, args.json)
        }
        Command::Moments(MomentsCommand::Sweep(args)) => commands::moments::run_sweep(
            field(args.q)?,
            args.genus,
            args.workers,
            args.chunk_size,
            args.checkpoint,
            args.out,
            args.dump_primes,
            args.higher_moments,
            args.max_chunks,
        ),
        Command::Moments(MomentsCommand::Table(args)) => {
            commands::moments::run_table(&args.inputs, args.csv)
        }
        Command::OracleSample(args) => commands::oracle::run(
            field(args.q)?,
            args.genus,
            args.count,
            args.seed,
            args.rh_tol,
            args.json,
        ),
    }
}
