//! `gmkit`: validate Morita contexts, build generalized matrix algebras,
//! and classify k-commuting maps on them.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical finding (a map that is
//! not k-commuting or not proper outside the theorem's hypotheses), 2 a
//! violated theorem (a bug), 3 bad input or unmet preconditions.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};

#[derive(Parser)]
#[command(name = "gmkit", version, about = "k-commuting maps on generalized matrix algebras")]
struct Cli {
    /// Also write the report as a markdown table to this path.
    #[arg(long, global = true)]
    markdown: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Every applicable check.
    All,
    /// Block structure of k-commuting maps.
    Prop22,
    /// Proper-form construction under the properness hypotheses.
    Thm25,
    /// Vanishing of k-commuting derivations.
    Prop24,
    /// Intermediate identities of the proper-form construction.
    Steps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Prop22,
    Thm25,
    Prop24,
    Steps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Full,
    Triangular,
    Block,
    Inflated,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a context document.
    Validate { context: PathBuf },
    /// Build the GMA of a context and emit it as an algebra document.
    Build {
        context: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Classify one linear map on the GMA of a context.
    Classify {
        context: PathBuf,
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Cross-check against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Mode::All)]
        mode: Mode,
    },
    /// Check every generator of the k-commuting (or derivation) space plus
    /// seeded random combinations.
    Sweep {
        context: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SweepMode::Thm25)]
        mode: SweepMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest algebra (number of elements) a sweep may enumerate.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Emit a standard example as a context (or, for inflated, algebra) document.
    Family {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value = "zmod:3")]
        ring: String,
        /// Matrix size.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Size of the upper-left corner.
        #[arg(long, default_value_t = 1)]
        split: usize,
        /// Diagonal block sizes for `block`, comma separated.
        #[arg(long, value_delimiter = ',')]
        d: Vec<usize>,
        /// Lower instead of upper (triangular and block kinds).
        #[arg(long)]
        lower: bool,
        /// Row-major entries of Γ for `inflated`, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma: Vec<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GMKIT_WORKERS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| CliError::Usage(format!("GMKIT_WORKERS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    configure_workers()?;
    match cli.command {
        Command::Validate { context } => commands::validate(&context),
        Command::Build { context, emit } => commands::build(&context, emit.as_deref()),
        Command::Classify {
            context,
            map,
            k,
            oracle,
            mode,
        } => commands::classify(&context, &map, k, oracle, mode),
        Command::Sweep {
            context,
            k,
            mode,
            seed,
            budget,
            samples,
        } => commands::sweep(&context, k, mode, seed, budget, samples),
        Command::Family {
            kind,
            ring,
            n,
            split,
            d,
            lower,
            gamma,
            emit,
        } => commands::family(kind, &ring, n, split, &d, lower, &gamma, emit.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let markdown = cli.markdown.clone();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let (Some(path), Some(md)) = (markdown, &out.markdown) {
                if let Err(e) = std::fs::write(&path, md) {
                    eprintln!("error[Io]: {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
