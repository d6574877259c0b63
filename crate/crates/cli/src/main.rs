//! `ncdiff`: load an algebra, run a computation or the invariant suite, print a report.
//!
//! Exit codes: 0 everything holds, 1 a mathematical check failed (witness in the report),
//! 2 the input could not be read, parsed or validated.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ncdiff", version, about = "Exact universal differential calculus for finite-dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Builtin algebra, e.g. `dual`, `matrix(2)`, `product(dual, kk)`.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub builtin: Option<String>,
    /// Algebra description file in the text format.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Truncation degree N.
    #[arg(short = 'N', long = "truncation", default_value_t = 2)]
    pub truncation: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Run without the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleChoice {
    /// M = A.
    Regular,
    /// M = A ⊗ A.
    Free,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseChoice {
    /// Fixed points of the action in the file (all of A without one).
    Fixed,
    Center,
    Scalars,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of A, Ω_k up to N, and Der(A).
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// The full invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Random samples per randomized check.
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Frölicher-Nijenhuis bracket of two field valued forms (JSON files).
    FnBracket {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Algebraic bracket [K,L]^Δ of two field valued forms of degree ≥ 1.
    AlgBracket {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Nijenhuis-Richardson bracket of two skew multilinear maps.
    NrBracket {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Curvature of a projection, or of every projection found.
    Curvature {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        projection: ProjectionArgs,
    },
    /// Bianchi identities of a projection, or of every projection found.
    Bianchi {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        projection: ProjectionArgs,
    },
    /// Connection verdicts for a bundle A over B.
    ConnectionCheck {
        #[command(flatten)]
        common: Common,
        /// Candidate connection χ ∈ Ω^1_1; every projection found when omitted.
        #[arg(long)]
        chi: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = BaseChoice::Fixed)]
        base: BaseChoice,
    },
    /// H^n(A, M) by the forms route and by the normalized complex.
    Hochschild {
        #[command(flatten)]
        common: Common,
        /// Single degree; all of 0..=N when omitted.
        #[arg(short = 'n', long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModuleChoice::Regular)]
        module: ModuleChoice,
    },
    /// Noncommutative de Rham dimensions of Ω modulo graded commutators.
    Derham {
        #[command(flatten)]
        common: Common,
    },
    /// Poisson verdict for a skew bilinear map (the commutator when omitted).
    PoissonCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: Option<PathBuf>,
        /// Also scan {-b..b}-combinations of skew biderivations.
        #[arg(long)]
        scan: Option<i64>,
        #[arg(long, default_value_t = 10_000)]
        max_points: usize,
    },
    /// ker μ^n against the sum of A^i ⊗ Ω_1 ⊗ A^j, for n = 2..=max(2, N).
    KernelMuN {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct ProjectionArgs {
    /// Field valued form P ∈ Ω^1_1 with P∘P = P.
    #[arg(long)]
    pub projection: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Info { common } => commands::info(&common),
        Command::Verify { common, trials } => commands::verify(&common, trials),
        Command::FnBracket { common, pair } => commands::fn_bracket(&common, &pair),
        Command::AlgBracket { common, pair } => commands::alg_bracket(&common, &pair),
        Command::NrBracket { common, pair } => commands::nr_bracket(&common, &pair),
        Command::Curvature { common, projection } => commands::curvature(&common, &projection),
        Command::Bianchi { common, projection } => commands::bianchi(&common, &projection),
        Command::ConnectionCheck { common, chi, base } => commands::connection_check(&common, chi.as_deref(), base),
        Command::Hochschild { common, degree, module } => commands::hochschild(&common, degree, module),
        Command::Derham { common } => commands::derham(&common),
        Command::PoissonCheck { common, mu, scan, max_points } => commands::poisson(&common, mu.as_deref(), scan, max_points),
        Command::KernelMuN { common } => commands::kernel_mu_n(&common),
    };
    match outcome {
        Ok(r) => {
            print!("{}", r.rendered);
            if r.holds {
                ExitCode::SUCCESS
            } else {
                for w in &r.witnesses {
                    eprintln!("failed: {w}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
