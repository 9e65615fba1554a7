//! `clonekit` command-line front end.
//!
//! Exit codes: 0 success, 1 negative decision, 2 input error, 3 resource cap.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clonekit::Config;

use crate::output::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "clonekit",
    version,
    about = "Clones, relations and subpowers of finite algebras"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (overrides the config file).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON config file with resource caps, thread count and seed.
    #[arg(long, global = true, env = "CLONEKIT_CONFIG")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The n-ary term operations of an algebra, or the subpower generated by tuples.
    Closure {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        arity: usize,
        /// Relation whose tuples generate a subpower of the given arity.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Least Malcev, k-edge or k-ary near-unanimity term operation.
    FindTerm {
        #[arg(long, value_enum)]
        kind: TermKind,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Pairs of values at a word taken by term operations agreeing below it.
    Phi {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Whether a word belongs to the lambda set of a pair (1-based, e.g. "1,2").
    Lambda {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        word: String,
    },
    /// Bounded search for the minimal words of every lambda set.
    ComputeM {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Decide whether a function is a term operation of the generators.
    IsTermFunction {
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: MembershipKind,
        #[arg(long)]
        gens: PathBuf,
        #[arg(long = "fn")]
        function: PathBuf,
        /// Relations assumed to determine the clone (mode relations).
        #[arg(long, num_args = 1..)]
        relations: Vec<PathBuf>,
    },
    /// All n-ary operations preserving the given relations.
    Pol {
        #[arg(long, num_args = 1.., required = true)]
        relations: Vec<PathBuf>,
        #[arg(long)]
        arity: usize,
    },
    /// Whether a function preserves a relation.
    Preserves {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        relation: PathBuf,
    },
    /// All subuniverses of a power of an algebra.
    Subuniverses {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        power: usize,
    },
    /// Check the hypotheses and conclusion of the subpower representation criterion.
    RepCheck {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long = "f")]
        smaller: PathBuf,
        #[arg(long = "g")]
        larger: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// One relation with the same polymorphisms as the given ones.
    CombineRelations {
        #[arg(long, num_args = 1.., required = true)]
        relations: Vec<PathBuf>,
    },
    /// Whether Pol of the relations equals the clone of the algebra at arities 1..=n.
    VerifyDetermination {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        relations: Vec<PathBuf>,
        #[arg(long)]
        arity: usize,
    },
    /// Primitive-positive definition of a subgroup over one relation.
    PpFormula {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        /// Defaults to the graph of the group multiplication.
        #[arg(long)]
        relation: Option<PathBuf>,
    },
    /// Embedding order on words (1-based letters).
    Wpo {
        #[command(subcommand)]
        command: WpoCommand,
    },
    /// Run the acceptance checks and print a pass/fail matrix.
    Selftest,
}

#[derive(Args, Debug)]
pub struct Alphabet {
    /// Alphabet size; defaults to the largest letter used.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum WpoCommand {
    /// Witness for a <=_E b.
    Embeds {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        alphabet: Alphabet,
    },
    /// Apply T_{a,b,h} to a tuple; h defaults to the witness found by `embeds`.
    TMap {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Input tuple, 1-based, of length |a|.
        #[arg(long)]
        x: String,
        /// Witness as 1-based positions, e.g. "[1,3]".
        #[arg(long)]
        witness: Option<String>,
        #[command(flatten)]
        alphabet: Alphabet,
    },
    /// Minimal words of the upward closure of the given words, up to a length.
    Minimals {
        #[arg(long = "gen", num_args = 1.., required = true)]
        gens: Vec<String>,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        alphabet: Alphabet,
    },
    /// Position of the first occurrence of a letter.
    FirstOcc {
        #[arg(long)]
        a: String,
        #[arg(long)]
        letter: usize,
        #[command(flatten)]
        alphabet: Alphabet,
    },
    /// Words obtained by deleting one letter that is not a first occurrence.
    Predecessors {
        #[arg(long)]
        a: String,
        #[command(flatten)]
        alphabet: Alphabet,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TermKind {
    Malcev,
    Edge,
    Nu,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MembershipKind {
    Exhaustive,
    Relations,
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let mut config = match &cli.config {
        Some(path) => Config::from_json(&output::read(path)?).map_err(Failure::from)?,
        None => Config::default(),
    };
    if let Some(t) = cli.threads {
        config.thread_count = t;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<output::Report, Failure> {
    let config = load_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.thread_count)
        .build()
        .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    pool.install(|| commands::dispatch(&cli.command, &config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            report.print(cli.json);
            ExitCode::from(report.code())
        }
        Err(failure) => {
            failure.print(cli.json);
            ExitCode::from(failure.code)
        }
    }
}
