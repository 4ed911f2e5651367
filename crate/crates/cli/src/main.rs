mod commands;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mapstack::cech::DEFAULT_COVERS_MAX;
use mapstack::homology::{DEFAULT_KMAX, DEFAULT_NERVE_BOUND};
use mapstack::mapping::DEFAULT_FUNCTOR_BOUND;
use mapstack::Error;

use commands::{Bounds, Outcome};

const EXIT_PARSE: u8 = 1;
const EXIT_BOUND: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

/// Reports on finite groupoids, their mapping groupoids, loops and Čech atlases.
///
/// Inputs are JSON documents, or built-in names: groups `trivial`, `Zn`,
/// `Sn`, `An`, `Dn`, `Q8` and spaces `point`, `pseudo_circle`, `discreteN`.
#[derive(Debug, Parser)]
#[command(name = "mapstack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Maximum number of functors or natural transformations to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_FUNCTOR_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    bound_functors: u64,

    /// Maximum number of nerve simplices.
    #[arg(long, global = true, default_value_t = DEFAULT_NERVE_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    bound_nerve: u64,

    /// Maximum number of open sets per enumerated cover.
    #[arg(long, global = true, default_value_t = DEFAULT_COVERS_MAX as u64, value_parser = clap::value_parser!(u64).range(1..))]
    covers_max: u64,

    /// Seed for the random corpus.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a groupoid, group or finite space document.
    Validate { input: String },
    /// Decide whether two groupoids are equivalent.
    Equiv { a: String, b: String },
    /// The groupoid of functors Y → X.
    Map { y: String, x: String },
    /// The inertia groupoid of X.
    Inertia { x: String },
    /// Split the inertia groupoid of BG along conjugacy classes.
    Decompose { g: String },
    /// Based loops of X (a group G is read as BG).
    Omega {
        x: String,
        /// Label of the basepoint; may be omitted when X has one object.
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Integral homology of the nerve.
    Homology {
        x: String,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: usize,
    },
    /// Classify maps from a finite space K to X through Čech covers.
    Cech { k: String, x: String },
    /// Factor a functor as an equivalence followed by an isofibration.
    Replace { f: String },
    /// Check the exponential law on three groupoids, or on a seeded corpus.
    ExpLaw {
        inputs: Vec<String>,
        /// Number of random triples when no inputs are given.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

fn run(cli: &Cli) -> mapstack::Result<Outcome> {
    let bounds = Bounds { functors: cli.bound_functors, nerve: cli.bound_nerve, covers_max: cli.covers_max as usize };
    match &cli.command {
        Command::Validate { input } => commands::validate_cmd(input),
        Command::Equiv { a, b } => commands::equiv(a, b),
        Command::Map { y, x } => commands::map(y, x, bounds),
        Command::Inertia { x } => commands::inertia(x),
        Command::Decompose { g } => commands::decompose(g),
        Command::Omega { x, basepoint } => commands::omega_cmd(x, basepoint.as_deref()),
        Command::Homology { x, kmax } => commands::homology_cmd(x, *kmax, bounds),
        Command::Cech { k, x } => commands::cech(k, x, bounds),
        Command::Replace { f } => commands::replace_cmd(f),
        Command::ExpLaw { inputs, count } => commands::exp_law(inputs, cli.seed, *count, bounds),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_bound() {
        EXIT_BOUND
    } else if matches!(e, Error::Verification(_)) {
        EXIT_VERIFICATION
    } else {
        EXIT_PARSE
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_PARSE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Table => outcome.report.render_table(),
                Format::Json => outcome.report.render_json(),
            };
            print!("{text}");
            if outcome.rejected_input {
                ExitCode::from(EXIT_PARSE)
            } else if outcome.report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
