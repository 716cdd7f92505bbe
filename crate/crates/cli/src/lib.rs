//! Command-line front end for `dgtan`: load a JSON workspace, run one
//! computation, print a table.
//!
//! Exit codes: 0 success, 1 verification failure or no stabilization,
//! 2 input error, 3 budget exceeded.

pub mod commands;
pub mod output;
pub mod workspace;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{Emit, Report, Table};
pub use workspace::Workspace;

#[derive(Debug, Parser)]
#[command(name = "dgtan", version, about = "Exact twisted de Rham and equivariant cdga computations")]
pub struct Cli {
    /// JSON workspace of named groups, representations, spaces, labelings, cdgas and homotopies.
    #[arg(long, global = true)]
    pub workspace: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Pretty)]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight-filtered polynomial de Rham cohomology with local coefficients.
    Cohomology(CohomologyArgs),
    /// Cohomology of a hom complex in the de Rham dg-category of a space.
    TdrHom(TdrHomArgs),
    /// Cochain and cohomology dimensions of a hom complex of an equivariant cdga.
    THom(THomArgs),
    /// Reconstruct a finite group from its regular representation.
    Tannaka(TannakaArgs),
    /// Run one of the structural checks.
    Verify(VerifyArgs),
    /// Enumerate closed-tensor words up to a given depth.
    Words(WordsArgs),
    /// List the built-in and workspace objects, or export one as JSON.
    Fixtures(FixturesArgs),
}

/// A space with coefficients in a representation of a group through an edge labeling.
#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long, default_value = "Z1")]
    pub group: String,
    /// Named labeling; by default the first surjection of π₁ onto the group.
    #[arg(long)]
    pub labeling: Option<String>,
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Representation giving the fiber of the local system.
    #[arg(long, default_value = "trivial")]
    pub coeff: String,
    #[arg(long, default_value_t = dgtan::derham::DEFAULT_WEIGHT_CAP)]
    pub weight_cap: usize,
}

#[derive(Debug, Args)]
pub struct TdrHomArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = dgtan::derham::DEFAULT_WEIGHT_CAP)]
    pub weight_cap: usize,
}

#[derive(Debug, Args)]
pub struct THomArgs {
    #[arg(long)]
    pub cdga: String,
    /// A word such as `tensor(sign,sign)` over representation names.
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 7)]
    pub degree_bound: usize,
}

#[derive(Debug, Args)]
pub struct TannakaArgs {
    #[arg(long)]
    pub group: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    RegularIso,
    Phi,
    Pushout,
    Homotopy,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    /// Cdga for `regular-iso` and `pushout`.
    #[arg(long)]
    pub cdga: Option<String>,
    /// Defaults: 7 for `regular-iso`, 5 for `pushout`, 4 for `phi`.
    #[arg(long)]
    pub degree_bound: Option<usize>,
    /// Space for `phi`.
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, default_value = "Z1")]
    pub group: String,
    #[arg(long)]
    pub labeling: Option<String>,
    #[arg(long, default_value = "trivial")]
    pub source: String,
    #[arg(long, default_value = "trivial")]
    pub target: String,
    #[arg(long, default_value_t = 6)]
    pub weight_cap: usize,
    /// Test objects for `pushout`; by default every built-in representation of the group.
    #[arg(long, value_delimiter = ',')]
    pub objects: Vec<String>,
    /// Workspace homotopy for `homotopy`.
    #[arg(long)]
    pub candidate: Option<String>,
}

#[derive(Debug, Args)]
pub struct WordsArgs {
    #[arg(long, value_delimiter = ',', default_value = "")]
    pub alphabet: Vec<String>,
    #[arg(long)]
    pub depth: usize,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    /// Print only the number of words of each depth.
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// `space`, `group`, `representation` or `cdga`; with `--name`, export that object.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub name: Option<String>,
    /// Group of an exported representation.
    #[arg(long, default_value = "Z1")]
    pub group: String,
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> anyhow::Result<Report> {
    let ws = match &cli.workspace {
        Some(p) => Workspace::load(p)?,
        None => Workspace::default(),
    };
    commands::dispatch(&ws, &cli.command)
}

/// Exit code for an error: 3 for exhausted budgets, 1 for failed
/// verifications, 2 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        match cause.downcast_ref::<dgtan::Error>() {
            Some(dgtan::Error::BudgetExceeded(_)) => return 3,
            Some(dgtan::Error::Verification(_)) => return 1,
            _ => {}
        }
    }
    2
}
