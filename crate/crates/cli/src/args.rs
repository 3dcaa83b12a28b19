use std::path::PathBuf;

use arrovian::Domain;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "arrovian", version, about = "Exhaustive checks of Arrow's axioms on small domains")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for parallel scans.
    #[arg(long, global = true, env = "ARROVIAN_THREADS")]
    pub threads: Option<usize>,

    /// Write the run manifest here instead of to stderr.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// List every weak (or linear) order on m alternatives.
    Orders(OrdersArgs),
    /// Pairwise majority on a three-voter profile, by default the cyclic one.
    CondorcetDemo(CondorcetArgs),
    /// Check A1-A5 for a welfare function file.
    Axioms(SwfArgs),
    /// Classify a coalition family, or list every filter on n voters.
    Filters(FiltersArgs),
    /// Decisive coalitions of a welfare function.
    Bridge(BridgeArgs),
    /// Search all independent welfare functions for those satisfying A1-A4.
    ArrowSearch(SearchArgs),
    /// Pair verdicts for the infinite electorate over finite and cofinite sets.
    InfiniteDemo(InfiniteArgs),
    /// Write a built-in welfare function as a JSON file.
    Builtin(BuiltinArgs),
    /// Rerun the command recorded in a manifest and compare output digests.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orders(_) => "orders",
            Command::CondorcetDemo(_) => "condorcet-demo",
            Command::Axioms(_) => "axioms",
            Command::Filters(_) => "filters",
            Command::Bridge(_) => "bridge",
            Command::ArrowSearch(_) => "arrow-search",
            Command::InfiniteDemo(_) => "infinite-demo",
            Command::Builtin(_) => "builtin",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct OrdersArgs {
    #[arg(short, value_name = "M")]
    pub m: usize,
    /// Strict orders only.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CondorcetArgs {
    /// Profile JSON: {"prefs": ["A>B>C", ...]}.
    #[arg(long, value_name = "FILE")]
    pub profile: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SwfArgs {
    #[arg(long, value_name = "FILE")]
    pub swf: PathBuf,
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct FiltersArgs {
    /// Family JSON: {"n": 3, "members": [[0], [0, 1], ...]}.
    #[arg(long, value_name = "FILE")]
    pub family: Option<PathBuf>,
    /// Scan every family of subsets of n voters (n <= 4).
    #[arg(long, value_name = "N")]
    pub enumerate: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct BridgeArgs {
    #[command(subcommand)]
    pub action: BridgeAction,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BridgeAction {
    /// Extract and classify the decisive family.
    Extract(SwfArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    pub alternatives: usize,
    #[arg(long)]
    pub voters: usize,
    #[arg(long, default_value = "linear")]
    pub domain: Domain,
    /// Write the search certificate here.
    #[arg(long, value_name = "FILE")]
    pub certificate: Option<PathBuf>,
    /// Allow the long-running three-voter linear search.
    #[arg(long)]
    pub long: bool,
    #[arg(long, default_value_t = arrovian::arrow_search::DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
}

#[derive(Args, Debug, Serialize)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("rule").required(true).args(["dictator", "frechet"])))]
pub struct InfiniteArgs {
    /// Use the rule that copies voter V.
    #[arg(long, value_name = "V")]
    pub dictator: Option<u64>,
    /// Use the rule that follows the cofinite part.
    #[arg(long)]
    pub frechet: bool,
    /// Show the split that separates voter V from everyone else.
    #[arg(long, value_name = "V")]
    pub witness: Option<u64>,
    /// Evaluate the rule on one split, e.g. '{"first":"fin{5}","second":"cof{5}","tie":"fin{}"}'.
    #[arg(long, value_name = "JSON")]
    pub split: Option<String>,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinKind {
    Dictator,
    AntiDictator,
    Borda,
    Majority,
    ConstantTie,
}

#[derive(Args, Debug, Serialize)]
pub struct BuiltinArgs {
    pub kind: BuiltinKind,
    #[arg(long, default_value_t = 3)]
    pub alternatives: usize,
    #[arg(long)]
    pub voters: usize,
    #[arg(long, default_value = "linear")]
    pub domain: Domain,
    /// Voter for dictator and anti-dictator.
    #[arg(long, default_value_t = 0)]
    pub voter: usize,
    /// Write the pairwise rule table instead of one verdict per profile.
    #[arg(long)]
    pub pairwise: bool,
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(value_name = "MANIFEST")]
    pub recorded: PathBuf,
}
