use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "versenet",
    version,
    about = "Co-occurrence networks from verse-structured texts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one graph per book plus the union graph, and a stats table.
    Build(Options),
    /// Per-book centrality tables and the cross-book rank matrix.
    Centrality(Options),
    /// Node removal curves and per-node deletion losses.
    Vulnerability(Options),
    /// Louvain partitions over several seeds.
    Communities(Options),
    /// Graph files annotated with communities and focus highlights.
    Export(Options),
    /// Run the whole pipeline from the corpus.
    Report(Options),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::Centrality(_) => "centrality",
            Command::Vulnerability(_) => "vulnerability",
            Command::Communities(_) => "communities",
            Command::Export(_) => "export",
            Command::Report(_) => "report",
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Build(o)
            | Command::Centrality(o)
            | Command::Vulnerability(o)
            | Command::Communities(o)
            | Command::Export(o)
            | Command::Report(o) => o,
        }
    }
}

/// Every option is optional on the command line so that the config file
/// can supply it; unset values fall back to per-command defaults.
#[derive(Debug, Default, Clone, Args)]
pub struct Options {
    /// TOML config with top-level keys and per-subcommand sections.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Verse corpus (TSV: book, chapter, verse, text).
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Name lexicon, one entry per line, `!` marks exclusions.
    #[arg(long, value_name = "PATH")]
    pub lexicon: Option<PathBuf>,
    /// Books to process, comma separated; `all` selects every book plus
    /// the union graph.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub books: Option<Vec<String>>,
    /// Output directory; also where downstream commands look for graphs.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Graph file format: csv, json, graphml or dot.
    #[arg(long)]
    pub format: Option<String>,
    /// First seed; runs use `seed, seed+1, ...`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of seeds for random removal or Louvain restarts.
    #[arg(long, value_name = "N")]
    pub seeds: Option<usize>,
    /// Use 1/weight edge lengths for betweenness and closeness.
    #[arg(long)]
    pub weighted: bool,
    /// harmonic or classic (within-component) closeness.
    #[arg(long)]
    pub closeness_variant: Option<String>,
    /// Names whose communities are highlighted.
    #[arg(long, value_name = "NAME", num_args = 1..)]
    pub focus: Option<Vec<String>>,
    /// Centrality measures, comma separated (default: all six).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub measures: Option<Vec<String>>,
    /// Removal strategies, comma separated (default: all four).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub strategies: Option<Vec<String>>,
    /// Size of the cross-book rank matrix cut-off.
    #[arg(long, value_name = "K")]
    pub top: Option<usize>,
}
