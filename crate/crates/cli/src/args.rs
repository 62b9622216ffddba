use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "amreval", version, about = "Score AMR parsers and meta-evaluate AMR metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Micro and macro corpus scores of one parser against gold.
    Score(ScoreArgs),
    /// Corpus scores and preference counts for two parsers.
    Compare(CompareArgs),
    /// Agreement of each metric with human preference and acceptability labels.
    MetaEval(MetaEvalArgs),
    /// Spearman correlation matrix between metrics.
    Correlate(CorrelateArgs),
    /// Mean scores (and acceptability) per sentence length.
    LengthBins(LengthBinsArgs),
    /// Inspect graphs: triples, edge-to-node rewrite, k-grams.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    TsvTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ties {
    Split,
    Exclude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregateArg {
    Micro,
    Macro,
    Both,
}

/// Settings shared by every scoring command.
#[derive(Debug, Args)]
pub struct Common {
    /// Gold AMR file.
    #[arg(long)]
    pub gold: PathBuf,
    /// Comma-separated metric ids, or `all`.
    #[arg(long, default_value = "all")]
    pub metrics: String,
    /// Word vectors (word2vec/GloVe text format). Defaults to built-in hashed vectors.
    #[arg(long, env = "AMREVAL_EMBEDDINGS")]
    pub embeddings: Option<PathBuf>,
    /// Only read the first N vectors.
    #[arg(long)]
    pub embeddings_limit: Option<usize>,
    /// Run seed; Smatch restarts and bootstrap seeds derive from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hill-climbing starts for smatch and s2match.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    /// Minimum cosine for graded s2match concept credit.
    #[arg(long, default_value_t = 0.5)]
    pub s2match_threshold: f64,
    /// Count concept unary triples in sema.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub sema_unary: Switch,
    /// Smooth zero k-gram precisions in sembleu.
    #[arg(long)]
    pub sembleu_smoothing: bool,
    #[arg(long, value_enum, default_value_t = Format::TsvTable)]
    pub format: Format,
    /// Output file (a directory for length-bins); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: Common,
    /// Candidate AMR file.
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long, value_enum, default_value_t = AggregateArg::Both)]
    pub aggregate: AggregateArg,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parser A output.
    #[arg(long)]
    pub a: PathBuf,
    /// Parser B output.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = AggregateArg::Both)]
    pub aggregate: AggregateArg,
    /// Treatment of metric ties in the binomial test.
    #[arg(long, value_enum, default_value_t = Ties::Split)]
    pub ties: Ties,
}

#[derive(Debug, Args)]
pub struct MetaEvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parser A output.
    #[arg(long)]
    pub a: PathBuf,
    /// Parser B output.
    #[arg(long)]
    pub b: PathBuf,
    /// Preference TSV: id, label in {-1,0,1}, optional rationale.
    #[arg(long)]
    pub prefs: PathBuf,
    /// Acceptability TSV: id, parser, label in {0,1}.
    #[arg(long)]
    pub accept: PathBuf,
    /// Bootstrap resamples for the confidence intervals.
    #[arg(long, default_value_t = 1000)]
    pub bootstrap_b: usize,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parser A output.
    #[arg(long)]
    pub a: PathBuf,
    /// Optional parser B output.
    #[arg(long)]
    pub b: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LengthBinsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parser A output.
    #[arg(long)]
    pub a: PathBuf,
    /// Optional parser B output.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Add human acceptability series.
    #[arg(long)]
    pub accept: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Sorted triples, including TOP.
    Triples { file: PathBuf },
    /// Triples after rewriting every edge as a node.
    E2n { file: PathBuf },
    /// k-gram counts along outgoing paths.
    Kgrams {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}
