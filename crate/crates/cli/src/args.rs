//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slicepool::{PoolConfig, SpPolicy};

pub fn parse_config(s: &str) -> Result<PoolConfig, String> {
    PoolConfig::parse(s).map_err(|e| e.to_string())
}

pub fn parse_policy(s: &str) -> Result<SpPolicy, String> {
    SpPolicy::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "slicepool",
    version,
    about = "In-memory inverted index with slice-pool postings allocation: \
             build indexes, time query sets, sweep configurations, and \
             generate synthetic corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Index a corpus and report memory accounting.
    Build(BuildArgs),
    /// Index a corpus, run a query set with timing, and report metrics.
    Query(QueryArgs),
    /// Evaluate the analytical cost model over a configuration space.
    Sweep(SweepArgs),
    /// Generate a seeded synthetic corpus and query set.
    Gen(GenArgs),
    /// Summarize a corpus (documents, tokens, vocabulary, frequencies).
    Stats(StatsArgs),
}

/// Options shared by every command that builds an index.
#[derive(Args, Debug, Clone)]
pub struct IndexArgs {
    /// Corpus file: one `external_id<TAB>text` record per line.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Slice-size exponents, smallest first (e.g. 1,4,7,11).
    #[arg(long, default_value = "1,4,7,11", value_parser = parse_config)]
    pub config: PoolConfig,

    /// Starting-pool policy.
    #[arg(long, default_value = "default", value_parser = parse_policy)]
    pub sp: SpPolicy,

    /// History file (`term<TAB>frequency`). Read as input normally; with
    /// --split-half the derived history is written here instead.
    #[arg(long)]
    pub history: Option<PathBuf>,

    /// Derive history from the first half of the corpus and index only the
    /// second half.
    #[arg(long)]
    pub split_half: bool,

    /// Reject documents with more than 256 token positions instead of
    /// truncating.
    #[arg(long)]
    pub strict_positions: bool,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub index: IndexArgs,

    /// Report destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[command(flatten)]
    pub index: IndexArgs,

    /// Query file: one whitespace-separated query per line.
    #[arg(long)]
    pub queries: PathBuf,

    /// Timing trials.
    #[arg(long, default_value_t = 3)]
    pub trials: u32,

    /// Results per query for top-k retrieval.
    #[arg(long, default_value_t = 100)]
    pub k: usize,

    /// Log the top-k document ids of every query to stdout.
    #[arg(long)]
    pub dump_results: bool,

    /// Report destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Zipf exponent of the modeled collection.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    /// Vocabulary size of the modeled collection.
    #[arg(long)]
    pub vocab: u64,

    /// Total term occurrences of the modeled collection.
    #[arg(long)]
    pub total_terms: f64,

    /// Query-term frequency histogram (CSV `frequency,count`). Generated
    /// from the Zipf parameters when omitted.
    #[arg(long)]
    pub freq_hist: Option<PathBuf>,

    /// Query terms to sample when no histogram is given.
    #[arg(long, default_value_t = 1000)]
    pub queries: u64,

    /// Rank bias of sampled query terms (0 = uniform).
    #[arg(long, default_value_t = 1.0)]
    pub query_alpha: f64,

    /// Sample seed for the generated query-term distribution.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Smallest slice exponent considered.
    #[arg(long, default_value_t = 0)]
    pub exp_min: u8,

    /// Largest slice exponent considered.
    #[arg(long, default_value_t = 12)]
    pub exp_max: u8,

    /// Smallest pool count considered.
    #[arg(long, default_value_t = 4)]
    pub pools_min: usize,

    /// Largest pool count considered.
    #[arg(long, default_value_t = 8)]
    pub pools_max: usize,

    /// Equal-width memory-cost buckets for Pareto selection.
    #[arg(long, default_value_t = 50)]
    pub buckets: usize,

    /// Report destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Documents to generate.
    #[arg(long, default_value_t = 10_000)]
    pub docs: u64,

    /// Vocabulary size.
    #[arg(long, default_value_t = 10_000)]
    pub vocab: u64,

    /// Zipf exponent of term draws.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    /// Seed; the same seed reproduces byte-identical output.
    #[arg(long)]
    pub seed: u64,

    /// Corpus destination.
    #[arg(long)]
    pub out: PathBuf,

    /// Tokens per document, lower bound.
    #[arg(long, default_value_t = 1)]
    pub doc_len_min: usize,

    /// Tokens per document, upper bound (microblog scale by default).
    #[arg(long, default_value_t = 24)]
    pub doc_len_max: usize,

    /// Queries to generate (skipped when 0).
    #[arg(long, default_value_t = 0)]
    pub queries: u64,

    /// Query-set destination (required when --queries > 0).
    #[arg(long)]
    pub queries_out: Option<PathBuf>,

    /// Terms per query, lower bound.
    #[arg(long, default_value_t = 1)]
    pub query_len_min: usize,

    /// Terms per query, upper bound.
    #[arg(long, default_value_t = 4)]
    pub query_len_max: usize,

    /// Rank bias of query-term draws (0 = uniform).
    #[arg(long, default_value_t = 1.0)]
    pub query_alpha: f64,

    /// Write the postings-length histogram of generated query terms (CSV
    /// `postings_length,count`) to this file.
    #[arg(long)]
    pub emit_histogram: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Corpus file to summarize.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Write the per-term frequency table (`term<TAB>frequency`) here.
    #[arg(long)]
    pub terms_out: Option<PathBuf>,

    /// Write the term-frequency histogram (CSV `frequency,count`) here;
    /// consumable by `sweep --freq-hist`.
    #[arg(long)]
    pub emit_histogram: Option<PathBuf>,

    /// Report destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}
