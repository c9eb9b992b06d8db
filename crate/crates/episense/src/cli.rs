//! Argument definitions and dispatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{ArgAction, ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use episense_core::NaiveDate;

use crate::commands;
use crate::config;
use crate::error::{CliError, EXIT_CONFIG, EXIT_OK};
use crate::manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "episense", version, about = "Regional case curves, tweet concepts and sentiment-augmented forecasts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the date two regional case curves stop tracking each other.
    Diverge(DivergeArgs),
    /// Match tweets against concept phrases by embedding similarity.
    Concepts(ConceptsArgs),
    /// Score tweets and aggregate matched sentiment per day.
    Sentiment(SentimentArgs),
    /// Fit one regression of future new cases on case and sentiment features.
    Fit(FitArgs),
    /// Compare models with and without sentiment across horizons.
    Report(ReportArgs),
    /// Rank concepts by influence and list their causal triggers.
    Explain(ExplainArgs),
    /// Write a synthetic dataset covering every pipeline input.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// key = value file supplying defaults for this command's flags.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DivergeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Case CSV for the first region.
    #[arg(long, value_name = "CSV")]
    pub a: PathBuf,
    /// Case CSV for the second region.
    #[arg(long, value_name = "CSV")]
    pub b: PathBuf,
    /// Multiplier applied to the first region's new cases.
    #[arg(long, default_value_t = 1.0)]
    pub scale_a: f64,
    /// Multiplier applied to the second region's new cases.
    #[arg(long, default_value_t = 1.0)]
    pub scale_b: f64,
    /// Rolling window, in days.
    #[arg(long, default_value_t = 7)]
    pub window: usize,
    /// Mean absolute difference that counts as diverged, in (0, 1).
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
    /// Consecutive days the difference must stay above the threshold.
    #[arg(long, default_value_t = 7)]
    pub persistence: usize,
    /// Compare scaled counts without min-max normalization.
    #[arg(long)]
    pub no_normalize: bool,
    /// Treat missing interior dates as zero instead of failing.
    #[arg(long)]
    pub zero_fill: bool,
    /// Ignore days before this date.
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Ignore days after this date.
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long, value_name = "JSON")]
    pub out: Option<PathBuf>,
    /// Also draw both curves and the divergence date.
    #[arg(long, value_name = "SVG")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConceptsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Tweets, one JSON object per line.
    #[arg(long, value_name = "JSONL")]
    pub tweets: PathBuf,
    /// Word vectors with a `count dim` header.
    #[arg(long, value_name = "FILE")]
    pub embeddings: PathBuf,
    /// Concept names with optional phrase overrides, tab separated.
    #[arg(long, value_name = "TSV")]
    pub concepts: PathBuf,
    /// Minimum cosine similarity, inclusive.
    #[arg(long, default_value_t = episense_core::concepts::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Longest candidate phrase, in tokens.
    #[arg(long, default_value_t = episense_core::concepts::DEFAULT_MAX_NGRAM)]
    pub max_ngram: usize,
    /// Offset from UTC used for each tweet's local date.
    #[arg(long, default_value_t = episense_core::corpus::IST_OFFSET_MINUTES, allow_hyphen_values = true)]
    pub utc_offset_minutes: i32,
    /// Compare one mean vector per tweet instead of per phrase.
    #[arg(long)]
    pub whole_tweet: bool,
    /// Replace the built-in stopword list, one word per line.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Keep only tweets from this region id.
    #[arg(long)]
    pub region: Option<String>,
    /// First local date to keep.
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last local date to keep.
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Worker threads; output does not depend on this.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Matches CSV.
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
    /// Concept frequency table.
    #[arg(long, value_name = "CSV")]
    pub cloud: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SentimentArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matches CSV from `concepts`.
    #[arg(long, value_name = "CSV")]
    pub matches: PathBuf,
    /// Tweets to score with the lexicon.
    #[arg(long, value_name = "JSONL", requires = "lexicon")]
    pub tweets: Option<PathBuf>,
    /// Lexicon TSV (`token<TAB>weight`, `!negator`).
    #[arg(long, value_name = "TSV", requires = "tweets", conflicts_with = "scores")]
    pub lexicon: Option<PathBuf>,
    /// Precomputed `tweet_id,score` table instead of a lexicon.
    #[arg(long, value_name = "CSV", required_unless_present = "lexicon")]
    pub scores: Option<PathBuf>,
    /// Tokens after a negator whose weight is flipped.
    #[arg(long, default_value_t = episense_core::sentiment::DEFAULT_NEGATION_WINDOW)]
    pub negation_window: usize,
    /// First day of the output; defaults to the earliest match.
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last day of the output; defaults to the latest match.
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Count each tweet once per day rather than once per matched concept.
    #[arg(long)]
    pub per_tweet: bool,
    /// Repeat the previous value on days without matches.
    #[arg(long)]
    pub carry_forward: bool,
    /// Daily sentiment CSV.
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
    /// Also write the per-tweet scores used.
    #[arg(long, value_name = "CSV")]
    pub scores_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Case CSV.
    #[arg(long, value_name = "CSV")]
    pub cases: PathBuf,
    /// Daily sentiment CSV.
    #[arg(long, value_name = "CSV")]
    pub sentiment: PathBuf,
    /// First day of the training window.
    #[arg(long, default_value = "2020-04-16")]
    pub train_from: NaiveDate,
    /// Last day of the training window.
    #[arg(long, default_value = "2020-05-14")]
    pub train_to: NaiveDate,
    /// Significance level for the one-tailed coefficient tests.
    #[arg(long, default_value_t = episense_core::regress::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Fit without an intercept column.
    #[arg(long)]
    pub no_intercept: bool,
    /// Use the running sum of sentiment as the feature.
    #[arg(long)]
    pub cumulative_sentiment: bool,
    /// Treat missing interior dates as zero instead of failing.
    #[arg(long)]
    pub zero_fill: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Days ahead to predict.
    #[arg(long, default_value_t = 14)]
    pub horizon: u32,
    /// Leave the sentiment feature out.
    #[arg(long)]
    pub without_sentiment: bool,
    /// Fit JSON.
    #[arg(long, value_name = "JSON")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Horizons to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "14,7,3")]
    pub horizons: Vec<u32>,
    /// Horizon CSV.
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
    /// Also write the text table.
    #[arg(long, value_name = "TXT")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matches CSV from `concepts`.
    #[arg(long, value_name = "CSV")]
    pub matches: PathBuf,
    /// Per-tweet scores (`tweet_id,score`).
    #[arg(long, value_name = "CSV")]
    pub scores: PathBuf,
    /// Fit JSON from `fit`, with the sentiment feature.
    #[arg(long, value_name = "JSON")]
    pub fit: PathBuf,
    /// Causal graph JSON; the bundled SARS sub-event network by default.
    #[arg(long, value_name = "JSON")]
    pub graph: Option<PathBuf>,
    /// First local date counted in the concept cloud.
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last local date counted in the concept cloud.
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Number of concepts to explain.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Trigger search depth.
    #[arg(long, default_value_t = 3)]
    pub max_depth: u32,
    /// Explanations JSON.
    #[arg(long, value_name = "JSON")]
    pub out: PathBuf,
    /// Also write the trigger subgraph as Graphviz text.
    #[arg(long, value_name = "DOT")]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub common: Common,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 90)]
    pub days: usize,
    #[arg(long, default_value = "2020-03-15")]
    pub start: NaiveDate,
    #[arg(long, default_value_t = 0.08, allow_hyphen_values = true)]
    pub beta_cases: f64,
    #[arg(long, default_value_t = -0.08, allow_hyphen_values = true)]
    pub beta_recovered: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta_sentiment: f64,
    #[arg(long, default_value_t = 2.0)]
    pub noise_sd: f64,
    /// iid_uniform or random_walk.
    #[arg(long, default_value = "iid_uniform")]
    pub process: String,
    /// Days between features and the new cases they drive.
    #[arg(long, default_value_t = 7)]
    pub lag: u32,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub base: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub sentiment_scale: f64,
    #[arg(long, default_value_t = 10)]
    pub recovery_days: u32,
    #[arg(long, default_value_t = 0.15)]
    pub walk_step: f64,
    /// Day the divergence pair splits.
    #[arg(long, default_value_t = 30)]
    pub split_day: usize,
    /// Length of the divergence pair.
    #[arg(long, default_value_t = 60)]
    pub pair_days: usize,
    #[arg(long, default_value_t = 4)]
    pub tweets_min: u64,
    #[arg(long, default_value_t = 8)]
    pub tweets_max: u64,
}

/// Effective values of every flag and where each came from.
fn echo(
    sub: &clap::Command,
    matches: &ArgMatches,
    injected: &config::Injected,
) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
    let mut values = BTreeMap::new();
    let mut sources = BTreeMap::new();
    for arg in sub.get_arguments() {
        let id = arg.get_id().as_str();
        let Some(long) = arg.get_long() else { continue };
        if matches!(arg.get_action(), ArgAction::Help | ArgAction::Version) || long == "config" {
            continue;
        }
        let Some(raw) = matches.get_raw(id) else { continue };
        let joined: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
        values.insert(long.to_string(), joined.join(","));
        let source = if injected.user_keys.contains(long) {
            "flag"
        } else if injected.config_keys.contains(long) {
            "config"
        } else {
            "default"
        };
        sources.insert(long.to_string(), source.to_string());
    }
    (values, sources)
}

/// Colors are used only on a terminal and never when `EPISENSE_NO_COLOR` is set.
pub fn use_color() -> bool {
    std::env::var_os("EPISENSE_NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let root = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let injected = match config::inject(args, &root) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("episense: {e}");
            return e.exit_code();
        }
    };
    let matches = match root.clone().try_get_matches_from(&injected.args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_CONFIG;
        }
    };
    let (name, sub_matches) = matches.subcommand().expect("subcommand is required");
    let sub = root.find_subcommand(name).expect("parsed subcommand exists");
    let mut manifest = RunManifest::new(name);
    (manifest.config, manifest.config_sources) = echo(sub, sub_matches, &injected);

    let result = match cli.command {
        Command::Diverge(a) => commands::diverge::run(&a, &mut manifest),
        Command::Concepts(a) => commands::concepts::run(&a, &mut manifest),
        Command::Sentiment(a) => commands::sentiment::run(&a, &mut manifest),
        Command::Fit(a) => commands::fit::run(&a, &mut manifest),
        Command::Report(a) => commands::report::run(&a, &mut manifest),
        Command::Explain(a) => commands::explain::run(&a, &mut manifest),
        Command::Synth(a) => commands::synth::run(&a, &mut manifest),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("episense: {e}");
            e.exit_code()
        }
    }
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        CliError::config(e.to_string())
    }
}
