use episense_core::synth::{self, SentimentProcess, SynthConfig};

use crate::cli::SynthArgs;
use crate::error::{CliError, Result};
use crate::formats::{cases, concepts as fmt, embeddings, lexicon, sentiment as sfmt, tweets};
use crate::manifest::RunManifest;

pub fn run(args: &SynthArgs, manifest: &mut RunManifest) -> Result<()> {
    let process = SentimentProcess::parse(&args.process).ok_or_else(|| {
        CliError::config(format!("unknown --process {:?} (iid_uniform or random_walk)", args.process))
    })?;
    let cfg = SynthConfig {
        seed: args.seed,
        days: args.days,
        start: args.start,
        beta_cases: args.beta_cases,
        beta_recovered: args.beta_recovered,
        beta_sentiment: args.beta_sentiment,
        noise_sd: args.noise_sd,
        sentiment_process: process,
        lag: args.lag,
        base: args.base,
        sentiment_scale: args.sentiment_scale,
        recovery_days: args.recovery_days,
        walk_step: args.walk_step,
    };
    let (series, truth) = synth::generate(&cfg)?;
    let (a, b) = synth::generate_divergence_pair(args.seed, args.split_day, args.pair_days)?;
    let toy = synth::toy_corpus(args.seed, &truth, (args.tweets_min, args.tweets_max))?;

    let dir = &args.out_dir;
    let tag = vec![format!("generator: splitmix64 seed={}", args.seed)];
    let pair_tag = vec![format!(
        "generator: splitmix64 seed={} split_day={}",
        args.seed, args.split_day
    )];
    let graph = super::explain::BUNDLED_GRAPH;
    let files = [
        ("cases.csv", cases::render(&series, &tag)),
        ("sentiment_truth.csv", sfmt::render_daily(&truth)),
        ("pair_a.csv", cases::render_curve(&a, &pair_tag)),
        ("pair_b.csv", cases::render_curve(&b, &pair_tag)),
        ("tweets.jsonl", tweets::render(&toy.tweets)),
        ("embeddings.txt", embeddings::render(&toy.embeddings)),
        ("concepts.tsv", fmt::render_concept_list(&toy.concepts)),
        ("lexicon.tsv", lexicon::render(&toy.lexicon)),
        ("graph.json", graph.to_string()),
    ];
    for (name, contents) in &files {
        manifest.write_output(&dir.join(name), contents)?;
    }
    log::info!("wrote {} files to {}", files.len(), dir.display());
    crate::formats::write_text(&dir.join("manifest.json"), &manifest.to_json())
}
