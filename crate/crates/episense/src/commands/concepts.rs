use episense_core::concepts::{self, ConceptMatch, ConceptSet, MatcherConfig};
use episense_core::corpus::TweetRecord;
use rayon::prelude::*;

use crate::cli::ConceptsArgs;
use crate::error::{CliError, Result};
use crate::formats::{self, concepts as fmt, embeddings, tweets};
use crate::manifest::RunManifest;

pub fn run(args: &ConceptsArgs, manifest: &mut RunManifest) -> Result<()> {
    if args.workers == 0 {
        return Err(CliError::config("--workers must be positive"));
    }
    if let (Some(from), Some(to)) = (args.from, args.to) {
        if from > to {
            return Err(CliError::config(format!("--from {from} is after --to {to}")));
        }
    }
    let stopwords = match &args.stopwords {
        Some(path) => {
            manifest.add_input(path)?;
            formats::read_text(path)?
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect()
        }
        None => concepts::default_stopwords(),
    };
    let cfg = MatcherConfig {
        threshold: args.threshold,
        max_ngram: args.max_ngram,
        stopwords,
        utc_offset_minutes: args.utc_offset_minutes,
        whole_tweet: args.whole_tweet,
    };
    cfg.validate()?;

    let all = tweets::read(&args.tweets)?;
    let store = embeddings::read(&args.embeddings)?;
    let entries = fmt::read_concept_list(&args.concepts)?;
    for path in [&args.tweets, &args.embeddings, &args.concepts] {
        manifest.add_input(path)?;
    }
    let set = ConceptSet::from_phrases(
        &store,
        entries.iter().map(|(n, p)| (n.as_str(), p.as_deref())),
    )?;

    let keep = |t: &&TweetRecord| {
        let day = t.local_date(cfg.utc_offset_minutes);
        args.region.as_ref().is_none_or(|r| &t.region_id == r)
            && args.from.is_none_or(|f| day >= f)
            && args.to.is_none_or(|to| day <= to)
    };
    let selected: Vec<&TweetRecord> = all.iter().filter(keep).collect();
    log::info!("matching {} of {} tweets against {} concepts", selected.len(), all.len(), set.len());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .map_err(|e| CliError::config(format!("cannot start workers: {e}")))?;
    // Chunks are collected in input order, so the worker count never changes
    // the output.
    let matches: Vec<ConceptMatch> = pool.install(|| {
        selected
            .par_iter()
            .map(|t| concepts::match_concepts(t, &store, &set, &cfg))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    log::info!("{} matches", matches.len());

    if let Some(path) = &args.cloud {
        let dates = matches.iter().map(|m| m.local_date);
        let from = args.from.or_else(|| dates.clone().min());
        let to = args.to.or_else(|| dates.max());
        let cloud = match (from, to) {
            (Some(from), Some(to)) => concepts::concept_cloud(&matches, from, to)?,
            _ => return Err(CliError::data("no matches to build a concept cloud from")),
        };
        manifest.write_output(path, &fmt::render_cloud(&cloud))?;
    }
    manifest.write_output(&args.out, &fmt::render_matches(&matches))?;
    manifest.write_beside(&args.out)?;
    Ok(())
}
