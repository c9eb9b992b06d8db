use std::collections::BTreeMap;

use episense_core::sentiment::{self, DailyOptions};

use crate::cli::SentimentArgs;
use crate::error::{CliError, Result};
use crate::formats::{concepts as fmt, lexicon, sentiment as sfmt, tweets};
use crate::manifest::RunManifest;

pub fn run(args: &SentimentArgs, manifest: &mut RunManifest) -> Result<()> {
    if args.negation_window == 0 {
        return Err(CliError::config("--negation-window must be positive"));
    }
    let matches = fmt::read_matches(&args.matches)?;
    manifest.add_input(&args.matches)?;

    let scores: BTreeMap<String, f64> = match (&args.scores, &args.tweets, &args.lexicon) {
        (Some(path), _, _) => {
            manifest.add_input(path)?;
            sfmt::read_scores(path)?
        }
        (None, Some(tweet_path), Some(lex_path)) => {
            let lex = lexicon::read(lex_path, args.negation_window)?;
            let all = tweets::read(tweet_path)?;
            manifest.add_input(tweet_path)?;
            manifest.add_input(lex_path)?;
            all.iter()
                .map(|t| (t.id.clone(), sentiment::score_tweet(&lex, &t.text)))
                .collect()
        }
        _ => return Err(CliError::config("give either --scores or both --tweets and --lexicon")),
    };

    let dates = matches.iter().map(|m| m.local_date);
    let from = args.from.or_else(|| dates.clone().min());
    let to = args.to.or_else(|| dates.max());
    let (Some(from), Some(to)) = (from, to) else {
        return Err(CliError::data(format!(
            "{}: no matches, so --from and --to are required",
            args.matches.display()
        )));
    };
    let opts = DailyOptions {
        per_tweet: args.per_tweet,
        carry_forward: args.carry_forward,
    };
    let daily = sentiment::daily_sentiment_with(&matches, &scores, from, to, opts)?;

    if let Some(path) = &args.scores_out {
        let mut used: Vec<&str> = matches.iter().map(|m| m.tweet_id.as_str()).collect();
        used.sort_unstable();
        used.dedup();
        let subset = used.into_iter().map(|id| (id.to_string(), scores[id])).collect();
        manifest.write_output(path, &sfmt::render_scores(&subset))?;
    }
    manifest.write_output(&args.out, &sfmt::render_daily(&daily))?;
    manifest.write_beside(&args.out)?;
    Ok(())
}
