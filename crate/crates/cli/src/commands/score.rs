use gru_vader_core::sentiment::classify;

use crate::args::ScoreArgs;
use crate::error::CliError;
use crate::pipeline::{apply_lexicon_args, load_lexicon, load_tweets};
use crate::run::{csv_text, num, RunContext};

pub const OUTPUT: &str = "scored.csv";

pub fn run(ctx: &mut RunContext, args: &ScoreArgs) -> Result<(), CliError> {
    apply_lexicon_args(ctx, &args.lexicon);
    if let Some(p) = &args.tweets {
        ctx.config.inputs.tweets = Some(p.clone());
    }
    let tweets = load_tweets(ctx)?;
    let lexicon = load_lexicon(ctx)?;
    let inputs = &ctx.config.inputs;
    let scorer = inputs.scorer;

    let mut rows = Vec::with_capacity(tweets.len());
    for t in &tweets {
        let compound = scorer.score_tweet(&t.text, &lexicon);
        let label = classify(compound, inputs.pos_threshold, inputs.neg_threshold)?;
        rows.push(vec![
            t.utc_date().to_string(),
            t.ticker.clone(),
            num(compound),
            label.to_string(),
        ]);
    }
    let n = rows.len();
    let bytes = csv_text(&["date", "ticker", "compound", "label"], rows)?;
    let path = ctx.write_output(OUTPUT, &bytes)?;
    println!(
        "scored {n} tweets with {scorer} ({} lexicon entries) -> {}",
        lexicon.len(),
        path.display()
    );
    Ok(())
}
