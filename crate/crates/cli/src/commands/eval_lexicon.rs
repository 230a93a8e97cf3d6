use gru_vader_core::eval::{classification_report, ClassificationReport};
use gru_vader_core::sentiment::{classify, SentimentLabel};
use serde::Serialize;

use crate::args::EvalLexiconArgs;
use crate::error::CliError;
use crate::pipeline::{apply_lexicon_args, load_lexicon};
use crate::run::{RunContext, SCHEMA_VERSION};

pub const OUTPUT: &str = "eval_lexicon.json";

#[derive(Serialize)]
struct LexiconReport<'a> {
    schema_version: u32,
    scorer: String,
    lexicon: String,
    pos_threshold: f64,
    neg_threshold: f64,
    items: usize,
    #[serde(flatten)]
    metrics: &'a ClassificationReport,
}

/// `(text, label)` pairs; labels are validated with their line number.
fn read_labelled(bytes: &[u8]) -> Result<Vec<(String, SentimentLabel)>, CliError> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Data(format!("labelled file lacks a {name:?} column")))
    };
    let (i_text, i_label) = (find("text")?, find("label")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let raw = rec.get(i_label).unwrap_or("").trim();
        let label: SentimentLabel = raw
            .parse()
            .map_err(|_| CliError::Data(format!("line {line}: unknown label {raw:?}")))?;
        out.push((rec.get(i_text).unwrap_or("").to_string(), label));
    }
    Ok(out)
}

pub fn run(ctx: &mut RunContext, args: &EvalLexiconArgs) -> Result<(), CliError> {
    apply_lexicon_args(ctx, &args.lexicon);
    let bytes = ctx.read_input(&args.labels)?;
    let items = read_labelled(&bytes).map_err(|e| e.context(&args.labels.display().to_string()))?;
    let lexicon = load_lexicon(ctx)?;
    let inputs = &ctx.config.inputs;

    let mut actual = Vec::with_capacity(items.len());
    let mut predicted = Vec::with_capacity(items.len());
    for (text, label) in &items {
        let compound = inputs.scorer.compound(text, &lexicon);
        predicted.push(classify(compound, inputs.pos_threshold, inputs.neg_threshold)?);
        actual.push(*label);
    }
    let metrics = classification_report(&actual, &predicted)?;
    let report = LexiconReport {
        schema_version: SCHEMA_VERSION,
        scorer: inputs.scorer.to_string(),
        lexicon: lexicon.name().to_string(),
        pos_threshold: inputs.pos_threshold,
        neg_threshold: inputs.neg_threshold,
        items: items.len(),
        metrics: &metrics,
    };
    let path = ctx.write_json(OUTPUT, &report)?;

    println!("{} scorer, {} labelled items", report.scorer, report.items);
    println!("  accuracy   {:6.2}", 100.0 * metrics.accuracy);
    println!("  precision  {:6.2}", 100.0 * metrics.precision);
    println!("  recall     {:6.2}", 100.0 * metrics.recall);
    println!("  f1         {:6.2}", 100.0 * metrics.f1);
    println!("  confusion (rows actual, columns predicted)");
    println!("  {:>10}{:>10}{:>10}{:>10}", "", "positive", "neutral", "negative");
    for (label, row) in SentimentLabel::ALL.iter().zip(&metrics.confusion.counts) {
        println!("  {:>10}{:>10}{:>10}{:>10}", label.as_str(), row[0], row[1], row[2]);
    }
    if metrics.zero_division {
        println!("  note: a class with no predictions or no support contributes 0");
    }
    println!("report -> {}", path.display());
    Ok(())
}
