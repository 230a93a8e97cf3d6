mod compare;
mod correlate;
mod diagnose;
mod eval_lexicon;
mod risk_return;
mod score;
mod train;

use crate::args::Command;
use crate::error::CliError;
use crate::run::RunContext;

pub fn dispatch(ctx: &mut RunContext, command: &Command) -> Result<(), CliError> {
    match command {
        Command::Score(a) => score::run(ctx, a),
        Command::EvalLexicon(a) => eval_lexicon::run(ctx, a),
        Command::Correlate(a) => correlate::run(ctx, a),
        Command::RiskReturn(a) => risk_return::run(ctx, a),
        Command::Train(a) => train::run_train(ctx, a),
        Command::Tune(a) => train::run_tune(ctx, a),
        Command::Compare(a) => compare::run(ctx, a),
        Command::Diagnose(a) => diagnose::run(ctx, a),
    }
}

/// `Some(x)` formatted for a text table, `-` otherwise.
pub(crate) fn cell(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.decimals$}"),
        Some(x) => x.to_string(),
        None => "-".into(),
    }
}
