use super::lexicon::Lexicon;
use super::tokenize::tokenize;

/// Sum of the valences of case-folded tokens found in the lexicon.
pub fn score_additive(text: &str, lexicon: &Lexicon) -> f64 {
    tokenize(text)
        .into_iter()
        .filter_map(|t| lexicon.get(&t.to_lowercase()))
        .sum()
}
