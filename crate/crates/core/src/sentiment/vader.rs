//! VADER-style rule-based valence scoring.
//!
//! Constants and rule order follow the reference VADER implementation. The
//! contrastive "but" rule reweights by token position.

use super::lexicon::Lexicon;
use super::tokenize::{is_all_caps, tokenize};
use super::SentimentScore;

/// Booster/dampener increment.
pub const BOOSTER_INCREMENT: f64 = 0.293;
/// Extra valence for an ALL-CAPS sentiment word in mixed-case text.
pub const CAPS_INCREMENT: f64 = 0.733;
/// Multiplier applied by a negation in the three-token lookback window.
pub const NEGATION_SCALAR: f64 = -0.74;
pub const EXCLAMATION_INCREMENT: f64 = 0.292;
pub const MAX_EXCLAMATIONS: usize = 4;
pub const QUESTION_INCREMENT: f64 = 0.18;
pub const QUESTION_CAP: f64 = 0.96;
pub const BUT_BEFORE_WEIGHT: f64 = 0.5;
pub const BUT_AFTER_WEIGHT: f64 = 1.5;
/// Normalization constant in `s / sqrt(s² + α)`.
pub const NORMALIZATION_ALPHA: f64 = 15.0;

const NEGATIONS: &[&str] = &[
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't", "aren't",
    "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt", "havent",
    "isnt", "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't", "isn't",
    "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent", "oughtn't", "shan't",
    "shouldn't", "uh-uh", "wasn't", "weren't", "without", "wont", "wouldnt", "won't", "wouldn't",
    "rarely", "seldom", "despite",
];

const BOOSTERS_UP: &[&str] = &[
    "absolutely", "amazingly", "awfully", "completely", "considerable", "considerably",
    "decidedly", "deeply", "effing", "enormous", "enormously", "entirely", "especially",
    "exceptional", "exceptionally", "extreme", "extremely", "fabulously", "flipping", "flippin",
    "frackin", "fracking", "fricking", "frickin", "frigging", "friggin", "fully", "fuckin",
    "fucking", "fuggin", "fugging", "greatly", "hella", "highly", "hugely", "incredible",
    "incredibly", "intensely", "major", "majorly", "more", "most", "particularly", "purely",
    "quite", "really", "remarkably", "so", "substantially", "thoroughly", "total", "totally",
    "tremendous", "tremendously", "uber", "unbelievably", "unusually", "utter", "utterly", "very",
];

const BOOSTERS_DOWN: &[&str] = &[
    "almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof", "kind-of", "less",
    "little", "marginal", "marginally", "occasional", "occasionally", "partly", "scarce",
    "scarcely", "slight", "slightly", "somewhat", "sort of", "sorta", "sortof", "sort-of",
];

const SPECIAL_CASES: &[(&str, f64)] = &[
    ("the shit", 3.0),
    ("the bomb", 3.0),
    ("bad ass", 1.5),
    ("badass", 1.5),
    ("bus stop", 0.0),
    ("yeah right", -2.0),
    ("kiss of death", -1.5),
    ("to die for", 3.0),
];

fn booster(word_lower: &str) -> Option<f64> {
    if BOOSTERS_UP.contains(&word_lower) {
        Some(BOOSTER_INCREMENT)
    } else if BOOSTERS_DOWN.contains(&word_lower) {
        Some(-BOOSTER_INCREMENT)
    } else {
        None
    }
}

fn special_case(phrase: &str) -> Option<f64> {
    SPECIAL_CASES.iter().find(|(p, _)| *p == phrase).map(|&(_, v)| v)
}

fn is_negation(word_lower: &str) -> bool {
    NEGATIONS.contains(&word_lower) || word_lower.contains("n't")
}

/// `s / sqrt(s² + α)` clamped to `[-1, 1]`.
pub fn normalize(score: f64, alpha: f64) -> f64 {
    (score / (score * score + alpha).sqrt()).clamp(-1.0, 1.0)
}

struct Sentence<'a> {
    words: Vec<&'a str>,
    lower: Vec<String>,
    mixed_caps: bool,
}

impl<'a> Sentence<'a> {
    fn new(text: &'a str) -> Self {
        let words = tokenize(text);
        let lower = words.iter().map(|w| w.to_lowercase()).collect();
        let caps = words.iter().filter(|w| is_all_caps(w)).count();
        let mixed_caps = caps > 0 && caps < words.len();
        Self {
            words,
            lower,
            mixed_caps,
        }
    }
}

/// Full VADER-style score of `text`.
pub fn score_vader(text: &str, lexicon: &Lexicon) -> SentimentScore {
    let sentence = Sentence::new(text);
    let n = sentence.words.len();
    let mut sentiments = Vec::with_capacity(n);
    for i in 0..n {
        let lw = sentence.lower[i].as_str();
        if booster(lw).is_some() || (lw == "kind" && i + 1 < n && sentence.lower[i + 1] == "of") {
            sentiments.push(0.0);
            continue;
        }
        sentiments.push(token_valence(&sentence, lexicon, i));
    }
    apply_but(&sentence.lower, &mut sentiments);
    aggregate(&sentiments, text)
}

fn token_valence(s: &Sentence<'_>, lexicon: &Lexicon, i: usize) -> f64 {
    let lw = s.lower[i].as_str();
    let Some(base) = lexicon.get(lw) else {
        return 0.0;
    };
    let n = s.words.len();
    let mut valence = base;

    // "no" directly before another lexicon word acts as a negator, not a sentiment word
    if lw == "no" && i + 1 < n && lexicon.contains(&s.lower[i + 1]) {
        valence = 0.0;
    }
    if (i > 0 && s.lower[i - 1] == "no")
        || (i > 1 && s.lower[i - 2] == "no")
        || (i > 2 && s.lower[i - 3] == "no" && (s.lower[i - 1] == "or" || s.lower[i - 1] == "nor"))
    {
        valence = base * NEGATION_SCALAR;
    }

    if is_all_caps(s.words[i]) && s.mixed_caps {
        if valence > 0.0 {
            valence += CAPS_INCREMENT;
        } else {
            valence -= CAPS_INCREMENT;
        }
    }

    for start in 0..3 {
        if i > start && !lexicon.contains(&s.lower[i - (start + 1)]) {
            let mut scalar = scalar_inc_dec(s.words[i - (start + 1)], &s.lower[i - (start + 1)], valence, s.mixed_caps);
            if start == 1 && scalar != 0.0 {
                scalar *= 0.95;
            }
            if start == 2 && scalar != 0.0 {
                scalar *= 0.9;
            }
            valence += scalar;
            valence = negation_check(valence, &s.lower, start, i);
            if start == 2 {
                valence = special_idioms_check(valence, &s.lower, i);
            }
        }
    }

    least_check(valence, &s.lower, lexicon, i)
}

fn scalar_inc_dec(word: &str, word_lower: &str, valence: f64, mixed_caps: bool) -> f64 {
    let Some(mut scalar) = booster(word_lower) else {
        return 0.0;
    };
    if valence < 0.0 {
        scalar *= -1.0;
    }
    if is_all_caps(word) && mixed_caps {
        if valence > 0.0 {
            scalar += CAPS_INCREMENT;
        } else {
            scalar -= CAPS_INCREMENT;
        }
    }
    scalar
}

fn negation_check(valence: f64, lower: &[String], start: usize, i: usize) -> f64 {
    let w = |k: usize| lower[i - k].as_str();
    match start {
        0 => {
            if is_negation(w(1)) {
                return valence * NEGATION_SCALAR;
            }
        }
        1 => {
            if w(2) == "never" && (w(1) == "so" || w(1) == "this") {
                return valence * 1.25;
            } else if w(2) == "without" && w(1) == "doubt" {
                return valence;
            } else if is_negation(w(2)) {
                return valence * NEGATION_SCALAR;
            }
        }
        _ => {
            if (w(3) == "never" && (w(2) == "so" || w(2) == "this")) || (w(1) == "so" || w(1) == "this") {
                return valence * 1.25;
            } else if w(3) == "without" && (w(2) == "doubt" || w(1) == "doubt") {
                return valence;
            } else if is_negation(w(3)) {
                return valence * NEGATION_SCALAR;
            }
        }
    }
    valence
}

fn special_idioms_check(mut valence: f64, lower: &[String], i: usize) -> f64 {
    let w = |k: usize| lower[i - k].as_str();
    let one_zero = format!("{} {}", w(1), w(0));
    let two_one_zero = format!("{} {} {}", w(2), w(1), w(0));
    let two_one = format!("{} {}", w(2), w(1));
    let three_two_one = format!("{} {} {}", w(3), w(2), w(1));
    let three_two = format!("{} {}", w(3), w(2));

    for seq in [&one_zero, &two_one_zero, &two_one, &three_two_one, &three_two] {
        if let Some(v) = special_case(seq) {
            valence = v;
            break;
        }
    }
    if lower.len() > i + 1 {
        if let Some(v) = special_case(&format!("{} {}", w(0), lower[i + 1])) {
            valence = v;
        }
    }
    if lower.len() > i + 2 {
        if let Some(v) = special_case(&format!("{} {} {}", w(0), lower[i + 1], lower[i + 2])) {
            valence = v;
        }
    }
    // multi-word dampeners such as "kind of" preceding the word
    for gram in [&three_two_one, &three_two, &two_one] {
        if let Some(b) = booster(gram) {
            valence += b;
        }
    }
    valence
}

fn least_check(valence: f64, lower: &[String], lexicon: &Lexicon, i: usize) -> f64 {
    if i > 1 && !lexicon.contains(&lower[i - 1]) && lower[i - 1] == "least" {
        if lower[i - 2] != "at" && lower[i - 2] != "very" {
            return valence * NEGATION_SCALAR;
        }
    } else if i > 0 && !lexicon.contains(&lower[i - 1]) && lower[i - 1] == "least" {
        return valence * NEGATION_SCALAR;
    }
    valence
}

fn apply_but(lower: &[String], sentiments: &mut [f64]) {
    if let Some(bi) = lower.iter().position(|w| w == "but") {
        for (si, s) in sentiments.iter_mut().enumerate() {
            if si < bi {
                *s *= BUT_BEFORE_WEIGHT;
            } else if si > bi {
                *s *= BUT_AFTER_WEIGHT;
            }
        }
    }
}

/// Punctuation emphasis from '!' (capped) and repeated '?'.
pub fn punctuation_emphasis(text: &str) -> f64 {
    let ep = text.matches('!').count().min(MAX_EXCLAMATIONS) as f64 * EXCLAMATION_INCREMENT;
    let qm_count = text.matches('?').count();
    let qm = match qm_count {
        0 | 1 => 0.0,
        2 | 3 => qm_count as f64 * QUESTION_INCREMENT,
        _ => QUESTION_CAP,
    };
    ep + qm
}

fn aggregate(sentiments: &[f64], text: &str) -> SentimentScore {
    if sentiments.is_empty() {
        return SentimentScore::neutral();
    }
    let mut sum: f64 = sentiments.iter().sum();
    let emphasis = punctuation_emphasis(text);
    if sum > 0.0 {
        sum += emphasis;
    } else if sum < 0.0 {
        sum -= emphasis;
    }
    let compound = normalize(sum, NORMALIZATION_ALPHA);

    let mut pos_sum = 0.0;
    let mut neg_sum = 0.0;
    let mut neu_count = 0usize;
    for &s in sentiments {
        if s > 0.0 {
            pos_sum += s + 1.0;
        }
        if s < 0.0 {
            neg_sum += s - 1.0;
        }
        if s == 0.0 {
            neu_count += 1;
        }
    }
    if pos_sum > neg_sum.abs() {
        pos_sum += emphasis;
    } else if pos_sum < neg_sum.abs() {
        neg_sum -= emphasis;
    }
    let total = pos_sum + neg_sum.abs() + neu_count as f64;
    SentimentScore {
        pos: (pos_sum / total).abs(),
        neg: (neg_sum / total).abs(),
        neu: (neu_count as f64 / total).abs(),
        compound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentiment::DuplicatePolicy;

    fn lex() -> Lexicon {
        Lexicon::parse(
            "mini",
            "good\t1.9\nbad\t-2.5\ngreat\t3.1\nno\t-1.2\nlove\t3.2\n",
            DuplicatePolicy::Reject,
        )
        .unwrap()
    }

    #[test]
    fn empty_and_hitless_text() {
        let s = score_vader("", &lex());
        assert_eq!(s.compound, 0.0);
        assert_eq!(s.neu, 1.0);
        assert_eq!(score_vader("the the the", &lex()).compound, 0.0);
    }

    #[test]
    fn single_word() {
        let s = score_vader("good", &lex());
        assert!((s.compound - 1.9 / (1.9f64 * 1.9 + 15.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.pos, 1.0);
    }

    #[test]
    fn negation_flips_sign() {
        assert!(score_vader("not good", &lex()).compound < 0.0);
        assert!(score_vader("not bad", &lex()).compound > 0.0);
        assert!(score_vader("never really great", &lex()).compound < 0.0);
    }

    #[test]
    fn caps_emphasis_only_in_mixed_case() {
        let plain = score_vader("good stock", &lex()).compound;
        let caps = score_vader("GOOD stock", &lex()).compound;
        let all_caps = score_vader("GOOD STOCK", &lex()).compound;
        assert!(caps > plain);
        assert_eq!(all_caps, plain);
    }

    #[test]
    fn but_reweights_clauses() {
        let s = score_vader("good but bad", &lex());
        // 1.9·0.5 + (−2.5)·1.5
        let expected = normalize(0.95 - 3.75, NORMALIZATION_ALPHA);
        assert!((s.compound - expected).abs() < 1e-15);
    }

    #[test]
    fn question_marks() {
        assert_eq!(punctuation_emphasis("why?"), 0.0);
        assert!((punctuation_emphasis("why??") - 0.36).abs() < 1e-15);
        assert_eq!(punctuation_emphasis("why?????"), QUESTION_CAP);
        assert!((punctuation_emphasis("!!!!!!") - 4.0 * 0.292).abs() < 1e-15);
    }
}
