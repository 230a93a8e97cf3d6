use std::path::PathBuf;
use std::sync::OnceLock;

use gru_vader_core::sentiment::{
    load_lexicon, load_lexicon_with, score_additive, score_vader, tokenize, DuplicatePolicy,
    Lexicon,
};
use proptest::prelude::*;

fn lexicons() -> &'static (Lexicon, Lexicon) {
    static LEX: OnceLock<(Lexicon, Lexicon)> = OnceLock::new();
    LEX.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/lexicons");
        let vader = load_lexicon_with(&dir.join("vader_lexicon.txt"), DuplicatePolicy::LastWins).unwrap();
        let afinn = load_lexicon(&dir.join("AFINN-en-165.txt")).unwrap();
        (vader, afinn)
    })
}

const VOCAB: &[&str] = &[
    "good", "bad", "great", "not", "never", "very", "kinda", "but", "GREAT", "BAD", "stock",
    "TSLA", "moon", "crash", "love", "hate", "no", "least", "at", "without", "doubt", "so",
    "this", "kind", "of", "the", "bomb", ":)", ":(", "!", "?", "win", "fail", "isn't", "hardly",
    "extremely", "nor", "or", "lol", "sucks",
];

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec((prop::sample::select(VOCAB), prop::sample::select(&["", "", "!", "?", ",", "!!"][..])), 0..14)
        .prop_map(|ws| ws.into_iter().map(|(w, p)| format!("{w}{p}")).collect::<Vec<_>>().join(" "))
}

fn positive_words() -> Vec<&'static str> {
    let (vader, _) = lexicons();
    VOCAB
        .iter()
        .copied()
        .filter(|w| w.chars().all(|c| c.is_ascii_lowercase()) && vader.get(w).is_some_and(|v| v > 0.0))
        .filter(|w| *w != "no")
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn score_ranges(text in sentence()) {
        let s = score_vader(&text, &lexicons().0);
        prop_assert!((-1.0..=1.0).contains(&s.compound));
        prop_assert!((s.pos + s.neg + s.neu - 1.0).abs() < 1e-9, "{text:?} -> {s:?}");
        for share in [s.pos, s.neg, s.neu] {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&share));
        }
    }

    #[test]
    fn deterministic(text in sentence()) {
        let a = score_vader(&text, &lexicons().0);
        let b = score_vader(&text, &lexicons().0);
        prop_assert_eq!(a.compound.to_bits(), b.compound.to_bits());
        prop_assert_eq!(a.pos.to_bits(), b.pos.to_bits());
    }

    #[test]
    fn exclamations_amplify(text in sentence(), separate in any::<bool>()) {
        let lex = &lexicons().0;
        // "ok!" stays one token under the reference tokenizer, so gluing '!'
        // onto a short trailing word changes the lookup rather than the emphasis
        let last_is_long = tokenize(&text).last().is_some_and(|w| w.chars().count() > 2);
        let bang = if separate || !last_is_long { " !" } else { "!" };
        let base = score_vader(&text, lex).compound;
        let mut prev = base;
        let mut t = text.clone();
        for _ in 0..3 {
            t.push_str(bang);
            let c = score_vader(&t, lex).compound;
            if base > 0.0 {
                prop_assert!(c >= prev, "{t:?}: {c} < {prev}");
            } else if base < 0.0 {
                prop_assert!(c <= prev, "{t:?}: {c} > {prev}");
            }
            prev = c;
        }
    }

    #[test]
    fn additive_is_token_sum(text in sentence()) {
        let lex = &lexicons().1;
        let whole = score_additive(&text, lex);
        let parts: f64 = tokenize(&text).iter().map(|t| score_additive(t, lex)).sum();
        prop_assert!((whole - parts).abs() < 1e-12);
    }
}

#[test]
fn negation_flips_every_positive_word() {
    let lex = &lexicons().0;
    let words = positive_words();
    assert!(words.len() >= 5);
    for w in words {
        let plain = score_vader(w, lex).compound;
        let negated = score_vader(&format!("not {w}"), lex).compound;
        assert!(plain > 0.0 && negated < 0.0, "{w}: {plain} vs {negated}");
    }
}

#[test]
fn additive_examples() {
    let afinn = &lexicons().1;
    assert_eq!(afinn.get("good"), Some(3.0));
    assert_eq!(score_additive("good good", afinn), 6.0);
    assert_eq!(score_additive("", afinn), 0.0);
    assert_eq!(score_additive("xyzzy qwerty", afinn), 0.0);
}

#[test]
fn good_matches_closed_form() {
    let c = score_vader("good", &lexicons().0).compound;
    assert!((c - 1.9 / (1.9f64 * 1.9 + 15.0).sqrt()).abs() < 1e-15);
    assert!((c - 0.4404).abs() < 5e-5);
}
