//! Compares the scorer against outputs of the reference Python implementation.

use std::path::PathBuf;

use gru_vader_core::sentiment::{load_lexicon_with, score_vader, DuplicatePolicy, Lexicon};

const TOL: f64 = 1e-12;

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn vader_lexicon() -> Lexicon {
    load_lexicon_with(
        &workspace_root().join("data/lexicons/vader_lexicon.txt"),
        DuplicatePolicy::LastWins,
    )
    .expect("bundled lexicon")
}

#[test]
fn matches_reference_outputs() {
    let lex = vader_lexicon();
    let fixture = include_str!("fixtures/vader_reference.tsv");
    let mut checked = 0;
    let mut failures = Vec::new();
    for (i, line) in fixture.lines().enumerate() {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 5, "fixture line {}", i + 1);
        let expected: Vec<f64> = cols[1..].iter().map(|c| c.parse().unwrap()).collect();
        let s = score_vader(cols[0], &lex);
        let got = [s.compound, s.pos, s.neg, s.neu];
        if got.iter().zip(&expected).any(|(g, e)| (g - e).abs() > TOL) {
            failures.push(format!("{:?}: got {got:?}, expected {expected:?}", cols[0]));
        }
        checked += 1;
    }
    assert!(checked > 600);
    assert!(failures.is_empty(), "{} mismatches:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn bundled_lexicon_shape() {
    let lex = vader_lexicon();
    assert_eq!(lex.entries_read(), 7517);
    assert_eq!(lex.len(), 7503);
    assert_eq!(lex.get("good"), Some(1.9));
    let strict = gru_vader_core::sentiment::load_lexicon(
        &workspace_root().join("data/lexicons/vader_lexicon.txt"),
    );
    assert!(strict.is_err());
}
