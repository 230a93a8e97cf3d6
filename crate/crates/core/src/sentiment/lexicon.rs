use std::collections::HashMap;
use std::path::Path;

use super::SentimentError;

/// What to do when a token appears on more than one line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DuplicatePolicy {
    /// Fail with [`SentimentError::Duplicate`].
    #[default]
    Reject,
    /// Keep the later line's valence. The published VADER lexicon repeats 14
    /// tokens and its reference loader behaves this way.
    LastWins,
}

/// Token → valence dictionary.
///
/// Tokens are stored as written in the file; scorers look them up with the
/// lower-cased text token.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    name: String,
    entries: HashMap<String, f64>,
    entries_read: usize,
    duplicates: Vec<String>,
}

impl Lexicon {
    pub fn from_entries<I, S>(name: &str, entries: I) -> Result<Self, SentimentError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut lex = Self::empty(name);
        for (i, (token, valence)) in entries.into_iter().enumerate() {
            lex.insert(token.into(), valence, i + 1, DuplicatePolicy::Reject)?;
        }
        Ok(lex)
    }

    fn empty(name: &str) -> Self {
        Self {
            name: name.to_string(),
            entries: HashMap::new(),
            entries_read: 0,
            duplicates: Vec::new(),
        }
    }

    fn insert(
        &mut self,
        token: String,
        valence: f64,
        line: usize,
        policy: DuplicatePolicy,
    ) -> Result<(), SentimentError> {
        if token.is_empty() {
            return Err(SentimentError::LexiconParse {
                line,
                msg: "empty token".into(),
            });
        }
        self.entries_read += 1;
        if self.entries.insert(token.clone(), valence).is_some() {
            match policy {
                DuplicatePolicy::Reject => return Err(SentimentError::Duplicate { line, token }),
                DuplicatePolicy::LastWins => self.duplicates.push(token),
            }
        }
        Ok(())
    }

    /// Parses `token<TAB>valence[<TAB>ignored...]` lines. Blank lines are skipped.
    pub fn parse(name: &str, text: &str, policy: DuplicatePolicy) -> Result<Self, SentimentError> {
        let mut lex = Self::empty(name);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let token = cols.next().unwrap_or_default();
            let valence = cols
                .next()
                .ok_or_else(|| SentimentError::LexiconParse {
                    line: line_no,
                    msg: "expected token<TAB>valence".into(),
                })?
                .trim();
            let valence: f64 = valence.parse().map_err(|_| SentimentError::LexiconParse {
                line: line_no,
                msg: format!("valence {valence:?} is not a number"),
            })?;
            if !valence.is_finite() {
                return Err(SentimentError::LexiconParse {
                    line: line_no,
                    msg: "valence must be finite".into(),
                });
            }
            lex.insert(token.to_string(), valence, line_no, policy)?;
        }
        if lex.entries_read == 0 {
            log::warn!("lexicon {name} is empty");
        }
        Ok(lex)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    /// Distinct tokens.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Non-blank lines parsed, duplicates included.
    pub fn entries_read(&self) -> usize {
        self.entries_read
    }

    /// Tokens that were overridden under [`DuplicatePolicy::LastWins`], in file order.
    pub fn duplicates(&self) -> &[String] {
        &self.duplicates
    }
}

/// Loads a lexicon file, rejecting duplicate tokens.
pub fn load_lexicon(path: &Path) -> Result<Lexicon, SentimentError> {
    load_lexicon_with(path, DuplicatePolicy::Reject)
}

pub fn load_lexicon_with(path: &Path, policy: DuplicatePolicy) -> Result<Lexicon, SentimentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SentimentError::Io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".into());
    Lexicon::parse(&name, &text, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vader_style_lines() {
        let lex = Lexicon::parse("t", "good\t1.9\t0.9434\t[2, 1]\nbad\t-2.5\t0.5\t[]\n", DuplicatePolicy::Reject).unwrap();
        assert_eq!(lex.get("good"), Some(1.9));
        assert_eq!(lex.get("bad"), Some(-2.5));
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn parses_afinn_style_lines() {
        let lex = Lexicon::parse("afinn", "abandon\t-2\ngood\t3\n", DuplicatePolicy::Reject).unwrap();
        assert_eq!(lex.get("good"), Some(3.0));
    }

    #[test]
    fn empty_text_gives_empty_lexicon() {
        let lex = Lexicon::parse("e", "", DuplicatePolicy::Reject).unwrap();
        assert!(lex.is_empty());
        assert_eq!(lex.entries_read(), 0);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = Lexicon::parse("m", "good\t1.9\nbroken line\n", DuplicatePolicy::Reject).unwrap_err();
        assert!(matches!(err, SentimentError::LexiconParse { line: 2, .. }), "{err}");
        let err = Lexicon::parse("m", "good\tx\n", DuplicatePolicy::Reject).unwrap_err();
        assert!(matches!(err, SentimentError::LexiconParse { line: 1, .. }));
    }

    #[test]
    fn duplicates_follow_policy() {
        let text = "ok\t1.6\nfine\t0.8\nok\t1.2\n";
        let err = Lexicon::parse("d", text, DuplicatePolicy::Reject).unwrap_err();
        assert!(matches!(err, SentimentError::Duplicate { line: 3, .. }));
        let lex = Lexicon::parse("d", text, DuplicatePolicy::LastWins).unwrap();
        assert_eq!(lex.get("ok"), Some(1.2));
        assert_eq!(lex.entries_read(), 3);
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.duplicates(), &["ok".to_string()]);
    }
}
