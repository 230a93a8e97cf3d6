/// ASCII punctuation, the same set as Python's `string.punctuation`.
fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
}

/// Strips leading/trailing punctuation from a word unless that would leave
/// two characters or fewer, in which case the token is most likely an
/// emoticon (`:)`, `:-(`) or bare punctuation and is kept verbatim.
fn strip_punct_if_word(token: &str) -> &str {
    let stripped = token.trim_matches(is_punct);
    if stripped.chars().count() <= 2 {
        token
    } else {
        stripped
    }
}

/// Whitespace tokenization with punctuation trimming. Case and contractions
/// are preserved; punctuation marks themselves are counted from the raw text
/// by the scorer, not emitted as tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().map(strip_punct_if_word).collect()
}

/// Drops URLs and `@mentions` (whitespace-delimited) from a tweet.
pub fn strip_urls_and_mentions(text: &str) -> String {
    text.split_whitespace()
        .filter(|w| {
            let lw = w.to_ascii_lowercase();
            !(w.starts_with('@')
                || lw.starts_with("http://")
                || lw.starts_with("https://")
                || lw.starts_with("www."))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `str.isupper()` semantics: at least one cased character and no lowercase ones.
pub(crate) fn is_all_caps(word: &str) -> bool {
    let mut cased = false;
    for c in word.chars() {
        if c.is_lowercase() {
            return false;
        }
        if c.is_uppercase() {
            cased = true;
        }
    }
    cased
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \t\n ").is_empty());
    }

    #[test]
    fn trailing_punctuation_is_stripped_case_kept() {
        assert_eq!(tokenize("GREAT stock!!"), vec!["GREAT", "stock"]);
    }

    #[test]
    fn emoticons_and_contractions_survive() {
        assert_eq!(tokenize(":) wins"), vec![":)", "wins"]);
        assert_eq!(tokenize("isn't :-( (great)"), vec!["isn't", ":-(", "great"]);
        // short words keep their punctuation, as in the reference tokenizer
        assert_eq!(tokenize("ok!"), vec!["ok!"]);
    }

    #[test]
    fn caps_detection() {
        assert!(is_all_caps("GREAT"));
        assert!(is_all_caps("TSLA!"));
        assert!(!is_all_caps("Great"));
        assert!(!is_all_caps(":)"));
        assert!(!is_all_caps("123"));
    }

    #[test]
    fn drops_links_and_mentions() {
        assert_eq!(
            strip_urls_and_mentions("@elon to the moon https://t.co/x www.tesla.com now!"),
            "to the moon now!"
        );
    }
}
