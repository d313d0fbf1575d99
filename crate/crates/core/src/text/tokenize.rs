use std::fmt;

use serde::{Deserialize, Serialize};

/// Lowercase words of an identifier or phrase, with the raw source kept for display.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sentence {
    pub words: Vec<String>,
    pub source: String,
}

impl Sentence {
    pub fn new(source: impl Into<String>) -> Self {
        let source = source.into();
        Self {
            words: split_words(&source),
            source,
        }
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        Self {
            source: words.join(" "),
            words,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Words joined by single spaces; the canonical key of a flattened path.
    pub fn text(&self) -> String {
        self.words.join(" ")
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

pub fn tokenize(raw: &str) -> Sentence {
    Sentence::new(raw)
}

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Lower,
    Upper,
    Digit,
    Other,
}

fn class(c: char) -> Class {
    if c.is_lowercase() {
        Class::Lower
    } else if c.is_uppercase() {
        Class::Upper
    } else if c.is_numeric() {
        Class::Digit
    } else if c.is_alphabetic() {
        // caseless scripts behave like lowercase letters
        Class::Lower
    } else {
        Class::Other
    }
}

/// Splits on non-alphanumerics (whitespace, punctuation, `_`, `-`), on
/// letter/digit boundaries and on lowercase-to-uppercase transitions.
fn split_words(raw: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let mut prev = Class::Other;
    for c in raw.chars() {
        let cls = class(c);
        let boundary = matches!(
            (prev, cls),
            (_, Class::Other)
                | (Class::Lower, Class::Upper)
                | (Class::Digit, Class::Lower | Class::Upper)
                | (Class::Lower | Class::Upper, Class::Digit)
        );
        if boundary && !current.is_empty() {
            words.push(std::mem::take(&mut current).to_lowercase());
        }
        if cls != Class::Other {
            current.push(c);
        }
        prev = cls;
    }
    if !current.is_empty() {
        words.push(current.to_lowercase());
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        tokenize(s).words
    }

    #[test]
    fn camel_case_identifier() {
        assert_eq!(words("GetWeatherByZip"), ["get", "weather", "by", "zip"]);
    }

    #[test]
    fn underscores_and_hyphens() {
        assert_eq!(words("city_name"), ["city", "name"]);
        assert_eq!(words("zip-code"), ["zip", "code"]);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  _-. ").is_empty());
    }

    #[test]
    fn digits_split_from_letters() {
        assert_eq!(words("address2Line"), ["address", "2", "line"]);
        assert_eq!(words("zzqx1"), ["zzqx", "1"]);
    }

    #[test]
    fn uppercase_runs_stay_together() {
        assert_eq!(words("GetISBN"), ["get", "isbn"]);
        assert_eq!(words("HTTP status"), ["http", "status"]);
    }

    #[test]
    fn source_is_preserved() {
        let s = tokenize("GetWeather");
        assert_eq!(s.source, "GetWeather");
        assert_eq!(s.text(), "get weather");
    }
}
