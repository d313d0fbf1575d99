use super::{LexiconError, PartOfSpeech, RawSynset};

/// Parses the pipe-separated fixture format. `#` starts a comment line.
pub(super) fn parse(text: &str) -> Result<Vec<RawSynset>, LexiconError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let location = format!("line {}", n + 1);
        let malformed = |message: String| LexiconError::Malformed {
            location: location.clone(),
            message,
        };
        let fields: Vec<&str> = trimmed.splitn(5, '|').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(malformed(format!(
                "expected 5 '|'-separated fields, found {}",
                fields.len()
            )));
        }
        let id = fields[0];
        if id.is_empty() {
            return Err(malformed("empty synset id".into()));
        }
        let pos = PartOfSpeech::parse(fields[1])
            .ok_or_else(|| malformed(format!("unknown part of speech {:?}", fields[1])))?;
        let lemmas: Vec<String> = split_list(fields[2])
            .map(|l| l.to_lowercase().replace('_', " "))
            .collect();
        if lemmas.is_empty() {
            return Err(malformed(format!("synset {id} has no lemmas")));
        }
        out.push(RawSynset {
            id: id.to_string(),
            pos,
            lemmas,
            gloss: fields[4].to_string(),
            hypernyms: split_list(fields[3]).map(str::to_string).collect(),
            location,
        });
    }
    Ok(out)
}

fn split_list(field: &str) -> impl Iterator<Item = &str> {
    field.split(',').map(str::trim).filter(|s| !s.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_line_of_bad_entry() {
        let err = parse("a | n | a | | ok\n\nb | n | b\n").err().unwrap();
        match err {
            LexiconError::Malformed { location, .. } => assert_eq!(location, "line 3"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn gloss_may_contain_pipes() {
        let raw = parse("a | noun | A,B | | one | two\n").unwrap();
        assert_eq!(raw[0].gloss, "one | two");
        assert_eq!(raw[0].lemmas, ["a", "b"]);
        assert_eq!(raw[0].pos, PartOfSpeech::Noun);
    }

    #[test]
    fn unknown_pos_is_malformed() {
        assert!(parse("a | x | a | | g\n").is_err());
    }
}
