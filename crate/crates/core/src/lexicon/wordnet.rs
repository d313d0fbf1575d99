//! Reader for the WordNet 3.x plain-text database (`data.*` and `index.*`).

use std::collections::HashMap;
use std::path::Path;

use super::{LexiconError, PartOfSpeech, RawSynset};

const FILES: [(&str, PartOfSpeech); 4] = [
    ("noun", PartOfSpeech::Noun),
    ("verb", PartOfSpeech::Verb),
    ("adj", PartOfSpeech::Adjective),
    ("adv", PartOfSpeech::Adverb),
];

type SenseOrder = HashMap<String, Vec<String>>;

pub(super) fn read_dir(dir: &Path) -> Result<(Vec<RawSynset>, SenseOrder), LexiconError> {
    let mut synsets = Vec::new();
    let mut order: SenseOrder = HashMap::new();
    let mut found = false;
    for (suffix, pos) in FILES {
        let data = dir.join(format!("data.{suffix}"));
        if !data.exists() {
            continue;
        }
        found = true;
        let text = read(&data)?;
        let name = format!("data.{suffix}");
        for (n, line) in text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let location = format!("{name}:{}", n + 1);
            synsets.push(parse_data_line(line, pos, &location)?);
        }
        let index = dir.join(format!("index.{suffix}"));
        if index.exists() {
            let text = read(&index)?;
            for line in text.lines() {
                if line.starts_with("  ") || line.trim().is_empty() {
                    continue;
                }
                if let Some((lemma, ids)) = parse_index_line(line, pos) {
                    order.entry(lemma).or_default().extend(ids);
                }
            }
        }
    }
    if !found {
        return Err(LexiconError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no data.noun/data.verb/data.adj/data.adv files",
            ),
        });
    }
    Ok((synsets, order))
}

fn read(path: &Path) -> Result<String, LexiconError> {
    let bytes = std::fs::read(path).map_err(|e| LexiconError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// Synset ids are the part-of-speech letter followed by the byte offset;
/// adjective satellites share the adjective namespace.
fn synset_id(pos_letter: &str, offset: &str) -> String {
    let letter = match pos_letter {
        "s" => "a",
        other => other,
    };
    format!("{letter}{offset}")
}

pub(super) fn parse_data_line(
    line: &str,
    file_pos: PartOfSpeech,
    location: &str,
) -> Result<RawSynset, LexiconError> {
    let malformed = |message: &str| LexiconError::Malformed {
        location: location.to_string(),
        message: message.to_string(),
    };
    let (fields, gloss) = match line.split_once('|') {
        Some((f, g)) => (f, g.trim()),
        None => (line, ""),
    };
    let mut tok = fields.split_whitespace();
    let offset = tok.next().ok_or_else(|| malformed("missing offset"))?;
    let _lex_filenum = tok.next().ok_or_else(|| malformed("missing lex_filenum"))?;
    let ss_type = tok.next().ok_or_else(|| malformed("missing ss_type"))?;
    let pos = PartOfSpeech::parse(ss_type).unwrap_or(file_pos);
    let w_cnt = tok
        .next()
        .and_then(|w| usize::from_str_radix(w, 16).ok())
        .ok_or_else(|| malformed("bad w_cnt"))?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = tok.next().ok_or_else(|| malformed("truncated word list"))?;
        tok.next().ok_or_else(|| malformed("missing lex_id"))?;
        // adjective syntactic markers like "(p)" are not part of the lemma
        let word = word.split('(').next().unwrap_or(word);
        let lemma = word.to_lowercase().replace('_', " ");
        if !lemmas.contains(&lemma) {
            lemmas.push(lemma);
        }
    }
    let p_cnt: usize = tok
        .next()
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| malformed("bad p_cnt"))?;
    let mut hypernyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = tok.next().ok_or_else(|| malformed("truncated pointer"))?;
        let target = tok.next().ok_or_else(|| malformed("truncated pointer"))?;
        let target_pos = tok.next().ok_or_else(|| malformed("truncated pointer"))?;
        tok.next().ok_or_else(|| malformed("truncated pointer"))?;
        if symbol == "@" || symbol == "@i" {
            hypernyms.push(synset_id(target_pos, target));
        }
    }
    Ok(RawSynset {
        id: synset_id(ss_type, offset),
        pos,
        lemmas,
        gloss: gloss.to_string(),
        hypernyms,
        location: location.to_string(),
    })
}

fn parse_index_line(line: &str, pos: PartOfSpeech) -> Option<(String, Vec<String>)> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    let lemma = tok.first()?.to_lowercase().replace('_', " ");
    let synset_cnt: usize = tok.get(2)?.parse().ok()?;
    if tok.len() < synset_cnt {
        return None;
    }
    let letter = pos.tag().to_string();
    let ids = tok[tok.len() - synset_cnt..]
        .iter()
        .map(|off| synset_id(&letter, off))
        .collect();
    Some((lemma, ids))
}
