//! Read-only lexical taxonomy: sense lookup, taxonomy depth, Wu-Palmer
//! similarity and gloss-overlap word sense disambiguation.
//!
//! Two on-disk formats are understood. The WordNet 3.x database layout
//! (`data.noun`, `index.noun`, ...) is read from a directory; a single file is
//! read as a fixture lexicon with one synset per line:
//!
//! ```text
//! id | pos | lemma,lemma | hypernymId,... | gloss text
//! ```

mod fixture;
mod lesk;
pub mod stopwords;
mod wordnet;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use lesk::{gloss_overlap, ContextWindow};

/// Fixture lexicon bundled with the crate; covers service-description vocabulary.
const BUILTIN_LEXICON: &str = include_str!("../../data/lexicon.txt");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("cannot read lexicon source {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon entry at {location}: {message}")]
    Malformed { location: String, message: String },
    #[error("no synsets")]
    Empty,
    #[error("cyclic hypernym chain through synset {0}")]
    Cycle(String),
    #[error("duplicate synset id {0}")]
    DuplicateId(String),
    #[error("detached synset {0}")]
    Detached(String),
    #[error("synset {0} does not belong to this lexicon")]
    UnknownSynset(u32),
    #[error("no common ancestor between {0} and {1}")]
    NoCommonAncestor(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PartOfSpeech {
    pub fn parse(tag: &str) -> Option<Self> {
        match tag.trim().to_ascii_lowercase().as_str() {
            "n" | "noun" => Some(Self::Noun),
            "v" | "verb" => Some(Self::Verb),
            "a" | "s" | "adj" | "adjective" => Some(Self::Adjective),
            "r" | "adv" | "adverb" => Some(Self::Adverb),
            _ => None,
        }
    }

    pub fn tag(self) -> char {
        match self {
            Self::Noun => 'n',
            Self::Verb => 'v',
            Self::Adjective => 'a',
            Self::Adverb => 'r',
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Noun => "noun",
            Self::Verb => "verb",
            Self::Adjective => "adjective",
            Self::Adverb => "adverb",
        };
        f.write_str(name)
    }
}

/// Handle of a synset inside one [`Lexicon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId(u32);

impl SynsetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    /// Opaque identifier as written in the source (WordNet ids are `n02084071`).
    pub id: String,
    pub pos: PartOfSpeech,
    pub lemmas: Vec<String>,
    pub gloss: String,
    /// Hypernym ids as declared, including any that did not resolve.
    pub hypernym_ids: Vec<String>,
}

/// Raw record produced by the format readers before linking.
pub(crate) struct RawSynset {
    pub id: String,
    pub pos: PartOfSpeech,
    pub lemmas: Vec<String>,
    pub gloss: String,
    pub hypernyms: Vec<String>,
    pub location: String,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    synsets: Vec<Synset>,
    hypernyms: Vec<Vec<SynsetId>>,
    by_id: HashMap<String, SynsetId>,
    lemma_index: HashMap<String, Vec<SynsetId>>,
    roots: HashMap<PartOfSpeech, Vec<SynsetId>>,
    depths: Vec<Option<u32>>,
}

impl Lexicon {
    /// Lexicon with no entries; every word falls back to syntactic similarity.
    pub fn empty() -> Self {
        Self {
            synsets: Vec::new(),
            hypernyms: Vec::new(),
            by_id: HashMap::new(),
            lemma_index: HashMap::new(),
            roots: HashMap::new(),
            depths: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        Self::from_fixture_str(BUILTIN_LEXICON).expect("bundled lexicon is well-formed")
    }

    /// Loads a WordNet database directory or a fixture-format file.
    pub fn load(source: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let source = source.as_ref();
        let meta = std::fs::metadata(source).map_err(|e| LexiconError::Io {
            path: source.to_path_buf(),
            source: e,
        })?;
        if meta.is_dir() {
            Self::from_wordnet_dir(source)
        } else {
            let text = std::fs::read_to_string(source).map_err(|e| LexiconError::Io {
                path: source.to_path_buf(),
                source: e,
            })?;
            Self::from_fixture_str(&text)
        }
    }

    pub fn from_fixture_str(text: &str) -> Result<Self, LexiconError> {
        let raw = fixture::parse(text)?;
        Self::link(raw, None)
    }

    pub fn from_wordnet_dir(dir: &Path) -> Result<Self, LexiconError> {
        let (raw, order) = wordnet::read_dir(dir)?;
        Self::link(raw, Some(order))
    }

    /// Resolves hypernym references, builds the lemma index and precomputes depths.
    ///
    /// `sense_order` optionally fixes the per-lemma sense order (WordNet's
    /// `index.*` files); otherwise senses keep source order.
    fn link(
        raw: Vec<RawSynset>,
        sense_order: Option<HashMap<String, Vec<String>>>,
    ) -> Result<Self, LexiconError> {
        if raw.is_empty() {
            return Err(LexiconError::Empty);
        }
        let mut by_id = HashMap::with_capacity(raw.len());
        for (i, r) in raw.iter().enumerate() {
            if by_id.insert(r.id.clone(), SynsetId(i as u32)).is_some() {
                return Err(LexiconError::Malformed {
                    location: r.location.clone(),
                    message: format!("duplicate synset id {}", r.id),
                });
            }
        }

        let mut synsets = Vec::with_capacity(raw.len());
        let mut hypernyms = Vec::with_capacity(raw.len());
        let mut lemma_index: HashMap<String, Vec<SynsetId>> = HashMap::new();
        for (i, r) in raw.into_iter().enumerate() {
            let id = SynsetId(i as u32);
            let mut links: Vec<SynsetId> = r
                .hypernyms
                .iter()
                .filter_map(|h| by_id.get(h).copied())
                .collect();
            links.dedup();
            hypernyms.push(links);
            for lemma in &r.lemmas {
                let senses = lemma_index.entry(lemma.clone()).or_default();
                if !senses.contains(&id) {
                    senses.push(id);
                }
            }
            synsets.push(Synset {
                id: r.id,
                pos: r.pos,
                lemmas: r.lemmas,
                gloss: r.gloss,
                hypernym_ids: r.hypernyms,
            });
        }

        if let Some(order) = sense_order {
            for (lemma, ids) in order {
                let ordered: Vec<SynsetId> =
                    ids.iter().filter_map(|id| by_id.get(id).copied()).collect();
                if let Some(senses) = lemma_index.get_mut(&lemma) {
                    let rest: Vec<SynsetId> = senses
                        .iter()
                        .copied()
                        .filter(|s| !ordered.contains(s))
                        .collect();
                    *senses = ordered
                        .into_iter()
                        .filter(|s| synsets[s.index()].lemmas.contains(&lemma))
                        .chain(rest)
                        .collect();
                }
            }
        }

        check_acyclic(&synsets, &hypernyms)?;

        let depths = compute_depths(&synsets, &hypernyms);
        let mut roots: HashMap<PartOfSpeech, Vec<SynsetId>> = HashMap::new();
        for (i, s) in synsets.iter().enumerate() {
            if s.hypernym_ids.is_empty() {
                roots.entry(s.pos).or_default().push(SynsetId(i as u32));
            }
        }

        Ok(Self {
            synsets,
            hypernyms,
            by_id,
            lemma_index,
            roots,
            depths,
        })
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: SynsetId) -> &Synset {
        &self.synsets[id.index()]
    }

    pub fn find(&self, id: &str) -> Option<SynsetId> {
        self.by_id.get(id).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = SynsetId> + '_ {
        (0..self.synsets.len() as u32).map(SynsetId)
    }

    pub fn hypernyms(&self, id: SynsetId) -> &[SynsetId] {
        &self.hypernyms[id.index()]
    }

    pub fn roots(&self, pos: PartOfSpeech) -> &[SynsetId] {
        self.roots.get(&pos).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Senses of `word` in lexicon order; lookup is lowercase.
    pub fn senses(&self, word: &str) -> &[SynsetId] {
        let key = word.to_lowercase();
        self.lemma_index
            .get(&key)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn senses_with_pos(
        &self,
        word: &str,
        pos: PartOfSpeech,
    ) -> impl Iterator<Item = SynsetId> + '_ {
        self.senses(word)
            .iter()
            .copied()
            .filter(move |s| self.synset(*s).pos == pos)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        !self.senses(word).is_empty()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemma_index.keys().map(String::as_str)
    }

    fn check(&self, id: SynsetId) -> Result<(), LexiconError> {
        if id.index() < self.synsets.len() {
            Ok(())
        } else {
            Err(LexiconError::UnknownSynset(id.0))
        }
    }

    /// Node count of the shortest root-to-`id` hypernym path; a root has depth 1.
    pub fn depth(&self, id: SynsetId) -> Result<u32, LexiconError> {
        self.check(id)?;
        self.depths[id.index()]
            .ok_or_else(|| LexiconError::Detached(self.synset(id).id.clone()))
    }

    /// `id` plus every synset lying on some shortest root path to `id`.
    fn shortest_path_ancestors(&self, id: SynsetId) -> BTreeSet<SynsetId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur) {
                continue;
            }
            let Some(d) = self.depths[cur.index()] else {
                continue;
            };
            for &h in &self.hypernyms[cur.index()] {
                if self.depths[h.index()] == Some(d - 1) {
                    stack.push(h);
                }
            }
        }
        seen
    }

    /// Deepest common ancestor of `a` and `b`; ties go to the smallest synset id.
    pub fn least_common_subsumer(
        &self,
        a: SynsetId,
        b: SynsetId,
    ) -> Result<SynsetId, LexiconError> {
        self.depth(a)?;
        self.depth(b)?;
        let ours = self.shortest_path_ancestors(a);
        let theirs = self.shortest_path_ancestors(b);
        ours.intersection(&theirs)
            .copied()
            .max_by(|x, y| {
                let dx = self.depths[x.index()];
                let dy = self.depths[y.index()];
                dx.cmp(&dy)
                    .then_with(|| self.synset(*y).id.cmp(&self.synset(*x).id))
            })
            .ok_or_else(|| {
                LexiconError::NoCommonAncestor(
                    self.synset(a).id.clone(),
                    self.synset(b).id.clone(),
                )
            })
    }

    /// `2·depth(lcs) / (depth(a) + depth(b))`, or 0 when the synsets share no ancestor.
    pub fn wu_palmer(&self, a: SynsetId, b: SynsetId) -> f64 {
        let (Ok(da), Ok(db)) = (self.depth(a), self.depth(b)) else {
            return 0.0;
        };
        match self.least_common_subsumer(a, b) {
            Ok(lcs) => {
                let dl = self.depths[lcs.index()].unwrap_or(0);
                2.0 * f64::from(dl) / f64::from(da + db)
            }
            Err(_) => 0.0,
        }
    }
}

fn check_acyclic(synsets: &[Synset], hypernyms: &[Vec<SynsetId>]) -> Result<(), LexiconError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut marks = vec![Mark::New; synsets.len()];
    for start in 0..synsets.len() {
        if marks[start] != Mark::New {
            continue;
        }
        // iterative DFS: (node, next child index)
        let mut stack = vec![(start, 0usize)];
        marks[start] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&child) = hypernyms[node].get(*next) {
                *next += 1;
                match marks[child.index()] {
                    Mark::Active => return Err(LexiconError::Cycle(synsets[child.index()].id.clone())),
                    Mark::New => {
                        marks[child.index()] = Mark::Active;
                        stack.push((child.index(), 0));
                    }
                    Mark::Done => {}
                }
            } else {
                marks[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    Ok(())
}

/// Depths by memoised descent; the graph is known to be acyclic here.
fn compute_depths(synsets: &[Synset], hypernyms: &[Vec<SynsetId>]) -> Vec<Option<u32>> {
    let mut depths: Vec<Option<Option<u32>>> = vec![None; synsets.len()];
    for start in 0..synsets.len() {
        let mut stack = vec![start];
        while let Some(&node) = stack.last() {
            if depths[node].is_some() {
                stack.pop();
                continue;
            }
            if synsets[node].hypernym_ids.is_empty() {
                depths[node] = Some(Some(1));
                stack.pop();
                continue;
            }
            let pending: Vec<usize> = hypernyms[node]
                .iter()
                .map(|h| h.index())
                .filter(|h| depths[*h].is_none())
                .collect();
            if pending.is_empty() {
                let best = hypernyms[node]
                    .iter()
                    .filter_map(|h| depths[h.index()].flatten())
                    .min();
                depths[node] = Some(best.map(|d| d + 1));
                stack.pop();
            } else {
                stack.extend(pending);
            }
        }
    }
    depths.into_iter().map(Option::flatten).collect()
}
