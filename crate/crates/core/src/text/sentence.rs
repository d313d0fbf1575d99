//! Word and sentence similarity: Wu-Palmer over disambiguated senses when the
//! lexicon knows both words, Jaro-Winkler otherwise, aggregated per sentence.

use crate::lexicon::{ContextWindow, Lexicon, PartOfSpeech, SynsetId};

use super::hausdorff::{aggregate_sets, Aggregation, SimilarityMatrix};
use super::jaro::jaro_winkler;
use super::tokenize::Sentence;

/// A word with the noun and verb senses picked for its sentence context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedWord {
    pub word: String,
    pub noun: Option<SynsetId>,
    pub verb: Option<SynsetId>,
}

/// A sentence whose words have been disambiguated once, against the whole
/// sentence as context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub words: Vec<TaggedWord>,
}

impl TaggedSentence {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TextSimilarity<'a> {
    lexicon: &'a Lexicon,
    aggregation: Aggregation,
}

impl<'a> TextSimilarity<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self {
            lexicon,
            aggregation: Aggregation::default(),
        }
    }

    pub fn with_aggregation(mut self, aggregation: Aggregation) -> Self {
        self.aggregation = aggregation;
        self
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    fn tag_word(&self, ctx: &ContextWindow) -> TaggedWord {
        let word = &ctx.words()[ctx.target_index()];
        TaggedWord {
            word: word.clone(),
            noun: self.lexicon.disambiguate_as(word, ctx, PartOfSpeech::Noun),
            verb: self.lexicon.disambiguate_as(word, ctx, PartOfSpeech::Verb),
        }
    }

    pub fn tag(&self, sentence: &Sentence) -> TaggedSentence {
        let words = (0..sentence.words.len())
            .map(|i| {
                let ctx = ContextWindow::new(sentence.words.clone(), i).expect("index in range");
                self.tag_word(&ctx)
            })
            .collect();
        TaggedSentence { words }
    }

    fn tagged_word_similarity(&self, a: &TaggedWord, b: &TaggedWord) -> f64 {
        match (a.noun, b.noun, a.verb, b.verb) {
            (Some(x), Some(y), _, _) => self.lexicon.wu_palmer(x, y),
            (_, _, Some(x), Some(y)) => self.lexicon.wu_palmer(x, y),
            _ => jaro_winkler(&a.word, &b.word),
        }
    }

    /// Similarity of `w1` and `w2` read in their respective contexts.
    pub fn word_similarity(&self, ctx1: &ContextWindow, ctx2: &ContextWindow) -> f64 {
        self.tagged_word_similarity(&self.tag_word(ctx1), &self.tag_word(ctx2))
    }

    /// Word-pair matrix between two tagged sentences.
    pub fn word_matrix(&self, a: &TaggedSentence, b: &TaggedSentence) -> SimilarityMatrix {
        SimilarityMatrix::from_fn(a.len(), b.len(), |i, j| {
            self.tagged_word_similarity(&a.words[i], &b.words[j])
        })
    }

    pub fn tagged_similarity(&self, a: &TaggedSentence, b: &TaggedSentence) -> f64 {
        aggregate_sets(self.aggregation, a.len(), b.len(), |i, j| {
            self.tagged_word_similarity(&a.words[i], &b.words[j])
        })
        .0
    }

    pub fn sentence_similarity(&self, a: &Sentence, b: &Sentence) -> f64 {
        self.tagged_similarity(&self.tag(a), &self.tag(b))
    }
}

/// Convenience wrapper for a single word pair with explicit contexts.
pub fn word_similarity(
    lexicon: &Lexicon,
    w1: &str,
    w2: &str,
    ctx1: &[String],
    ctx2: &[String],
) -> f64 {
    let place = |w: &str, ctx: &[String]| {
        let mut words = ctx.to_vec();
        let idx = words.iter().position(|c| c == w).unwrap_or_else(|| {
            words.push(w.to_string());
            words.len() - 1
        });
        ContextWindow::new(words, idx).expect("index in range")
    };
    TextSimilarity::new(lexicon).word_similarity(&place(w1, ctx1), &place(w2, ctx2))
}
