//! Basic similarity layer: tokenization, Jaro-Winkler, the modified-Hausdorff
//! aggregate and word/sentence similarity.

mod hausdorff;
mod jaro;
mod sentence;
mod tokenize;

pub use hausdorff::{
    aggregate_sets, hausdorff_similarity, Aggregation, MatrixError, SimilarityMatrix,
};
pub use jaro::{jaro, jaro_winkler, MAX_PREFIX, PREFIX_SCALE};
pub use sentence::{word_similarity, TaggedSentence, TaggedWord, TextSimilarity};
pub use tokenize::{tokenize, Sentence};
