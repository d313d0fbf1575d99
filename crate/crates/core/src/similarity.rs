//! Data-set, operation and service similarity, and candidate ranking.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::lexicon::Lexicon;
use crate::text::{aggregate_sets, Aggregation, SimilarityMatrix, TaggedSentence, TextSimilarity};
use crate::wsdl::{DataSet, Operation, ServiceDescription};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SimilarityError {
    #[error("weights must be finite and non-negative with a positive sum (got {p1}, {p2}, {p3})")]
    InvalidWeights { p1: f64, p2: f64, p3: f64 },
    #[error("service {0} has no operations")]
    EmptyService(String),
}

/// Relative weights of input, output and name similarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            p1: 1.0,
            p2: 1.0,
            p3: 2.0,
        }
    }
}

impl Weights {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self, SimilarityError> {
        let w = Self { p1, p2, p3 };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), SimilarityError> {
        let ok = [self.p1, self.p2, self.p3].iter().all(|p| p.is_finite() && *p >= 0.0)
            && self.p1 + self.p2 + self.p3 > 0.0;
        if ok {
            Ok(())
        } else {
            Err(SimilarityError::InvalidWeights {
                p1: self.p1,
                p2: self.p2,
                p3: self.p3,
            })
        }
    }

    /// Weighted mean of the three component scores.
    pub fn combine(&self, input: f64, output: f64, name: f64) -> f64 {
        (self.p1 * input + self.p2 * output + self.p3 * name) / (self.p1 + self.p2 + self.p3)
    }
}

/// An operation with every sentence disambiguated once.
#[derive(Debug, Clone)]
pub struct OperationProfile {
    pub name: TaggedSentence,
    pub input: Vec<TaggedSentence>,
    pub output: Vec<TaggedSentence>,
}

#[derive(Debug, Clone)]
pub struct ServiceProfile {
    pub operations: Vec<OperationProfile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub service: ServiceDescription,
    pub score: f64,
    /// Operation-by-operation scores, target operations as rows.
    pub matrix: SimilarityMatrix,
}

/// A pool member that could not be scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankingFailure {
    pub name: String,
    pub source_uri: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Ranking {
    pub candidates: Vec<RankedCandidate>,
    pub failures: Vec<RankingFailure>,
}

/// Ranking order: score descending, then name, then source URI.
pub fn candidate_order(a: &RankedCandidate, b: &RankedCandidate) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.service.name.cmp(&b.service.name))
        .then_with(|| a.service.source_uri.cmp(&b.service.source_uri))
}

#[derive(Debug, Clone, Copy)]
pub struct SimilarityEngine<'a> {
    text: TextSimilarity<'a>,
    weights: Weights,
}

impl<'a> SimilarityEngine<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self {
            text: TextSimilarity::new(lexicon),
            weights: Weights::default(),
        }
    }

    pub fn with_weights(mut self, weights: Weights) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_aggregation(mut self, aggregation: Aggregation) -> Self {
        self.text = self.text.with_aggregation(aggregation);
        self
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn text(&self) -> &TextSimilarity<'a> {
        &self.text
    }

    fn tag_set(&self, set: &DataSet) -> Vec<TaggedSentence> {
        set.sentences().map(|s| self.text.tag(s)).collect()
    }

    pub fn profile_operation(&self, op: &Operation) -> OperationProfile {
        OperationProfile {
            name: self.text.tag(&op.name_sentence),
            input: self.tag_set(&op.input),
            output: self.tag_set(&op.output),
        }
    }

    pub fn profile_service(&self, service: &ServiceDescription) -> ServiceProfile {
        ServiceProfile {
            operations: service.operations.iter().map(|o| self.profile_operation(o)).collect(),
        }
    }

    /// Aggregate score and sentence matrix of two profiled data sets.
    pub fn tagged_sets(&self, a: &[TaggedSentence], b: &[TaggedSentence]) -> (f64, SimilarityMatrix) {
        aggregate_sets(self.text.aggregation(), a.len(), b.len(), |i, j| {
            self.text.tagged_similarity(&a[i], &b[j])
        })
    }

    /// Sentence-by-sentence matrix of two data sets.
    pub fn data_set_matrix(&self, a: &DataSet, b: &DataSet) -> SimilarityMatrix {
        self.tagged_sets(&self.tag_set(a), &self.tag_set(b)).1
    }

    pub fn data_set_similarity(&self, a: &DataSet, b: &DataSet) -> f64 {
        self.tagged_sets(&self.tag_set(a), &self.tag_set(b)).0
    }

    pub fn profiled_operation_similarity(&self, f: &OperationProfile, g: &OperationProfile) -> f64 {
        let input = self.tagged_sets(&f.input, &g.input).0;
        let output = self.tagged_sets(&f.output, &g.output).0;
        let name = self.text.tagged_similarity(&f.name, &g.name);
        self.weights.combine(input, output, name)
    }

    pub fn operation_similarity(&self, f: &Operation, g: &Operation) -> f64 {
        self.profiled_operation_similarity(&self.profile_operation(f), &self.profile_operation(g))
    }

    pub fn profiled_service_similarity(&self, a: &ServiceProfile, b: &ServiceProfile) -> (f64, SimilarityMatrix) {
        aggregate_sets(self.text.aggregation(), a.operations.len(), b.operations.len(), |i, j| {
            self.profiled_operation_similarity(&a.operations[i], &b.operations[j])
        })
    }

    /// Aggregate score and the operation matrix (rows: `a`'s operations).
    pub fn service_similarity(
        &self,
        a: &ServiceDescription,
        b: &ServiceDescription,
    ) -> Result<(f64, SimilarityMatrix), SimilarityError> {
        for s in [a, b] {
            if s.operations.is_empty() {
                return Err(SimilarityError::EmptyService(s.name.clone()));
            }
        }
        Ok(self.profiled_service_similarity(&self.profile_service(a), &self.profile_service(b)))
    }

    /// Scores every pool member against `target` and sorts the results.
    pub fn rank_candidates(
        &self,
        target: &ServiceDescription,
        pool: &[ServiceDescription],
    ) -> Result<Ranking, SimilarityError> {
        if target.operations.is_empty() {
            return Err(SimilarityError::EmptyService(target.name.clone()));
        }
        let target_profile = self.profile_service(target);
        let score_one = |candidate: &ServiceDescription| {
            if candidate.operations.is_empty() {
                return Err(RankingFailure {
                    name: candidate.name.clone(),
                    source_uri: candidate.source_uri.clone(),
                    error: SimilarityError::EmptyService(candidate.name.clone()).to_string(),
                });
            }
            let profile = self.profile_service(candidate);
            let (score, matrix) = self.profiled_service_similarity(&target_profile, &profile);
            Ok(RankedCandidate {
                service: candidate.clone(),
                score,
                matrix,
            })
        };

        #[cfg(feature = "parallel")]
        let results: Vec<_> = {
            use rayon::prelude::*;
            pool.par_iter().map(score_one).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let results: Vec<_> = pool.iter().map(score_one).collect();

        let mut ranking = Ranking::default();
        for r in results {
            match r {
                Ok(c) => ranking.candidates.push(c),
                Err(f) => ranking.failures.push(f),
            }
        }
        ranking.candidates.sort_by(candidate_order);
        Ok(ranking)
    }
}
