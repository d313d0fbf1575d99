//! The administrator's matching session: pick a target and a registry, rank,
//! select a candidate, draft the plan, confirm.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use wsmatch_core::annotate::{annotate_pair, AnnotateError, AnnotatedWsdlPair};
use wsmatch_core::lexicon::Lexicon;
use wsmatch_core::mapping::{validate_plan, MatchingPlan, ValidationReport};
use wsmatch_core::matcher::{
    build_correspondence_table, suggest_matching, CorrespondenceTable, MatcherError, RowSuggestions,
};
use wsmatch_core::similarity::{RankingFailure, SimilarityEngine, SimilarityError, Weights};
use wsmatch_core::text::SimilarityMatrix;
use wsmatch_core::wsdl::{parse_wsdl_with, DocumentLoader, ServiceDescription, WsdlError};

use crate::registry::{load_registry, RegistryError, RegistryManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SessionState {
    Created,
    Ranked,
    CandidateSelected,
    MatchingDrafted,
    Confirmed,
}

impl fmt::Display for SessionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Created => "created",
            Self::Ranked => "ranked",
            Self::CandidateSelected => "candidateSelected",
            Self::MatchingDrafted => "matchingDrafted",
            Self::Confirmed => "confirmed",
        })
    }
}

/// One ranked registry entry, with the operation matrix kept for the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateSummary {
    pub name: String,
    pub wsdl_uri: String,
    pub score: f64,
    pub matrix: SimilarityMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchingSession {
    pub id: String,
    pub target_wsdl_uri: String,
    pub registry_uri: String,
    pub state: SessionState,
    /// Registry contents as read when the session was created.
    pub registry: RegistryManifest,
    #[serde(default)]
    pub ranking: Vec<CandidateSummary>,
    #[serde(default)]
    pub failures: Vec<RankingFailure>,
    #[serde(default)]
    pub selected: Option<usize>,
    #[serde(default)]
    pub table: Option<CorrespondenceTable>,
    #[serde(default)]
    pub suggestions: Vec<RowSuggestions>,
    #[serde(default)]
    pub plan: MatchingPlan,
    #[serde(default)]
    pub report: ValidationReport,
    #[serde(default)]
    pub artifacts: Option<AnnotatedWsdlPair>,
}

impl MatchingSession {
    pub fn candidate(&self) -> Option<&CandidateSummary> {
        self.selected.and_then(|i| self.ranking.get(i))
    }

    fn require(&self, allowed: &[SessionState]) -> Result<(), WorkflowError> {
        if allowed.contains(&self.state) {
            Ok(())
        } else {
            Err(WorkflowError::WrongState {
                actual: self.state,
                allowed: allowed.to_vec(),
            })
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WorkflowError {
    #[error("session is {actual}; this step needs {}", join_states(.allowed))]
    WrongState {
        actual: SessionState,
        allowed: Vec<SessionState>,
    },
    #[error("candidate index {index} is out of range (ranking has {len} entries)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot fetch {uri}: {message}")]
    Fetch { uri: String, message: String },
    #[error("{uri} is not a usable WSDL: {source}")]
    Parse {
        uri: String,
        #[source]
        source: WsdlError,
    },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Matcher(#[from] MatcherError),
    #[error("the plan has {} validation errors", .0.errors().count())]
    Invalid(ValidationReport),
    #[error(transparent)]
    Annotate(#[from] AnnotateError),
}

fn join_states(states: &[SessionState]) -> String {
    states.iter().map(ToString::to_string).collect::<Vec<_>>().join(" or ")
}

/// Everything a session step needs besides the session itself.
pub struct Workflow {
    lexicon: Arc<Lexicon>,
    weights: Weights,
    threshold: f64,
    loader: Arc<dyn DocumentLoader>,
}

impl Workflow {
    pub fn new(lexicon: Arc<Lexicon>, weights: Weights, threshold: f64, loader: Arc<dyn DocumentLoader>) -> Self {
        Self {
            lexicon,
            weights,
            threshold,
            loader,
        }
    }

    pub fn engine(&self) -> SimilarityEngine<'_> {
        SimilarityEngine::new(&self.lexicon).with_weights(self.weights)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn fetch(&self, uri: &str) -> Result<ServiceDescription, WorkflowError> {
        let text = self.loader.load(uri).map_err(|message| WorkflowError::Fetch {
            uri: uri.to_string(),
            message,
        })?;
        parse_wsdl_with(text.as_bytes(), uri, self.loader.as_ref()).map_err(|source| WorkflowError::Parse {
            uri: uri.to_string(),
            source,
        })
    }

    fn selected_pair(&self, s: &MatchingSession) -> Result<(ServiceDescription, ServiceDescription), WorkflowError> {
        let candidate = s.candidate().ok_or(WorkflowError::WrongState {
            actual: s.state,
            allowed: vec![SessionState::CandidateSelected, SessionState::MatchingDrafted],
        })?;
        Ok((self.fetch(&s.target_wsdl_uri)?, self.fetch(&candidate.wsdl_uri)?))
    }

    /// Checks that the target parses and reads the registry.
    pub fn create(&self, id: String, target_uri: &str, registry_uri: &str) -> Result<MatchingSession, WorkflowError> {
        self.fetch(target_uri)?;
        let registry = load_registry(registry_uri, self.loader.as_ref())?;
        Ok(MatchingSession {
            id,
            target_wsdl_uri: target_uri.to_string(),
            registry_uri: registry_uri.to_string(),
            state: SessionState::Created,
            registry,
            ranking: Vec::new(),
            failures: Vec::new(),
            selected: None,
            table: None,
            suggestions: Vec::new(),
            plan: MatchingPlan::default(),
            report: ValidationReport::default(),
            artifacts: None,
        })
    }

    /// Scores every registry entry against the target. May be repeated while
    /// no candidate is selected.
    pub fn rank(&self, s: &mut MatchingSession) -> Result<(), WorkflowError> {
        s.require(&[SessionState::Created, SessionState::Ranked])?;
        let target = self.fetch(&s.target_wsdl_uri)?;
        let (pool, mut failures) = s.registry.fetch(self.loader.as_ref());
        let ranking = self.engine().rank_candidates(&target, &pool)?;
        failures.extend(ranking.failures);
        s.ranking = ranking
            .candidates
            .into_iter()
            .map(|c| CandidateSummary {
                name: c.service.name,
                wsdl_uri: c.service.source_uri,
                score: c.score,
                matrix: c.matrix,
            })
            .collect();
        s.failures = failures;
        s.state = SessionState::Ranked;
        Ok(())
    }

    pub fn select(&self, s: &mut MatchingSession, index: usize) -> Result<(), WorkflowError> {
        s.require(&[SessionState::Ranked])?;
        let candidate = s.ranking.get(index).ok_or(WorkflowError::IndexOutOfRange {
            index,
            len: s.ranking.len(),
        })?;
        let target = self.fetch(&s.target_wsdl_uri)?;
        let service = self.fetch(&candidate.wsdl_uri)?;
        let table = build_correspondence_table(&self.engine(), &target, &service, &candidate.matrix, self.threshold)?;
        s.suggestions = suggest_matching(&table);
        s.table = Some(table);
        s.selected = Some(index);
        s.state = SessionState::CandidateSelected;
        Ok(())
    }

    /// Merges `fragment` into the draft and revalidates it. Saving the same
    /// fragment twice has no further effect.
    pub fn draft(&self, s: &mut MatchingSession, fragment: &MatchingPlan) -> Result<(), WorkflowError> {
        s.require(&[SessionState::CandidateSelected, SessionState::MatchingDrafted])?;
        let (target, candidate) = self.selected_pair(s)?;
        s.plan.merge(fragment);
        s.report = validate_plan(&s.plan, &target, &candidate);
        s.state = if s.plan.is_empty() {
            SessionState::CandidateSelected
        } else {
            SessionState::MatchingDrafted
        };
        Ok(())
    }

    pub fn confirm(&self, s: &mut MatchingSession) -> Result<(), WorkflowError> {
        s.require(&[SessionState::MatchingDrafted])?;
        let (target, candidate) = self.selected_pair(s)?;
        let report = validate_plan(&s.plan, &target, &candidate);
        if report.has_errors() {
            s.report = report.clone();
            return Err(WorkflowError::Invalid(report));
        }
        s.artifacts = Some(annotate_pair(&target, &candidate, &s.plan)?);
        s.report = report;
        s.state = SessionState::Confirmed;
        Ok(())
    }
}
