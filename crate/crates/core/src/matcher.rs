//! Set relations between data sets, operation-pair classification and the
//! correspondence table offered to the administrator.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::similarity::SimilarityEngine;
use crate::text::SimilarityMatrix;
use crate::wsdl::{DataSet, ServiceDescription};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MatcherError {
    #[error("matrix is {got_rows}x{got_cols} but the services have {rows}x{cols} operations")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("threshold {0} is outside (0, 1)")]
    Threshold(f64),
}

pub fn check_threshold(threshold: f64) -> Result<(), MatcherError> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(MatcherError::Threshold(threshold))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetRelation {
    Equal,
    LeftSubsetOfRight,
    RightSubsetOfLeft,
    Intersect,
    Disjoint,
}

impl SetRelation {
    pub const ALL: [SetRelation; 5] = [
        Self::Equal,
        Self::LeftSubsetOfRight,
        Self::RightSubsetOfLeft,
        Self::Intersect,
        Self::Disjoint,
    ];

    /// The relation seen from the other side.
    pub fn swapped(self) -> Self {
        match self {
            Self::LeftSubsetOfRight => Self::RightSubsetOfLeft,
            Self::RightSubsetOfLeft => Self::LeftSubsetOfRight,
            other => other,
        }
    }

    fn subset_direction(self) -> Option<Direction> {
        match self {
            Self::LeftSubsetOfRight => Some(Direction::LeftToRight),
            Self::RightSubsetOfLeft => Some(Direction::RightToLeft),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Equal => "=",
            Self::LeftSubsetOfRight => "⊂",
            Self::RightSubsetOfLeft => "⊃",
            Self::Intersect => "∩",
            Self::Disjoint => "≠",
        }
    }
}

/// Set relation read off a sentence matrix (rows: left set, columns: right set).
///
/// The left set is covered when every row has a cell strictly above
/// `threshold`; symmetrically for the right set and columns.
pub fn relation_from_matrix(m: &SimilarityMatrix, threshold: f64) -> SetRelation {
    let left_covered = (0..m.rows()).all(|i| m.row(i).iter().any(|&v| v > threshold));
    let right_covered = (0..m.cols()).all(|j| (0..m.rows()).any(|i| m.get(i, j) > threshold));
    match (left_covered, right_covered) {
        (true, true) => SetRelation::Equal,
        (true, false) => SetRelation::LeftSubsetOfRight,
        (false, true) => SetRelation::RightSubsetOfLeft,
        (false, false) => {
            let any = (0..m.rows()).any(|i| m.row(i).iter().any(|&v| v > threshold));
            if any {
                SetRelation::Intersect
            } else {
                SetRelation::Disjoint
            }
        }
    }
}

/// Relation between two data sets, compared sentence by sentence.
pub fn data_set_relation(engine: &SimilarityEngine, a: &DataSet, b: &DataSet, threshold: f64) -> SetRelation {
    relation_from_matrix(&engine.data_set_matrix(a, b), threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Direction {
    LeftToRight,
    RightToLeft,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    Equality,
    Corestriction,
    Restriction,
    Prolongation,
    Intersection,
    Difference,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        Self::Equality,
        Self::Corestriction,
        Self::Restriction,
        Self::Prolongation,
        Self::Intersection,
        Self::Difference,
    ];

    /// Suggestion priority, 1 (best) to 6.
    pub fn priority(self) -> u8 {
        self as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Equality => "Equality",
            Self::Corestriction => "Corestriction",
            Self::Restriction => "Restriction",
            Self::Prolongation => "Prolongation",
            Self::Intersection => "Intersection",
            Self::Difference => "Difference",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperationRelation {
    pub kind: RelationKind,
    pub direction: Direction,
}

impl OperationRelation {
    fn symmetric(kind: RelationKind) -> Self {
        Self {
            kind,
            direction: Direction::Symmetric,
        }
    }
}

/// Classifies an operation pair from the relations of its inputs and outputs.
pub fn classify_operation_pair(r_in: SetRelation, r_out: SetRelation) -> OperationRelation {
    use SetRelation::*;
    let (d_in, d_out) = (r_in.subset_direction(), r_out.subset_direction());
    let directed = |kind, direction| OperationRelation { kind, direction };
    match (r_in, r_out) {
        (Equal, Equal) => OperationRelation::symmetric(RelationKind::Equality),
        (Disjoint, _) | (_, Disjoint) => OperationRelation::symmetric(RelationKind::Difference),
        (Equal, _) if d_out.is_some() => directed(RelationKind::Corestriction, d_out.unwrap()),
        (_, Equal) if d_in.is_some() => directed(RelationKind::Restriction, d_in.unwrap()),
        _ => match (d_in, d_out) {
            (Some(a), Some(b)) if a == b => directed(RelationKind::Prolongation, a),
            _ => OperationRelation::symmetric(RelationKind::Intersection),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cell {
    pub relation: RelationKind,
    pub direction: Direction,
    pub score: f64,
    pub input_relation: SetRelation,
    pub output_relation: SetRelation,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({:.2})", self.relation, self.score)
    }
}

/// Relation and similarity of every substituted × substituent operation pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceTable {
    /// Substituted operations.
    pub rows: Vec<String>,
    /// Substituent operations.
    pub cols: Vec<String>,
    pub cells: Vec<Vec<Cell>>,
    pub threshold: f64,
}

impl CorrespondenceTable {
    pub fn cell(&self, row: &str, col: &str) -> Option<&Cell> {
        let i = self.rows.iter().position(|r| r == row)?;
        let j = self.cols.iter().position(|c| c == col)?;
        Some(&self.cells[i][j])
    }
}

impl fmt::Display for CorrespondenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<Vec<String>> = self
            .cells
            .iter()
            .map(|row| row.iter().map(Cell::to_string).collect())
            .collect();
        let first = self.rows.iter().map(String::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..self.cols.len())
            .map(|j| {
                rendered
                    .iter()
                    .map(|r| r[j].len())
                    .chain([self.cols[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        write!(f, "{:first$}", "")?;
        for (c, w) in self.cols.iter().zip(&widths) {
            write!(f, "  {c:w$}")?;
        }
        writeln!(f)?;
        for (name, row) in self.rows.iter().zip(&rendered) {
            write!(f, "{name:first$}")?;
            for (cell, w) in row.iter().zip(&widths) {
                write!(f, "  {cell:w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Builds the table for `a` (rows) against `b` (columns), taking scores from
/// the operation matrix computed during ranking.
pub fn build_correspondence_table(
    engine: &SimilarityEngine,
    a: &ServiceDescription,
    b: &ServiceDescription,
    mws: &SimilarityMatrix,
    threshold: f64,
) -> Result<CorrespondenceTable, MatcherError> {
    check_threshold(threshold)?;
    let (rows, cols) = (a.operations.len(), b.operations.len());
    if mws.rows() != rows || mws.cols() != cols {
        return Err(MatcherError::DimensionMismatch {
            rows,
            cols,
            got_rows: mws.rows(),
            got_cols: mws.cols(),
        });
    }
    let pa = engine.profile_service(a);
    let pb = engine.profile_service(b);
    let cells = pa
        .operations
        .iter()
        .enumerate()
        .map(|(i, f)| {
            pb.operations
                .iter()
                .enumerate()
                .map(|(j, g)| {
                    let input_relation = relation_from_matrix(&engine.tagged_sets(&f.input, &g.input).1, threshold);
                    let output_relation =
                        relation_from_matrix(&engine.tagged_sets(&f.output, &g.output).1, threshold);
                    let rel = classify_operation_pair(input_relation, output_relation);
                    Cell {
                        relation: rel.kind,
                        direction: rel.direction,
                        score: mws.get(i, j),
                        input_relation,
                        output_relation,
                    }
                })
                .collect()
        })
        .collect();
    Ok(CorrespondenceTable {
        rows: a.operations.iter().map(|o| o.name.clone()).collect(),
        cols: b.operations.iter().map(|o| o.name.clone()).collect(),
        cells,
        threshold,
    })
}

/// Convenience: scores and classifies in one go.
pub fn match_services(
    engine: &SimilarityEngine,
    a: &ServiceDescription,
    b: &ServiceDescription,
    threshold: f64,
) -> Result<CorrespondenceTable, MatcherError> {
    let pa = engine.profile_service(a);
    let pb = engine.profile_service(b);
    let (_, mws) = engine.profiled_service_similarity(&pa, &pb);
    build_correspondence_table(engine, a, b, &mws, threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Suggestion {
    pub operation: String,
    pub relation: RelationKind,
    pub direction: Direction,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum RowSuggestions {
    Ranked {
        operation: String,
        candidates: Vec<Suggestion>,
    },
    NoSuggestion {
        operation: String,
    },
}

impl RowSuggestions {
    pub fn operation(&self) -> &str {
        match self {
            Self::Ranked { operation, .. } | Self::NoSuggestion { operation } => operation,
        }
    }

    pub fn best(&self) -> Option<&Suggestion> {
        match self {
            Self::Ranked { candidates, .. } => candidates.first(),
            Self::NoSuggestion { .. } => None,
        }
    }
}

fn suggestion_order(a: &Suggestion, b: &Suggestion) -> Ordering {
    a.relation
        .priority()
        .cmp(&b.relation.priority())
        .then_with(|| b.score.total_cmp(&a.score))
        .then_with(|| a.operation.cmp(&b.operation))
}

/// Per substituted operation, the non-Difference columns ordered by relation
/// priority, then score, then name.
pub fn suggest_matching(table: &CorrespondenceTable) -> Vec<RowSuggestions> {
    table
        .rows
        .iter()
        .zip(&table.cells)
        .map(|(row, cells)| {
            let mut candidates: Vec<Suggestion> = table
                .cols
                .iter()
                .zip(cells)
                .filter(|(_, c)| c.relation != RelationKind::Difference)
                .map(|(col, c)| Suggestion {
                    operation: col.clone(),
                    relation: c.relation,
                    direction: c.direction,
                    score: c.score,
                })
                .collect();
            if candidates.is_empty() {
                RowSuggestions::NoSuggestion { operation: row.clone() }
            } else {
                candidates.sort_by(suggestion_order);
                RowSuggestions::Ranked {
                    operation: row.clone(),
                    candidates,
                }
            }
        })
        .collect()
}
