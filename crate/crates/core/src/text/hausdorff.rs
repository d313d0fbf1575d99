//! Similarity matrices and their modified-Hausdorff aggregate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("empty set comparison")]
    Empty,
    #[error("row {row} has {found} values, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("value {value} at ({row}, {col}) is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
}

impl SimilarityMatrix {
    /// Builds an `rows × cols` matrix by evaluating `f` on every cell.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(f(i, j));
            }
        }
        Self { rows, cols, values }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    found: row.len(),
                    expected: cols,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(MatrixError::OutOfRange {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                values.push(v);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// Mean over rows of the row maxima (how well the row set is covered).
    pub fn row_coverage(&self) -> f64 {
        let total: f64 = (0..self.rows)
            .map(|i| self.row(i).iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .sum();
        total / self.rows as f64
    }

    /// Mean over columns of the column maxima.
    pub fn col_coverage(&self) -> f64 {
        let total: f64 = (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.get(i, j))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        total / self.cols as f64
    }
}

/// How a similarity matrix is reduced to a single score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// `1 − HD` with cell distances `1 − sim`: the smaller of the two mean
    /// best-match similarities. Identical sets score 1.
    #[default]
    Hausdorff,
    /// The formula as typeset for sentences, data sets and services: the larger
    /// of the two mean worst-match similarities. Kept for experimentation.
    Literal,
}

impl Aggregation {
    pub fn aggregate(self, m: &SimilarityMatrix) -> Result<f64, MatrixError> {
        match self {
            Self::Hausdorff => hausdorff_similarity(m),
            Self::Literal => literal_formula(m),
        }
    }
}

/// `min(mean_i max_j M[i][j], mean_j max_i M[i][j])`.
pub fn hausdorff_similarity(m: &SimilarityMatrix) -> Result<f64, MatrixError> {
    if m.is_empty() {
        return Err(MatrixError::Empty);
    }
    Ok(m.row_coverage().min(m.col_coverage()))
}

fn literal_formula(m: &SimilarityMatrix) -> Result<f64, MatrixError> {
    if m.is_empty() {
        return Err(MatrixError::Empty);
    }
    let row_min: f64 = (0..m.rows())
        .map(|i| m.row(i).iter().copied().fold(f64::INFINITY, f64::min))
        .sum::<f64>()
        / m.rows() as f64;
    let col_min: f64 = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m.get(i, j)).fold(f64::INFINITY, f64::min))
        .sum::<f64>()
        / m.cols() as f64;
    Ok(row_min.max(col_min))
}

/// Set-level convention shared by every aggregate: two empty sets are
/// identical, one empty set matches nothing.
pub fn aggregate_sets(
    aggregation: Aggregation,
    rows: usize,
    cols: usize,
    cell: impl FnMut(usize, usize) -> f64,
) -> (f64, SimilarityMatrix) {
    let m = SimilarityMatrix::from_fn(rows, cols, cell);
    let score = match (rows, cols) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ => aggregation.aggregate(&m).expect("non-empty matrix"),
    };
    (score, m)
}
