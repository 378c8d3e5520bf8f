//! Per-node encoding matrices and their CSV form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Marker on one column of an encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ColumnFlag {
    #[default]
    Clean,
    /// Eigenvector column inside a degenerate eigenspace: the column itself
    /// is basis-dependent.
    Degenerate,
}

/// `n × m` real matrix of per-node encodings plus the metadata describing
/// how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub column_flags: Vec<ColumnFlag>,
    /// For eigenvector columns: diagonal of the spectral projector onto the
    /// eigenspace the column belongs to. Basis-independent.
    pub column_projectors: Vec<Option<Vec<f64>>>,
    /// Nodes whose row is a placeholder (e.g. isolated node, empty
    /// curvature multiset).
    pub flagged_rows: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow { row: usize, found: usize, expected: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("csv: {0}")]
    Csv(String),
}

impl EncodingMatrix {
    pub fn from_rows(kind: impl Into<String>, rows: Vec<Vec<f64>>, cols: usize) -> Result<Self, EncodingError> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(EncodingError::RaggedRow { row: r, found: row.len(), expected: cols });
            }
            for (c, x) in row.into_iter().enumerate() {
                if !x.is_finite() {
                    return Err(EncodingError::NonFinite { row: r, col: c });
                }
                // Normalize negative zero so emitted text is stable.
                values.push(if x == 0.0 { 0.0 } else { x });
            }
        }
        Ok(EncodingMatrix {
            rows: n,
            cols,
            values,
            kind: kind.into(),
            params: BTreeMap::new(),
            column_flags: vec![ColumnFlag::Clean; cols],
            column_projectors: vec![None; cols],
            flagged_rows: Vec::new(),
        })
    }

    pub fn empty(kind: impl Into<String>, rows: usize) -> Self {
        Self::from_rows(kind, vec![Vec::new(); rows], 0).unwrap()
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn has_degenerate_columns(&self) -> bool {
        self.column_flags.iter().any(|f| *f == ColumnFlag::Degenerate)
    }

    /// Keeps the first `k` columns (and their metadata).
    pub fn truncate_columns(&self, k: usize) -> EncodingMatrix {
        let k = k.min(self.cols);
        let rows = (0..self.rows).map(|i| self.row(i)[..k].to_vec()).collect();
        let mut out = EncodingMatrix::from_rows(self.kind.clone(), rows, k).unwrap();
        out.params = self.params.clone();
        out.column_flags = self.column_flags[..k].to_vec();
        out.column_projectors = self.column_projectors[..k].to_vec();
        out.flagged_rows = self.flagged_rows.clone();
        out
    }

    /// `node,<kind>_0,…` header, one line per node, values in shortest
    /// round-trip decimal form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node");
        for j in 0..self.cols {
            write!(out, ",{}_{}", self.kind, j).unwrap();
        }
        out.push('\n');
        for i in 0..self.rows {
            write!(out, "{i}").unwrap();
            for x in self.row(i) {
                write!(out, ",{x}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, EncodingError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| EncodingError::Csv("empty input".into()))?;
        let names: Vec<&str> = header.split(',').collect();
        if names.first().map(|s| s.trim()) != Some("node") {
            return Err(EncodingError::Csv("header must start with `node`".into()));
        }
        let cols = names.len() - 1;
        let kind = names
            .get(1)
            .and_then(|s| s.rsplit_once('_'))
            .map(|(k, _)| k.to_string())
            .unwrap_or_default();
        let mut rows = Vec::new();
        for (r, line) in lines.enumerate() {
            let mut fields = line.split(',');
            let node: usize = fields
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| EncodingError::Csv(format!("row {r}: bad node id")))?;
            if node != r {
                return Err(EncodingError::Csv(format!("row {r}: node id {node} out of order")));
            }
            let row = fields
                .map(|s| s.trim().parse::<f64>().map_err(|e| EncodingError::Csv(format!("row {r}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(kind, rows, cols)
    }
}
