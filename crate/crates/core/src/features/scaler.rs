use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Per-column divisors: the training maximum absolute value, or 1 for
/// columns that are zero throughout training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub factors: Vec<f64>,
}

pub fn fit_scaler<R: AsRef<[f64]>>(rows: &[R]) -> Result<Scaler> {
    let first = rows.first().ok_or(Error::EmptyDataset)?;
    let dim = first.as_ref().len();
    let mut max = alloc::vec![0.0f64; dim];
    for row in rows {
        let row = row.as_ref();
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
        for (m, v) in max.iter_mut().zip(row) {
            *m = m.max(v.abs());
        }
    }
    let factors = max.into_iter().map(|m| if m > 0.0 { m } else { 1.0 }).collect();
    Ok(Scaler { factors })
}

impl Scaler {
    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// Scales a row; values beyond the training range are left unclamped.
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.factors.len() {
            return Err(Error::DimensionMismatch { expected: self.factors.len(), found: row.len() });
        }
        Ok(row.iter().zip(&self.factors).map(|(v, f)| v / f).collect())
    }

    pub fn apply_all<R: AsRef<[f64]>>(&self, rows: &[R]) -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|r| self.apply(r.as_ref())).collect()
    }

    /// The scaler restricted to `columns`, in that order.
    pub fn select(&self, columns: &[usize]) -> Scaler {
        Scaler { factors: columns.iter().map(|&c| self.factors[c]).collect() }
    }
}
