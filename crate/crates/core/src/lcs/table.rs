use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::LcsEngine;
use crate::error::{Error, Result};
use crate::scalar::{Field, FieldKind};

pub const TABLE_SCHEMA_VERSION: u32 = 1;

/// `dim A_{n,k}^ℓ` for `1 <= k <= ℓ <= max_len` (and `k = 1` at `ℓ = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTable {
    pub version: u32,
    pub n: usize,
    pub max_len: usize,
    /// Fields the table was computed over; more than one means they agreed.
    pub fields: Vec<FieldKind>,
    /// `columns[ℓ][k - 1]`.
    pub columns: Vec<Vec<u64>>,
}

impl BigradedTable {
    pub fn entry(&self, k: usize, len: usize) -> u64 {
        if k == 0 {
            return 0;
        }
        self.columns.get(len).and_then(|c| c.get(k - 1)).copied().unwrap_or(0)
    }

    pub fn column(&self, len: usize) -> &[u64] {
        &self.columns[len]
    }

    pub fn column_sum(&self, len: usize) -> u64 {
        self.columns[len].iter().sum()
    }

    /// Cells whose entries differ, as `(k, ℓ, self, other)`.
    pub fn differences(&self, other: &BigradedTable) -> Vec<(usize, usize, u64, u64)> {
        let mut out = Vec::new();
        for len in 0..=self.max_len.max(other.max_len) {
            let kmax = len.max(1);
            for k in 1..=kmax {
                let (a, b) = (self.entry(k, len), other.entry(k, len));
                if a != b {
                    out.push((k, len, a, b));
                }
            }
        }
        out
    }

    /// One row per length, `(c1u + c2u^2 + ...)t^ℓ`.
    pub fn to_text(&self) -> String {
        let mut s = format!("H_{}(u,t) =\n", self.n);
        for (len, col) in self.columns.iter().enumerate() {
            let terms: Vec<String> = col
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| {
                    let coef = if *c == 1 { String::new() } else { c.to_string() };
                    let k = i + 1;
                    if k == 1 {
                        format!("{coef}u")
                    } else {
                        format!("{coef}u^{k}")
                    }
                })
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let t = match len {
                0 => String::new(),
                1 => "t".to_string(),
                l => format!("t^{l}"),
            };
            let lead = if len == 0 { "  " } else { "+ " };
            let _ = writeln!(s, "{lead}({body}){t}");
        }
        let _ = writeln!(s, "+ O(t^{})", self.max_len + 1);
        s
    }

    /// `len,k,dim` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("len,k,dim\n");
        for (len, col) in self.columns.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                let _ = writeln!(s, "{len},{},{c}", i + 1);
            }
        }
        s
    }
}

fn compute_columns<F: Field>(engine: &LcsEngine<F>, max_len: usize, k_max: usize) -> Result<Vec<Vec<u64>>> {
    (0..=max_len)
        .map(|len| {
            (1..=len.max(1).min(k_max.max(1)))
                .map(|k| engine.quotient_dim(k, len).map(|d| d as u64))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// The bigraded Hilbert table of `A_n` up to length `max_len`.
pub fn hilbert_table<F: Field>(engine: &LcsEngine<F>, max_len: usize) -> Result<BigradedTable> {
    hilbert_table_upto(engine, max_len, max_len)
}

/// The table restricted to `k <= k_max`; columns are then partial.
pub fn hilbert_table_upto<F: Field>(engine: &LcsEngine<F>, max_len: usize, k_max: usize) -> Result<BigradedTable> {
    let columns = compute_columns(engine, max_len, k_max)?;
    Ok(BigradedTable { version: TABLE_SCHEMA_VERSION, n: engine.nvars(), max_len, fields: vec![F::kind()], columns })
}

impl BigradedTable {
    /// Folds in a table computed over another field, failing on the first
    /// disagreeing cell.
    pub fn merge_agreeing(mut self, other: &BigradedTable) -> Result<BigradedTable> {
        if let Some((k, len, a, b)) = self.differences(other).into_iter().next() {
            return Err(Error::FieldDisagreement {
                cell: format!("n={} k={k} len={len}", self.n),
                left: a.to_string(),
                right: b.to_string(),
            });
        }
        self.fields.extend(other.fields.iter().copied());
        Ok(self)
    }
}
