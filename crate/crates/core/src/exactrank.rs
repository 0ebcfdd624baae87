//! Incremental row reduction over an exact field.
//!
//! [`EchelonBasis`] keeps its rows in *reduced* echelon form: every row is
//! zero in the pivot columns of all other rows. Reducing a new vector then
//! costs one pass over its entries, and rows only carry entries in the
//! (usually few) non-pivot columns. This is what makes streaming hundreds of
//! thousands of redundant spanning vectors through a basis affordable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sparse vector with sorted, nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVector<F> {
    dim: usize,
    entries: Vec<(usize, F)>,
}

impl<F: Field> SparseVector<F> {
    pub fn zero(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Result<Self> {
        Self::new(dim, vec![(index, F::one())])
    }

    /// Builds a vector from entries in any order; duplicates are summed and
    /// zeros dropped.
    pub fn new(dim: usize, mut entries: Vec<(usize, F)>) -> Result<Self> {
        if let Some(&(index, _)) = entries.iter().find(|(i, _)| *i >= dim) {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        entries.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, F)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.clone() + c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Ok(SparseVector { dim, entries: merged })
    }

    /// Caller guarantees sorted, distinct, in-range indices. Zeros are dropped.
    pub(crate) fn from_sorted(dim: usize, mut entries: Vec<(usize, F)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.last().is_none_or(|(i, _)| *i < dim));
        entries.retain(|(_, c)| !c.is_zero());
        SparseVector { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> F {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_sorted(self.dim, self.entries.iter().map(|(i, v)| (*i, v.clone() * c.clone())).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &F, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c.clone() * y.clone()));
                        b.next();
                    } else {
                        out.push((*i, x.clone() + c.clone() * y.clone()));
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c.clone() * y.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Ok(Self::from_sorted(self.dim, out))
    }
}

const NO_ROW: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum Row<F> {
    Sparse(Vec<(u32, F)>),
    Dense(Vec<F>),
}

impl<F: Field> Row<F> {
    fn get(&self, col: usize) -> F {
        match self {
            Row::Sparse(e) => match e.binary_search_by_key(&(col as u32), |(i, _)| *i) {
                Ok(pos) => e[pos].1.clone(),
                Err(_) => F::zero(),
            },
            Row::Dense(d) => d[col].clone(),
        }
    }

    fn nnz(&self) -> usize {
        match self {
            Row::Sparse(e) => e.len(),
            Row::Dense(d) => d.iter().filter(|c| !c.is_zero()).count(),
        }
    }

    fn to_vector(&self, dim: usize) -> SparseVector<F> {
        let entries = match self {
            Row::Sparse(e) => e.iter().map(|(i, c)| (*i as usize, c.clone())).collect(),
            Row::Dense(d) => d.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        };
        SparseVector { dim, entries }
    }

    /// `row -= c * other`, where `other` is sparse and sorted.
    fn sub_scaled(&mut self, c: &F, other: &[(u32, F)]) {
        match self {
            Row::Dense(d) => {
                for (j, v) in other {
                    let slot = &mut d[*j as usize];
                    *slot = slot.clone() - c.clone() * v.clone();
                }
            }
            Row::Sparse(e) => {
                let mut out = Vec::with_capacity(e.len() + other.len());
                let (mut a, mut b) = (0, 0);
                while a < e.len() || b < other.len() {
                    let ia = e.get(a).map_or(u32::MAX, |x| x.0);
                    let ib = other.get(b).map_or(u32::MAX, |x| x.0);
                    if ia < ib {
                        out.push(e[a].clone());
                        a += 1;
                    } else if ib < ia {
                        out.push((ib, -(c.clone() * other[b].1.clone())));
                        b += 1;
                    } else {
                        let v = e[a].1.clone() - c.clone() * other[b].1.clone();
                        if !v.is_zero() {
                            out.push((ia, v));
                        }
                        a += 1;
                        b += 1;
                    }
                }
                *e = out;
            }
        }
    }

    fn maybe_densify(&mut self, dim: usize, threshold: f64) {
        if let Row::Sparse(e) = self {
            if e.len() as f64 > threshold * dim as f64 {
                let mut d = vec![F::zero(); dim];
                for (i, c) in e.drain(..) {
                    d[i as usize] = c;
                }
                *self = Row::Dense(d);
            }
        }
    }
}

/// Rows in reduced echelon form, with least-index pivots normalized to 1.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    dim: usize,
    rows: Vec<Row<F>>,
    pivots: Vec<usize>,
    pivot_row: Vec<u32>,
    dense_threshold: f64,
    scratch: Vec<F>,
    touched: Vec<usize>,
    marked: Vec<bool>,
}

/// A row is stored densely once more than this fraction of it is nonzero.
pub const DEFAULT_DENSE_THRESHOLD: f64 = 0.25;

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        Self::with_dense_threshold(dim, DEFAULT_DENSE_THRESHOLD)
    }

    pub fn with_dense_threshold(dim: usize, dense_threshold: f64) -> Self {
        assert!(dim < NO_ROW as usize, "echelon basis dimension too large");
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NO_ROW; dim],
            dense_threshold,
            scratch: Vec::new(),
            touched: Vec::new(),
            marked: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot column of each row, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, r: usize) -> SparseVector<F> {
        self.rows[r].to_vector(self.dim)
    }

    pub fn rows(&self) -> impl Iterator<Item = SparseVector<F>> + '_ {
        self.rows.iter().map(|r| r.to_vector(self.dim))
    }

    /// Rows sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<SparseVector<F>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        order.into_iter().map(|r| self.row(r)).collect()
    }

    /// Number of dense rows; useful when tuning the threshold.
    pub fn dense_rows(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r, Row::Dense(_))).count()
    }

    fn ensure_scratch(&mut self) {
        if self.scratch.len() != self.dim {
            self.scratch = vec![F::zero(); self.dim];
            self.marked = vec![false; self.dim];
        }
    }

    fn touch(&mut self, i: usize) {
        if !self.marked[i] {
            self.marked[i] = true;
            self.touched.push(i);
        }
    }

    /// Eliminates `v` against every pivot, returning what is left.
    fn eliminate(&mut self, v: &SparseVector<F>) -> Result<Vec<(u32, F)>> {
        if v.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim });
        }
        self.ensure_scratch();
        for (i, c) in &v.entries {
            self.scratch[*i] = c.clone();
            self.touch(*i);
        }
        for (i, _) in &v.entries {
            let r = self.pivot_row[*i];
            if r == NO_ROW {
                continue;
            }
            // other rows vanish on this pivot column, so the entry is untouched
            let coef = std::mem::replace(&mut self.scratch[*i], F::zero());
            if coef.is_zero() {
                continue;
            }
            match &self.rows[r as usize] {
                Row::Sparse(e) => {
                    for (j, x) in e {
                        let j = *j as usize;
                        if j == *i {
                            continue;
                        }
                        self.scratch[j] = self.scratch[j].clone() - coef.clone() * x.clone();
                        if !self.marked[j] {
                            self.marked[j] = true;
                            self.touched.push(j);
                        }
                    }
                }
                Row::Dense(d) => {
                    for (j, x) in d.iter().enumerate() {
                        if j == *i || x.is_zero() {
                            continue;
                        }
                        self.scratch[j] = self.scratch[j].clone() - coef.clone() * x.clone();
                        if !self.marked[j] {
                            self.marked[j] = true;
                            self.touched.push(j);
                        }
                    }
                }
            }
        }
        self.touched.sort_unstable();
        let mut residual = Vec::new();
        for &j in &self.touched {
            let c = std::mem::replace(&mut self.scratch[j], F::zero());
            self.marked[j] = false;
            if !c.is_zero() {
                residual.push((j as u32, c));
            }
        }
        self.touched.clear();
        Ok(residual)
    }

    /// Residual of `v` modulo the row space, without inserting it.
    pub fn reduce(&mut self, v: &SparseVector<F>) -> Result<SparseVector<F>> {
        let residual = self.eliminate(v)?;
        Ok(SparseVector { dim: self.dim, entries: residual.into_iter().map(|(i, c)| (i as usize, c)).collect() })
    }

    pub fn contains(&mut self, v: &SparseVector<F>) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Reduces `v` against the basis. A nonzero residual is normalized,
    /// inserted as a new row, and returned with `true`.
    pub fn reduce_insert(&mut self, v: &SparseVector<F>) -> Result<(SparseVector<F>, bool)> {
        let mut residual = self.eliminate(v)?;
        if residual.is_empty() {
            return Ok((SparseVector::zero(self.dim), false));
        }
        let inv = residual[0].1.inverse().ok_or(Error::NotInvertible)?;
        for (_, c) in residual.iter_mut() {
            *c = c.clone() * inv.clone();
        }
        let pivot = residual[0].0 as usize;
        for row in self.rows.iter_mut() {
            let c = row.get(pivot);
            if !c.is_zero() {
                row.sub_scaled(&c, &residual);
                row.maybe_densify(self.dim, self.dense_threshold);
            }
        }
        let out =
            SparseVector { dim: self.dim, entries: residual.iter().map(|(i, c)| (*i as usize, c.clone())).collect() };
        let mut row = Row::Sparse(residual);
        row.maybe_densify(self.dim, self.dense_threshold);
        self.pivot_row[pivot] = self.rows.len() as u32;
        self.pivots.push(pivot);
        self.rows.push(row);
        Ok((out, true))
    }

    /// Inserts a row that is already known to be reduced and normalized,
    /// e.g. one read back from a cache. Verifies both claims.
    pub fn push_reduced_row(&mut self, v: SparseVector<F>) -> Result<()> {
        let (inserted_vec, inserted) = self.reduce_insert(&v)?;
        if !inserted || inserted_vec != v {
            return Err(Error::InvalidArgument("row is not reduced against the basis".into()));
        }
        Ok(())
    }

    /// Checks the reduced-echelon invariants. Intended for tests.
    pub fn check_invariants(&self) -> bool {
        let mut seen = vec![false; self.dim];
        for (r, row) in self.rows.iter().enumerate() {
            let p = self.pivots[r];
            if seen[p] || self.pivot_row[p] != r as u32 {
                return false;
            }
            seen[p] = true;
            let v = row.to_vector(self.dim);
            match v.entries.first() {
                Some((i, c)) if *i == p && *c == F::one() => {}
                _ => return false,
            }
            for (r2, &p2) in self.pivots.iter().enumerate() {
                if r2 != r && !row.get(p2).is_zero() {
                    return false;
                }
            }
            if row.nnz() == 0 {
                return false;
            }
        }
        true
    }
}

/// Rank of the matrix whose rows are `vectors`.
pub fn rank_of_stream<F: Field>(dim: usize, vectors: impl IntoIterator<Item = SparseVector<F>>) -> Result<usize> {
    let mut basis = EchelonBasis::new(dim);
    for v in vectors {
        basis.reduce_insert(&v)?;
    }
    Ok(basis.rank())
}
