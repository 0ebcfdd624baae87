//! Lower central series of the free associative algebra.
//!
//! `F_1 = A_n` and `F_k = [A_n, F_{k-1}]`. Brackets preserve multidegree, so
//! every `F_k` splits into independent cells `F_k^α`, one per exponent vector
//! `α`. [`LcsEngine`] computes and memoizes those cells as reduced echelon
//! bases in the word basis, and derives quotient dimensions
//! `dim A_{n,k}^ℓ = dim F_k^ℓ - dim F_{k+1}^ℓ` from them.

mod cache;
pub mod oracles;
mod table;

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactrank::{EchelonBasis, SparseVector, DEFAULT_DENSE_THRESHOLD};
use crate::ncpoly::{ambient_dim, Multidegree, NcPoly, Word};
use crate::scalar::Field;

pub use oracles::{necklace_count, witt_dim};
pub use table::{hilbert_table, hilbert_table_upto, BigradedTable, TABLE_SCHEMA_VERSION};

/// Default cap on the ambient dimension `n^ℓ` of a single length.
pub const DEFAULT_BUDGET: u64 = 1 << 18;

#[derive(Clone, Debug)]
pub struct LcsConfig {
    /// Largest `n^ℓ` the engine will touch.
    pub budget: u64,
    pub dense_threshold: f64,
    /// Directory for cached cells; `None` disables the cache.
    pub cache_dir: Option<PathBuf>,
}

impl Default for LcsConfig {
    fn default() -> Self {
        LcsConfig { budget: DEFAULT_BUDGET, dense_threshold: DEFAULT_DENSE_THRESHOLD, cache_dir: None }
    }
}

/// Basis of one multidegree cell `F_k^α`.
#[derive(Clone, Debug)]
pub struct Shard<F> {
    pub multidegree: Multidegree,
    /// Number of words of multidegree `α`.
    pub ambient: usize,
    /// Reduced echelon rows, sorted by pivot, in global word coordinates
    /// (dimension `n^ℓ`).
    pub rows: Vec<SparseVector<F>>,
}

impl<F> Shard<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// `F_k^ℓ` inside the degree-`ℓ` component, split by multidegree.
#[derive(Clone, Debug)]
pub struct FiltrationCell<F> {
    pub n: usize,
    pub k: usize,
    pub len: usize,
    pub shards: Vec<Arc<Shard<F>>>,
}

impl<F: Field> FiltrationCell<F> {
    pub fn dim(&self) -> usize {
        self.shards.iter().map(|s| s.rank()).sum()
    }

    pub fn ambient_dim(&self) -> usize {
        self.shards.iter().map(|s| s.ambient).sum()
    }

    pub fn dims_by_multidegree(&self) -> BTreeMap<Multidegree, usize> {
        self.shards.iter().map(|s| (s.multidegree.clone(), s.rank())).collect()
    }

    /// The union of the shard bases as one echelon basis of `F_k^ℓ`.
    pub fn basis(&self) -> Result<EchelonBasis<F>> {
        let dim = ambient_dim(self.n, self.len).expect("cell was computed within budget");
        let mut basis = EchelonBasis::new(dim);
        for shard in &self.shards {
            for row in &shard.rows {
                basis.push_reduced_row(row.clone())?;
            }
        }
        Ok(basis)
    }

    /// Basis elements as polynomials.
    pub fn basis_polys(&self) -> Vec<NcPoly<F>> {
        self.shards.iter().flat_map(|s| s.rows.iter()).map(|r| NcPoly::devectorize(self.n, self.len, r)).collect()
    }
}

type WordList = Arc<Vec<u64>>;

/// `n^len`, or [`Error::BudgetExceeded`] if it is above `budget`.
pub fn check_budget(n: usize, len: usize, budget: u64) -> Result<usize> {
    match ambient_dim(n, len) {
        Some(d) if d as u64 <= budget => Ok(d),
        _ => Err(Error::BudgetExceeded { n, len, cap: budget }),
    }
}

/// Memoizing engine for the cells `F_k^α` of `A_n` over the field `F`.
pub struct LcsEngine<F: Field> {
    n: usize,
    config: LcsConfig,
    words: RwLock<HashMap<Multidegree, WordList>>,
    shards: RwLock<HashMap<(usize, Multidegree), Arc<Shard<F>>>>,
    levels: RwLock<HashMap<(usize, usize), FiltrationCell<F>>>,
}

impl<F: Field> LcsEngine<F> {
    pub fn new(n: usize, config: LcsConfig) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("unsupported variable count {n}")));
        }
        Ok(LcsEngine {
            n,
            config,
            words: RwLock::new(HashMap::new()),
            shards: RwLock::new(HashMap::new()),
            levels: RwLock::new(HashMap::new()),
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &LcsConfig {
        &self.config
    }

    fn check_budget(&self, len: usize) -> Result<usize> {
        check_budget(self.n, len, self.config.budget)
    }

    fn check_args(&self, k: usize, alpha: &Multidegree) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidArgument("filtration index k starts at 1".into()));
        }
        if alpha.nvars() != self.n {
            return Err(Error::AmbientMismatch { left: self.n, right: alpha.nvars() });
        }
        Ok(())
    }

    /// Indices of the words of multidegree `alpha`, increasing.
    fn words_of(&self, alpha: &Multidegree) -> WordList {
        if let Some(w) = self.words.read().unwrap().get(alpha) {
            return w.clone();
        }
        let list = Arc::new(words_bounded_by(self.n, alpha, alpha.total()).into_iter().map(|(i, _)| i).collect());
        self.words.write().unwrap().entry(alpha.clone()).or_insert(list).clone()
    }

    /// The cell `F_k^α`, computing it (and its dependencies) if needed.
    pub fn shard(&self, k: usize, alpha: &Multidegree) -> Result<Arc<Shard<F>>> {
        self.check_args(k, alpha)?;
        let key = (k, alpha.clone());
        if let Some(s) = self.shards.read().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let built = Arc::new(self.build_shard(k, alpha)?);
        Ok(self.shards.write().unwrap().entry(key).or_insert(built).clone())
    }

    fn build_shard(&self, k: usize, alpha: &Multidegree) -> Result<Shard<F>> {
        let n = self.n;
        let len = alpha.total();
        let global_dim = self.check_budget(len)?;
        let words = self.words_of(alpha);
        if k == 1 {
            let rows =
                words.iter().map(|&w| SparseVector::from_sorted(global_dim, vec![(w as usize, F::one())])).collect();
            return Ok(Shard { multidegree: alpha.clone(), ambient: words.len(), rows });
        }
        // F_k sits inside F_{k-1}; once the rank reaches that bound we are done
        let upper = self.shard(k - 1, alpha)?.rank();
        let mut basis = EchelonBasis::with_dense_threshold(words.len(), self.config.dense_threshold);
        let local = |g: usize| -> usize { words.binary_search(&(g as u64)).expect("bracket preserves multidegree") };
        'outer: for j in 1..=(len + 1).saturating_sub(k) {
            if basis.rank() == upper {
                break;
            }
            let m = len - j;
            let (nj, nm) = (n.pow(j as u32), n.pow(m as u32));
            for (w, gamma) in words_bounded_by(n, alpha, j) {
                let prev = self.shard(k - 1, &gamma)?;
                let w = w as usize;
                for b in &prev.rows {
                    let mut entries = Vec::with_capacity(2 * b.nnz());
                    for (u, c) in b.entries() {
                        entries.push((local(w * nm + u), c.clone()));
                        entries.push((local(u * nj + w), -c.clone()));
                    }
                    let v = SparseVector::new(words.len(), entries)?;
                    basis.reduce_insert(&v)?;
                    if basis.rank() == upper {
                        break 'outer;
                    }
                }
            }
        }
        let rows = basis
            .sorted_rows()
            .into_iter()
            .map(|r| {
                let e = r.entries().iter().map(|(i, c)| (words[*i] as usize, c.clone())).collect();
                SparseVector::from_sorted(global_dim, e)
            })
            .collect();
        Ok(Shard { multidegree: alpha.clone(), ambient: words.len(), rows })
    }

    /// All of `F_k^ℓ`. Multidegree cells are computed in parallel once the
    /// cells of `F_{k-1}` in lower lengths are available.
    pub fn cell(&self, k: usize, len: usize) -> Result<FiltrationCell<F>> {
        if k == 0 {
            return Err(Error::InvalidArgument("filtration index k starts at 1".into()));
        }
        self.check_budget(len)?;
        if let Some(c) = self.levels.read().unwrap().get(&(k, len)) {
            return Ok(c.clone());
        }
        let cell = match self.load_cached(k, len)? {
            Some(cell) => cell,
            None => {
                if k > 1 {
                    for m in 0..len {
                        self.cell(k - 1, m)?;
                    }
                    self.cell(k - 1, len)?;
                }
                let alphas = Multidegree::all_of_total(self.n, len);
                let shards = alphas.par_iter().map(|a| self.shard(k, a)).collect::<Result<Vec<_>>>()?;
                let cell = FiltrationCell { n: self.n, k, len, shards };
                self.store_cached(&cell)?;
                cell
            }
        };
        self.levels.write().unwrap().insert((k, len), cell.clone());
        Ok(cell)
    }

    pub fn filtration_dim(&self, k: usize, len: usize) -> Result<usize> {
        Ok(self.cell(k, len)?.dim())
    }

    /// `dim A_{n,k}^ℓ`.
    pub fn quotient_dim(&self, k: usize, len: usize) -> Result<usize> {
        let upper = self.filtration_dim(k, len)?;
        let lower = self.filtration_dim(k + 1, len)?;
        Ok(upper - lower)
    }

    /// `dim A_{n,k}^{ℓ,α}` for every `α` of total `ℓ`.
    pub fn multigraded_quotient_dims(&self, k: usize, len: usize) -> Result<BTreeMap<Multidegree, usize>> {
        let upper = self.cell(k, len)?.dims_by_multidegree();
        let lower = self.cell(k + 1, len)?.dims_by_multidegree();
        Ok(upper
            .into_iter()
            .map(|(a, d)| {
                let l = lower[&a];
                (a, d - l)
            })
            .collect())
    }

    /// `dim A_{n,k}^{ℓ,α}` for a single multidegree, touching only the
    /// cells it depends on.
    pub fn quotient_dim_at(&self, k: usize, alpha: &Multidegree) -> Result<usize> {
        Ok(self.shard(k, alpha)?.rank() - self.shard(k + 1, alpha)?.rank())
    }

    fn load_cached(&self, k: usize, len: usize) -> Result<Option<FiltrationCell<F>>> {
        let Some(dir) = &self.config.cache_dir else { return Ok(None) };
        let Some(cell) = cache::read_cell::<F>(dir, self.n, k, len)? else { return Ok(None) };
        let mut shards = self.shards.write().unwrap();
        let cell_shards = cell
            .into_iter()
            .map(|s| shards.entry((k, s.multidegree.clone())).or_insert_with(|| Arc::new(s)).clone())
            .collect();
        Ok(Some(FiltrationCell { n: self.n, k, len, shards: cell_shards }))
    }

    fn store_cached(&self, cell: &FiltrationCell<F>) -> Result<()> {
        match &self.config.cache_dir {
            Some(dir) => cache::write_cell(dir, cell),
            None => Ok(()),
        }
    }
}

/// Convenience: `dim A_{n,k}^ℓ` with a fresh engine.
pub fn quotient_dim<F: Field>(n: usize, k: usize, len: usize, config: LcsConfig) -> Result<usize> {
    LcsEngine::<F>::new(n, config)?.quotient_dim(k, len)
}

/// Convenience: `F_k^ℓ` with a fresh engine.
pub fn graded_filtration_basis<F: Field>(
    n: usize,
    k: usize,
    len: usize,
    config: LcsConfig,
) -> Result<FiltrationCell<F>> {
    LcsEngine::<F>::new(n, config)?.cell(k, len)
}

/// Words `w` of length `len` whose multidegree `β` fits under `alpha`,
/// in increasing index order, paired with `alpha - β`.
fn words_bounded_by(n: usize, alpha: &Multidegree, len: usize) -> Vec<(u64, Multidegree)> {
    fn rec(n: usize, left: usize, rem: &mut Vec<u32>, idx: u64, out: &mut Vec<(u64, Multidegree)>) {
        if left == 0 {
            out.push((idx, Multidegree(rem.clone())));
            return;
        }
        for l in 0..n {
            if rem[l] > 0 {
                rem[l] -= 1;
                rec(n, left - 1, rem, idx * n as u64 + l as u64, out);
                rem[l] += 1;
            }
        }
    }
    let mut out = Vec::new();
    if len <= alpha.total() {
        rec(n, len, &mut alpha.0.clone(), 0, &mut out);
    }
    out
}

/// The word of a global index at a given length; handy for reports.
pub fn word_at(n: usize, len: usize, index: usize) -> Word {
    Word::from_index(n, len, index as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp31, Rational};

    fn engine(n: usize) -> LcsEngine<Fp31> {
        LcsEngine::new(n, LcsConfig::default()).unwrap()
    }

    #[test]
    fn filtration_basis_examples() {
        let cell = engine(2).cell(2, 2).unwrap();
        assert_eq!(cell.dim(), 1);
        let polys = cell.basis_polys();
        let x1 = NcPoly::<Fp31>::var(2, 1).unwrap();
        let x2 = NcPoly::<Fp31>::var(2, 2).unwrap();
        let br = x1.bracket(&x2);
        // the single basis element is a multiple of [x1, x2]
        let c = polys[0].coeff(&Word::new(2, &[1, 2]).unwrap());
        assert_eq!(polys[0], br.scale(&c));

        let e1 = engine(1);
        for len in 0..7 {
            assert_eq!(e1.filtration_dim(2, len).unwrap(), 0);
        }
        assert_eq!(engine(3).filtration_dim(2, 2).unwrap(), 3);
    }

    #[test]
    fn filtration_is_decreasing_and_vanishes_below_k() {
        let e = engine(2);
        for len in 0..=6 {
            assert_eq!(e.filtration_dim(1, len).unwrap(), 1 << len);
            for k in 1..=len + 1 {
                assert!(e.filtration_dim(k + 1, len).unwrap() <= e.filtration_dim(k, len).unwrap());
            }
            for k in (len + 1).max(2)..len + 3 {
                assert_eq!(e.filtration_dim(k, len).unwrap(), 0);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let e2 = engine(2);
        assert_eq!(e2.quotient_dim(2, 6).unwrap(), 5);
        for len in 3..=9 {
            assert_eq!(e2.quotient_dim(3, len).unwrap(), 2 * (len - 2), "len {len}");
        }
        assert_eq!(engine(3).quotient_dim(4, 4).unwrap(), 18);
    }

    #[test]
    fn zero_length_convention() {
        let e = engine(3);
        assert_eq!(e.quotient_dim(1, 0).unwrap(), 1);
        assert_eq!(e.quotient_dim(2, 0).unwrap(), 0);
    }

    #[test]
    fn multigraded_examples() {
        let e2 = engine(2);
        let m = e2.multigraded_quotient_dims(2, 2).unwrap();
        assert_eq!(m[&Multidegree(vec![1, 1])], 1);
        assert_eq!(m[&Multidegree(vec![2, 0])], 0);
        assert_eq!(m[&Multidegree(vec![0, 2])], 0);

        let e3 = engine(3);
        let m = e3.multigraded_quotient_dims(3, 3).unwrap();
        assert_eq!(m.values().sum::<usize>(), 8);
        assert_eq!(m[&Multidegree(vec![1, 1, 1])], 2);

        let m = e3.multigraded_quotient_dims(2, 4).unwrap();
        for (a, d) in &m {
            let mut p = a.0.clone();
            p.rotate_left(1);
            assert_eq!(m[&Multidegree(p.clone())], *d);
            p.swap(0, 1);
            assert_eq!(m[&Multidegree(p)], *d);
        }
        assert_eq!(m.values().sum::<usize>(), e3.quotient_dim(2, 4).unwrap());
    }

    #[test]
    fn single_multidegree_matches_full_cell() {
        let e = engine(3);
        let full = e.multigraded_quotient_dims(3, 5).unwrap();
        let fresh = engine(3);
        let a = Multidegree(vec![2, 2, 1]);
        assert_eq!(fresh.quotient_dim_at(3, &a).unwrap(), full[&a]);
    }

    #[test]
    fn rational_agrees_on_small_cells() {
        let q = LcsEngine::<Rational>::new(2, LcsConfig::default()).unwrap();
        let p = engine(2);
        for len in 1..=6 {
            for k in 1..=len {
                assert_eq!(q.quotient_dim(k, len).unwrap(), p.quotient_dim(k, len).unwrap());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let config = LcsConfig { budget: 100, ..LcsConfig::default() };
        let e = LcsEngine::<Fp31>::new(3, config).unwrap();
        assert!(e.quotient_dim(2, 4).is_ok());
        assert!(matches!(e.quotient_dim(2, 5), Err(Error::BudgetExceeded { n: 3, len: 5, cap: 100 })));
    }

    #[test]
    fn bounded_words_enumeration() {
        let a = Multidegree(vec![2, 1]);
        let ws = words_bounded_by(2, &a, 2);
        let idx: Vec<u64> = ws.iter().map(|(i, _)| *i).collect();
        // x1x1, x1x2, x2x1
        assert_eq!(idx, vec![0, 1, 2]);
        assert_eq!(ws[1].1, Multidegree(vec![1, 0]));
    }
}
