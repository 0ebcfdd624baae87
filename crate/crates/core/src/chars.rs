//! Partitions, `gl_n` characters, Pieri products, and fits of graded rows by
//! coinduced layers.
//!
//! A coinduced layer started at level `ℓ₀` from an irreducible of dimension
//! `d` contributes `d · C(ℓ - ℓ₀ + n - 1, n - 1)` in level `ℓ`; at the level
//! of characters it contributes `s_D · h_{ℓ-ℓ₀}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lcs::LcsEngine;
use crate::ncpoly::Multidegree;
use crate::scalar::Field;

/// A Young diagram: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The dominant rearrangement of a weight.
    pub fn from_weight(alpha: &Multidegree) -> Self {
        let mut parts: Vec<u32> = alpha.0.iter().copied().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.0.first().copied().unwrap_or(0);
        Partition((1..=width).map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32).collect())
    }

    /// As a weight of `gl_n`, padded with zeros.
    pub fn to_weight(&self, n: usize) -> Result<Multidegree> {
        if self.len() > n {
            return Err(Error::PartitionTooLong { len: self.len(), n });
        }
        let mut w = self.0.clone();
        w.resize(n, 0);
        Ok(Multidegree(w))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `dim F_λ` for `gl_n`, by the hook-content formula.
pub fn schur_dim(lambda: &Partition, n: usize) -> Result<u64> {
    if lambda.len() > n {
        return Err(Error::PartitionTooLong { len: lambda.len(), n });
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &row) in lambda.0.iter().enumerate() {
        for j in 0..row as usize {
            num *= (n + j - i) as u64;
            let hook = row as usize - j + conj.0[j] as usize - i - 1;
            den *= hook as u64;
        }
    }
    (num / den).to_u64().ok_or_else(|| Error::InvalidArgument(format!("dimension of {lambda} overflows")))
}

/// Partitions `μ ⊆ λ` with `λ/μ` a horizontal strip.
fn strips_below(lambda: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for (i, &top) in lambda.iter().enumerate() {
        let bottom = lambda.get(i + 1).copied().unwrap_or(0);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (bottom..=top).map(move |m| {
                    let mut p = prefix.clone();
                    p.push(m);
                    p
                })
            })
            .collect();
    }
    out
}

type Kostka = BTreeMap<Vec<u32>, u64>;

fn kostka_rec(lambda: &[u32], m: usize, memo: &mut HashMap<(Vec<u32>, usize), Kostka>) -> Kostka {
    if lambda.len() > m {
        return Kostka::new();
    }
    if m == 0 {
        return Kostka::from([(Vec::new(), 1)]);
    }
    let key = (lambda.to_vec(), m);
    if let Some(k) = memo.get(&key) {
        return k.clone();
    }
    let size: u32 = lambda.iter().sum();
    let mut out = Kostka::new();
    for mu in strips_below(lambda) {
        let removed = size - mu.iter().sum::<u32>();
        let mut mu = mu;
        while mu.last() == Some(&0) {
            mu.pop();
        }
        for (mut w, c) in kostka_rec(&mu, m - 1, memo) {
            w.push(removed);
            *out.entry(w).or_insert(0) += c;
        }
    }
    memo.insert(key, out.clone());
    out
}

/// Weight multiplicities of `F_λ` (Kostka numbers), by branching
/// `gl_n ⊃ gl_{n-1}` one variable at a time.
pub fn schur_monomial_expansion(lambda: &Partition, n: usize) -> Result<BTreeMap<Multidegree, u64>> {
    if lambda.len() > n {
        return Err(Error::PartitionTooLong { len: lambda.len(), n });
    }
    let mut memo = HashMap::new();
    Ok(kostka_rec(&lambda.0, n, &mut memo).into_iter().map(|(w, c)| (Multidegree(w), c)).collect())
}

/// Multiplicities of irreducible `gl_n` modules.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SchurExpansion {
    pub n: usize,
    pub components: BTreeMap<Partition, u64>,
}

#[derive(Serialize)]
struct SchurTerm<'a> {
    partition: &'a Partition,
    multiplicity: u64,
    dim: u64,
}

#[derive(Serialize)]
struct SchurExpansionJson<'a> {
    n: usize,
    dim: u64,
    components: Vec<SchurTerm<'a>>,
}

impl Serialize for SchurExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SchurExpansionJson {
            n: self.n,
            dim: self.dim(),
            components: self
                .iter()
                .map(|(p, m)| SchurTerm { partition: p, multiplicity: m, dim: schur_dim(p, self.n).unwrap_or(0) })
                .collect(),
        }
        .serialize(s)
    }
}

impl SchurExpansion {
    pub fn new(n: usize) -> Self {
        SchurExpansion { n, components: BTreeMap::new() }
    }

    pub fn single(lambda: Partition, n: usize) -> Self {
        SchurExpansion { n, components: BTreeMap::from([(lambda, 1)]) }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Components in decreasing lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u64)> {
        self.components.iter().rev().map(|(p, &m)| (p, m))
    }

    pub fn dim(&self) -> u64 {
        self.iter().map(|(p, m)| m * schur_dim(p, self.n).unwrap_or(0)).sum()
    }

    /// The weight multiplicities `Σ m_λ K_λ`.
    pub fn character(&self) -> Result<BTreeMap<Multidegree, u64>> {
        let mut out = BTreeMap::new();
        for (p, m) in self.iter() {
            for (w, c) in schur_monomial_expansion(p, self.n)? {
                *out.entry(w).or_insert(0) += m * c;
            }
        }
        Ok(out)
    }

    /// Product with `h_m`, dropping diagrams longer than `n`.
    pub fn times_h(&self, m: usize) -> SchurExpansion {
        let mut out = SchurExpansion::new(self.n);
        for (p, mult) in self.iter() {
            for mu in pieri_row(p, m) {
                if mu.len() <= self.n {
                    *out.components.entry(mu).or_insert(0) += mult;
                }
            }
        }
        out
    }
}

impl fmt::Display for SchurExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.iter().map(|(p, m)| if m == 1 { format!("s{p}") } else { format!("{m} s{p}") }).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn multinomial_orbit(parts: &[u32]) -> u64 {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &p in parts {
        *counts.entry(p).or_insert(0) += 1;
    }
    let fact = |k: u64| (1..=k).product::<u64>();
    counts.values().fold(fact(parts.len() as u64), |acc, &c| acc / fact(c))
}

/// Writes a symmetric weight function as a sum of irreducible characters,
/// peeling off the lexicographically greatest weight each round.
pub fn decompose_character(weights: &BTreeMap<Multidegree, u64>, n: usize) -> Result<SchurExpansion> {
    let mut orbits: BTreeMap<Vec<u32>, (u64, u64)> = BTreeMap::new();
    for (alpha, &v) in weights {
        if alpha.nvars() != n {
            return Err(Error::AmbientMismatch { left: n, right: alpha.nvars() });
        }
        if v == 0 {
            continue;
        }
        let key = alpha.sorted_desc().0;
        let entry = orbits.entry(key).or_insert((v, 0));
        if entry.0 != v {
            return Err(Error::NonSymmetric(alpha.0.clone()));
        }
        entry.1 += 1;
    }
    for (key, (_, seen)) in &orbits {
        if *seen != multinomial_orbit(key) {
            return Err(Error::NonSymmetric(key.clone()));
        }
    }

    let mut residual: BTreeMap<Multidegree, i64> =
        weights.iter().filter(|(_, &v)| v > 0).map(|(a, &v)| (a.clone(), v as i64)).collect();
    let mut out = SchurExpansion::new(n);
    while let Some((alpha, &mult)) = residual.last_key_value() {
        if mult < 0 {
            return Err(Error::NotSchurPositive { weight: alpha.0.clone(), multiplicity: mult });
        }
        let lambda = Partition::from_weight(alpha);
        for (w, c) in schur_monomial_expansion(&lambda, n)? {
            *residual.entry(w).or_insert(0) -= mult * c as i64;
        }
        residual.retain(|_, v| *v != 0);
        *out.components.entry(lambda).or_insert(0) += mult as u64;
    }
    Ok(out)
}

/// All `μ ⊇ λ` with `μ/λ` a horizontal strip of `boxes` boxes, in
/// decreasing lexicographic order.
pub fn pieri_row(lambda: &Partition, boxes: usize) -> Vec<Partition> {
    let parts = &lambda.0;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts.len() + 1);
    fn rec(parts: &[u32], i: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == parts.len() + 1 {
            if left == 0 {
                out.push(Partition::new(current.clone()).expect("horizontal strip keeps the shape"));
            }
            return;
        }
        let base = parts.get(i).copied().unwrap_or(0);
        let cap = if i == 0 { left } else { (parts[i - 1] - base).min(left) };
        for add in (0..=cap).rev() {
            current.push(base + add);
            rec(parts, i + 1, left - add, current, out);
            current.pop();
        }
    }
    rec(parts, 0, boxes as u32, &mut current, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// All `μ ⊇ λ` with `μ/λ` a vertical strip of `boxes` boxes, in decreasing
/// lexicographic order.
pub fn pieri_column(lambda: &Partition, boxes: usize) -> Vec<Partition> {
    let mut out: Vec<Partition> = pieri_row(&lambda.conjugate(), boxes).iter().map(Partition::conjugate).collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// One graded row of dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionSeries {
    pub values: BTreeMap<usize, u64>,
}

impl DimensionSeries {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u64)>) -> Self {
        DimensionSeries { values: pairs.into_iter().collect() }
    }

    /// Values at consecutive levels starting at `start`.
    pub fn from_start(start: usize, values: &[u64]) -> Self {
        Self::from_pairs(values.iter().enumerate().map(|(i, &v)| (start + i, v)))
    }

    pub fn get(&self, len: usize) -> u64 {
        self.values.get(&len).copied().unwrap_or(0)
    }

    pub fn levels(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }
}

fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1))
}

/// `ℓ ↦ dim_D · C(ℓ - ℓ₀ + n - 1, n - 1)` for `ℓ₀ <= ℓ <= ℓ_max`.
pub fn coinduced_dim_series(dim_d: u64, l0: usize, n: usize, l_max: usize) -> DimensionSeries {
    DimensionSeries::from_pairs(
        (l0..=l_max).map(|l| (l, dim_d * binomial((l - l0 + n - 1) as u64, n.saturating_sub(1) as u64))),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub dim: u64,
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitFailure {
    pub level: usize,
    pub residual: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinducedFit {
    pub n: usize,
    pub layers: Vec<Layer>,
    /// What is left after subtracting every layer, per level.
    pub residual: BTreeMap<usize, i64>,
    pub failure: Option<FitFailure>,
}

impl CoinducedFit {
    pub fn is_exact(&self) -> bool {
        self.failure.is_none() && self.residual.values().all(|&v| v == 0)
    }
}

/// Greedy fit: at the least level with a nonzero residual `v`, start a layer
/// of dimension `v` there; stop at the first negative residual.
pub fn fit_coinduced(series: &DimensionSeries, n: usize) -> Result<CoinducedFit> {
    let levels: Vec<usize> = series.levels().collect();
    if levels.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::InvalidArgument("series levels must be contiguous".into()));
    }
    let mut residual: BTreeMap<usize, i64> = series.values.iter().map(|(&l, &v)| (l, v as i64)).collect();
    let mut layers = Vec::new();
    let mut failure = None;
    let l_max = levels.last().copied().unwrap_or(0);
    for &l in &levels {
        let v = residual[&l];
        if v < 0 {
            failure = Some(FitFailure { level: l, residual: v });
            break;
        }
        if v > 0 {
            layers.push(Layer { dim: v as u64, level: l });
            for (lv, d) in coinduced_dim_series(v as u64, l, n, l_max).values {
                *residual.get_mut(&lv).expect("level in range") -= d as i64;
            }
        }
    }
    Ok(CoinducedFit { n, layers, residual, failure })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterLayer {
    pub level: usize,
    pub expansion: SchurExpansion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFailure {
    pub level: usize,
    pub partition: Partition,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterFit {
    pub n: usize,
    pub layers: Vec<CharacterLayer>,
    pub failure: Option<CharacterFailure>,
}

/// The character version of [`fit_coinduced`]: a layer `E` started at `ℓ₀`
/// contributes `E · h_{ℓ-ℓ₀}` at level `ℓ`, and each new layer is the
/// remaining character at the least level where something remains.
pub fn fit_coinduced_characters(levels: &BTreeMap<usize, SchurExpansion>, n: usize) -> Result<CharacterFit> {
    let keys: Vec<usize> = levels.keys().copied().collect();
    if keys.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::InvalidArgument("levels must be contiguous".into()));
    }
    let mut layers: Vec<CharacterLayer> = Vec::new();
    for (&l, observed) in levels {
        let mut residual: BTreeMap<Partition, i64> =
            observed.components.iter().map(|(p, &m)| (p.clone(), m as i64)).collect();
        for layer in &layers {
            for (p, m) in layer.expansion.times_h(l - layer.level).components {
                *residual.entry(p).or_insert(0) -= m as i64;
            }
        }
        residual.retain(|_, m| *m != 0);
        if let Some((p, &m)) = residual.iter().rev().find(|(_, &m)| m < 0) {
            let failure = CharacterFailure { level: l, partition: p.clone(), multiplicity: m };
            return Ok(CharacterFit { n, layers, failure: Some(failure) });
        }
        if !residual.is_empty() {
            let expansion =
                SchurExpansion { n, components: residual.into_iter().map(|(p, m)| (p, m as u64)).collect() };
            layers.push(CharacterLayer { level: l, expansion });
        }
    }
    Ok(CharacterFit { n, layers, failure: None })
}

/// The `gl_n` character of `A_{n,k}^ℓ`, decomposed into irreducibles.
pub fn quotient_character<F: Field>(engine: &LcsEngine<F>, k: usize, len: usize) -> Result<SchurExpansion> {
    let dims = engine.multigraded_quotient_dims(k, len)?;
    let weights = dims.into_iter().map(|(a, d)| (a, d as u64)).collect();
    decompose_character(&weights, engine.nvars())
}

/// `ℓ ↦ dim A_{n,k}^ℓ` over the given levels.
pub fn quotient_row<F: Field>(
    engine: &LcsEngine<F>,
    k: usize,
    levels: impl IntoIterator<Item = usize>,
) -> Result<DimensionSeries> {
    let pairs = levels.into_iter().map(|l| Ok((l, engine.quotient_dim(k, l)? as u64))).collect::<Result<Vec<_>>>()?;
    Ok(DimensionSeries::from_pairs(pairs))
}
