//! Symbolic identity checks and the dimension comparisons between the lower
//! central series, closed forms, and the `Λ²` model of `[A,A]/[A,[A,A]]`.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sample::random_even_form;
use super::{DifferentialForm, FormBasis, PhiMap};
use crate::error::Result;
use crate::exactrank::{EchelonBasis, SparseVector};
use crate::lcs::{check_budget, LcsEngine};
use crate::ncpoly::{NcPoly, Word};
use crate::scalar::Field;

/// Outcome of checking one identity over a family of instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub cases: usize,
    /// Rendered witnesses of the failing instances.
    pub violations: Vec<String>,
}

impl IdentityReport {
    fn new(identity: &str) -> Self {
        IdentityReport { identity: identity.to_string(), cases: 0, violations: Vec::new() }
    }

    fn record(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !holds {
            self.violations.push(witness());
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `η_ij ∧ η_kl + η_ik ∧ η_jl = 0` for every quadruple in `1..=n`.
pub fn verify_eta_relation<F: Field>(n: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("eta-relation");
    let eta = |i, j| DifferentialForm::<F>::eta(n, i, j);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let sum = eta(i, j)?.wedge(&eta(k, l)?)?.checked_add(&eta(i, k)?.wedge(&eta(j, l)?)?)?;
                    report.record(sum.is_zero(), || format!("({i},{j},{k},{l})"));
                }
            }
        }
    }
    Ok(report)
}

/// `[x_i,x_j][x_k,x_l] + [x_i,x_k][x_j,x_l]
///   = [[x_j,x_k],x_i x_l] + x_i[x_k,[x_j,x_l]] + [[x_i,x_j],x_k]x_l - [[x_i x_l,x_k],x_j]`
/// for every quadruple in `1..=n`.
pub fn verify_strange3<F: Field>(n: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("strange3");
    let x: Vec<NcPoly<F>> = (1..=n).map(|i| NcPoly::var(n, i)).collect::<Result<_>>()?;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let (xi, xj, xk, xl) = (&x[i], &x[j], &x[k], &x[l]);
                    let xil = xi * xl;
                    let lhs = &(&xi.bracket(xj) * &xk.bracket(xl)) + &(&xi.bracket(xk) * &xj.bracket(xl));
                    let rhs = &(&(&xj.bracket(xk).bracket(&xil) + &(xi * &xk.bracket(&xj.bracket(xl))))
                        + &(&xi.bracket(xj).bracket(xk) * xl))
                        - &xil.bracket(xk).bracket(xj);
                    report.record(lhs == rhs, || format!("({},{},{},{})", i + 1, j + 1, k + 1, l + 1));
                }
            }
        }
    }
    Ok(report)
}

/// `[t1, t2[t3,[t4,t5]]] = [[t3,t2],[t4,t5]t1] - [[t4,t5], t1t2t3]
///   + [[t4,t5], t1t3t2] + [t1,[t3,t2[t4,t5]]]`.
pub fn verify_lemma_2_2_1<F: Field>(t: &[Word; 5]) -> Result<bool> {
    let [t1, t2, t3, t4, t5] = t.each_ref().map(|w| NcPoly::<F>::from_word(w.clone()));
    for w in t.iter().skip(1) {
        if w.nvars() != t1.nvars() {
            return Err(crate::error::Error::AmbientMismatch { left: t1.nvars(), right: w.nvars() });
        }
    }
    let c45 = t4.bracket(&t5);
    let lhs = t1.bracket(&(&t2 * &t3.bracket(&c45)));
    let rhs = &(&(&t3.bracket(&t2).bracket(&(&c45 * &t1)) - &c45.bracket(&(&(&t1 * &t2) * &t3)))
        + &c45.bracket(&(&(&t1 * &t3) * &t2)))
        + &t1.bracket(&t3.bracket(&(&t2 * &c45)));
    Ok(lhs == rhs)
}

/// The same identity on `cases` seeded random tuples of words over `n`
/// letters with lengths in `1..=max_len`.
pub fn lemma_2_2_1_random<F: Field>(n: usize, cases: usize, max_len: usize, seed: u64) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport::new("lemma-2-2-1");
    for _ in 0..cases {
        let tuple: [Word; 5] = std::array::from_fn(|_| {
            let len = rng.gen_range(1..=max_len.max(1));
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=n)).collect();
            Word::new(n, &letters).expect("letters in range")
        });
        let holds = verify_lemma_2_2_1::<F>(&tuple)?;
        report.record(holds, || tuple.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","));
    }
    Ok(report)
}

/// Associativity of `⋆`, `[a,b]⋆ = 2 da∧db`, closedness of `[a,b]⋆`, and
/// vanishing of `[c,[a,b]⋆]⋆`, on `cases` seeded triples of random even
/// forms with `n <= n_max` and weight `<= max_weight`.
pub fn star_property_suite<F: Field>(
    n_max: usize,
    max_weight: usize,
    cases: usize,
    seed: u64,
) -> Result<Vec<IdentityReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc = IdentityReport::new("star-associativity");
    let mut comm = IdentityReport::new("star-commutator");
    let mut closed = IdentityReport::new("commutator-closed");
    let mut second = IdentityReport::new("second-commutator");
    for case in 0..cases {
        let n = rng.gen_range(1..=n_max.max(1));
        let a: DifferentialForm<F> = random_even_form(&mut rng, n, max_weight);
        let b: DifferentialForm<F> = random_even_form(&mut rng, n, max_weight);
        let c: DifferentialForm<F> = random_even_form(&mut rng, n, max_weight);
        let witness = || format!("case {case}: a = {a}; b = {b}; c = {c}");
        assoc.record(a.star(&b)?.star(&c)? == a.star(&b.star(&c)?)?, witness);
        let ab = a.star_commutator(&b)?;
        let two = F::from_i64(2);
        comm.record(ab == a.de_rham().wedge(&b.de_rham())?.scale(&two), witness);
        closed.record(ab.de_rham().is_zero(), witness);
        second.record(c.star_commutator(&ab)?.is_zero(), witness);
    }
    Ok(vec![assoc, comm, closed, second])
}

/// Dimension of closed `j`-forms of weight `ℓ`: the rank of `d` on weight-`ℓ`
/// `(j-1)`-forms for `j >= 1`, and the constants for `j = 0`.
pub fn closed_form_dim<F: Field>(n: usize, j: usize, len: usize) -> Result<usize> {
    if j == 0 {
        return Ok(usize::from(len == 0));
    }
    if j > n || j > len {
        return Ok(0);
    }
    let source = FormBasis::new(n, len, &[j - 1])?;
    let target = FormBasis::new(n, len, &[j])?;
    let mut basis = EchelonBasis::<F>::new(target.len());
    for m in source.monomials() {
        let image = DifferentialForm::monomial(m.clone(), F::one()).de_rham();
        basis.reduce_insert(&target.vectorize(&image)?)?;
        if basis.rank() == target.len() {
            break;
        }
    }
    Ok(basis.rank())
}

/// The three dimensions identified by `φ` on `[A,A]/[A,[A,A]]` in one
/// length, plus the supporting checks on the image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem22Report {
    pub n: usize,
    pub len: usize,
    /// `dim A_{n,2}^ℓ` from the lower central series.
    pub lcs_dim: usize,
    /// `(j, dim closed j-forms)` for even `j >= 2`.
    pub closed_by_degree: Vec<(usize, usize)>,
    pub closed_sum: usize,
    /// Rank of `φ([A,A]^ℓ)`.
    pub phi_rank: usize,
    /// Every `φ([a,b])` is closed and has no 0-form part.
    pub images_closed: bool,
    pub images_positive_degree: bool,
    /// Rank of `φ` on all words of length `ℓ` against `dim Ω^even_ℓ`.
    pub phi_full_rank: usize,
    pub even_dim: usize,
}

impl Theorem22Report {
    pub fn counts_agree(&self) -> bool {
        self.lcs_dim == self.closed_sum && self.closed_sum == self.phi_rank
    }

    pub fn surjective(&self) -> bool {
        self.phi_full_rank == self.even_dim
    }

    pub fn pass(&self) -> bool {
        self.counts_agree() && self.surjective() && self.images_closed && self.images_positive_degree
    }
}

pub fn theorem_2_2_check<F: Field>(engine: &LcsEngine<F>, len: usize) -> Result<Theorem22Report> {
    let n = engine.nvars();
    check_budget(n, len, engine.config().budget)?;
    let lcs_dim = if len == 0 { 0 } else { engine.quotient_dim(2, len)? };
    let closed_by_degree: Vec<(usize, usize)> =
        (2..=n).step_by(2).map(|j| Ok((j, closed_form_dim::<F>(n, j, len)?))).collect::<Result<_>>()?;
    let closed_sum = closed_by_degree.iter().map(|(_, d)| d).sum();

    let even = FormBasis::even(n, len)?;
    let mut phi = PhiMap::<F>::new(n)?;
    let words: Vec<Word> = Word::all_of_len(n, len).collect();
    let images: HashMap<&Word, SparseVector<F>> =
        words.iter().map(|w| Ok((w, even.vectorize(&phi.word(w)?)?))).collect::<Result<_>>()?;

    let mut full = EchelonBasis::<F>::new(even.len());
    for w in &words {
        full.reduce_insert(&images[w])?;
        if full.rank() == even.len() {
            break;
        }
    }

    // w - rot(w) over all words spans [A,A]^ℓ
    let mut commutators = EchelonBasis::<F>::new(even.len());
    let mut images_closed = true;
    let mut images_positive_degree = true;
    for w in &words {
        let r = w.rotate_left(1);
        if r == *w {
            continue;
        }
        let v = images[w].add_scaled(&-F::one(), &images[&r])?;
        let form = phi.word(w)?.checked_sub(&phi.word(&r)?)?;
        images_closed &= form.de_rham().is_zero();
        images_positive_degree &= form.degree_part(0).is_zero();
        commutators.reduce_insert(&v)?;
    }

    Ok(Theorem22Report {
        n,
        len,
        lcs_dim,
        closed_by_degree,
        closed_sum,
        phi_rank: commutators.rank(),
        images_closed,
        images_positive_degree,
        phi_full_rank: full.rank(),
        even_dim: even.len(),
    })
}

/// Dimension of the weight-`ℓ` part of `Λ²(A/[A,A])` modulo the relations
/// `(a1a2)∧a3 + (a2a3)∧a1 + (a3a1)∧a2 = 0` over all monomial triples.
///
/// The basis is unordered pairs `{a, b}` of distinct cyclic classes (the empty
/// word included) with `|a| + |b| = ℓ`, oriented so that `a < b`.
pub fn lambda2_quotient_dim<F: Field>(n: usize, len: usize, budget: u64) -> Result<usize> {
    check_budget(n, len, budget)?;
    let classes: Vec<Vec<Word>> = (0..=len)
        .map(|m| Word::all_of_len(n, m).map(|w| w.cyclic_canonical()).collect::<BTreeSet<_>>().into_iter().collect())
        .collect();
    let mut index: HashMap<(Word, Word), usize> = HashMap::new();
    for m in 0..=len / 2 {
        for a in &classes[m] {
            for b in &classes[len - m] {
                if a < b {
                    let next = index.len();
                    index.insert((a.clone(), b.clone()), next);
                }
            }
        }
    }
    let dim = index.len();
    let mut basis = EchelonBasis::<F>::new(dim);
    let pair = |x: &Word, y: &Word| -> Option<(usize, F)> {
        let (x, y) = (x.cyclic_canonical(), y.cyclic_canonical());
        match x.cmp(&y) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some((index[&(x, y)], F::one())),
            std::cmp::Ordering::Greater => Some((index[&(y, x)], -F::one())),
        }
    };
    'outer: for l1 in 0..=len {
        for l2 in 0..=len - l1 {
            let l3 = len - l1 - l2;
            for a1 in Word::all_of_len(n, l1) {
                for a2 in Word::all_of_len(n, l2) {
                    for a3 in Word::all_of_len(n, l3) {
                        if basis.rank() == dim {
                            break 'outer;
                        }
                        let entries: Vec<(usize, F)> =
                            [pair(&a1.concat(&a2)?, &a3), pair(&a2.concat(&a3)?, &a1), pair(&a3.concat(&a1)?, &a2)]
                                .into_iter()
                                .flatten()
                                .collect();
                        basis.reduce_insert(&SparseVector::new(dim, entries)?)?;
                    }
                }
            }
        }
    }
    Ok(dim - basis.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::form_space_dim;
    use crate::lcs::{LcsConfig, DEFAULT_BUDGET};
    use crate::scalar::{Fp31, Rational};

    fn w(n: usize, letters: &[usize]) -> Word {
        Word::new(n, letters).unwrap()
    }

    /// Exactness of the weight-ℓ de Rham complex for ℓ > 0: closed j-forms
    /// have dimension Σ_{i >= j} (-1)^{i-j} dim Ω^i_ℓ.
    fn closed_dim_oracle(n: usize, j: usize, len: usize) -> i64 {
        (j..=n).map(|i| (if (i - j) % 2 == 0 { 1 } else { -1 }) * form_space_dim(n, i, len) as i64).sum()
    }

    #[test]
    fn closed_form_examples() {
        for len in 1..=9 {
            assert_eq!(closed_form_dim::<Rational>(2, 2, len).unwrap(), len - 1);
        }
        for len in 1..=7 {
            assert_eq!(closed_form_dim::<Rational>(3, 2, len).unwrap(), len * len - 1);
        }
        assert_eq!(closed_form_dim::<Rational>(4, 4, 4).unwrap(), 1);
        assert_eq!(closed_form_dim::<Rational>(3, 0, 0).unwrap(), 1);
        assert_eq!(closed_form_dim::<Rational>(3, 0, 2).unwrap(), 0);
    }

    #[test]
    fn closed_form_dims_match_exactness_oracle() {
        for n in 1..=4 {
            for len in 1..=6 {
                for j in 1..=n {
                    let got = closed_form_dim::<Fp31>(n, j, len).unwrap() as i64;
                    assert_eq!(got, closed_dim_oracle(n, j, len), "n={n} j={j} len={len}");
                }
            }
        }
    }

    #[test]
    fn eta_relation_holds() {
        let r = verify_eta_relation::<Rational>(4).unwrap();
        assert!(r.holds());
        assert_eq!(r.cases, 256);
        let r = verify_eta_relation::<Rational>(5).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        let e = |i, j| DifferentialForm::<Rational>::eta(4, i, j).unwrap();
        assert!(e(1, 2).wedge(&e(3, 4)).unwrap().checked_add(&e(1, 3).wedge(&e(2, 4)).unwrap()).unwrap().is_zero());
        assert!(!e(1, 2).wedge(&e(3, 4)).unwrap().is_zero());
    }

    #[test]
    fn strange3_holds() {
        assert_eq!(verify_strange3::<Rational>(2).unwrap().cases, 16);
        assert!(verify_strange3::<Rational>(2).unwrap().holds());
        let r = verify_strange3::<Rational>(4).unwrap();
        assert_eq!(r.cases, 256);
        assert!(r.holds(), "{:?}", r.violations);
    }

    #[test]
    fn strange3_detects_a_wrong_sign() {
        // flipping the last sign of the right-hand side breaks the identity
        let n = 4;
        let x = |i| NcPoly::<Rational>::var(n, i).unwrap();
        let (xi, xj, xk, xl) = (x(1), x(2), x(3), x(4));
        let xil = &xi * &xl;
        let lhs = &(&xi.bracket(&xj) * &xk.bracket(&xl)) + &(&xi.bracket(&xk) * &xj.bracket(&xl));
        let wrong = &(&(&xj.bracket(&xk).bracket(&xil) + &(&xi * &xk.bracket(&xj.bracket(&xl))))
            + &(&xi.bracket(&xj).bracket(&xk) * &xl))
            + &xil.bracket(&xk).bracket(&xj);
        assert_ne!(lhs, wrong);
    }

    #[test]
    fn commutator_identity_examples() {
        let n = 2;
        let t = [w(n, &[1]), w(n, &[2]), w(n, &[1]), w(n, &[2]), w(n, &[1])];
        assert!(verify_lemma_2_2_1::<Rational>(&t).unwrap());
        let ones = std::array::from_fn(|_| w(n, &[1]));
        assert!(verify_lemma_2_2_1::<Rational>(&ones).unwrap());
        let r = lemma_2_2_1_random::<Rational>(3, 100, 3, 7).unwrap();
        assert_eq!(r.cases, 100);
        assert!(r.holds(), "{:?}", r.violations);
    }

    #[test]
    fn star_suite_passes() {
        for r in star_property_suite::<Rational>(4, 5, 120, 11).unwrap() {
            assert_eq!(r.cases, 120);
            assert!(r.holds(), "{}: {:?}", r.identity, r.violations);
        }
    }

    #[test]
    fn phi_dimension_agreement_small_cases() {
        let e2 = LcsEngine::<Fp31>::new(2, LcsConfig::default()).unwrap();
        for len in 2..=7 {
            let r = theorem_2_2_check(&e2, len).unwrap();
            assert!(r.pass(), "{r:?}");
            assert_eq!(r.lcs_dim, len - 1);
        }
        let e4 = LcsEngine::<Fp31>::new(4, LcsConfig::default()).unwrap();
        let r = theorem_2_2_check(&e4, 4).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.closed_by_degree[1], (4, 1));
        assert_eq!(r.closed_by_degree[0].1 + 1, r.lcs_dim);
    }

    #[test]
    fn lambda2_examples() {
        for len in 2..=7 {
            assert_eq!(lambda2_quotient_dim::<Fp31>(2, len, DEFAULT_BUDGET).unwrap(), len - 1);
        }
        assert_eq!(lambda2_quotient_dim::<Rational>(3, 4, DEFAULT_BUDGET).unwrap(), 15);
        assert_eq!(lambda2_quotient_dim::<Rational>(2, 2, DEFAULT_BUDGET).unwrap(), 1);
        assert!(lambda2_quotient_dim::<Fp31>(3, 6, 100).is_err());
    }
}
