//! Words and noncommutative polynomials in `x_1, ..., x_n`.
//!
//! A [`Word`] is a monomial of the free associative algebra; letters are
//! 1-based. Within a fixed length, words are ordered by their base-`n`
//! encoding (first letter most significant), which is also the coordinate
//! order used by [`NcPoly::vectorize`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactrank::SparseVector;
use crate::scalar::Field;

/// Counts of each variable in a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if nonnegative in every coordinate.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Multidegree)
    }

    /// Entries sorted in decreasing order (the dominant weight in its orbit).
    pub fn sorted_desc(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Multidegree(v)
    }

    /// All exponent vectors in `n` variables with the given total.
    pub fn all_of_total(n: usize, total: usize) -> Vec<Multidegree> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Multidegree>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(Multidegree(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if total == 0 {
                out.push(Multidegree(Vec::new()));
            }
            return out;
        }
        rec(n, total as u32, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

/// A monomial `x_{i_1} x_{i_2} ... x_{i_l}` in `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    n: usize,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(n: usize, letters: &[usize]) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("unsupported variable count {n}")));
        }
        let letters = letters
            .iter()
            .map(|&l| if (1..=n).contains(&l) { Ok(l as u8) } else { Err(Error::InvalidLetter { letter: l, n }) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { n, letters })
    }

    /// The empty word, i.e. the unit of the algebra.
    pub fn unit(n: usize) -> Self {
        Word { n, letters: Vec::new() }
    }

    pub fn letter(n: usize, i: usize) -> Result<Self> {
        Word::new(n, &[i])
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().map(|&l| l as usize)
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch { left: self.n, right: other.n });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(k % self.letters.len());
        }
        Word { n: self.n, letters }
    }

    /// Lexicographically least rotation; two words share it iff they are
    /// cyclic rotations of each other. The unit maps to itself.
    pub fn cyclic_canonical(&self) -> Word {
        let len = self.len();
        if len == 0 {
            return self.clone();
        }
        let start = least_rotation(&self.letters);
        self.rotate_left(start)
    }

    pub fn multidegree(&self) -> Multidegree {
        let mut m = vec![0u32; self.n];
        for &l in &self.letters {
            m[l as usize - 1] += 1;
        }
        Multidegree(m)
    }

    /// Position among words of the same length in base-`n` order.
    /// `None` if `n^len` overflows.
    pub fn index(&self) -> Option<u64> {
        self.letters.iter().try_fold(0u64, |acc, &l| acc.checked_mul(self.n as u64)?.checked_add(l as u64 - 1))
    }

    /// Inverse of [`Word::index`].
    pub fn from_index(n: usize, len: usize, mut index: u64) -> Word {
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % n as u64) as u8 + 1;
            index /= n as u64;
        }
        Word { n, letters }
    }

    /// All words of the given length in increasing index order.
    pub fn all_of_len(n: usize, len: usize) -> impl Iterator<Item = Word> {
        let count = (n as u64).pow(len as u32);
        (0..count).map(move |i| Word::from_index(n, len, i))
    }
}

/// Booth's algorithm: start index of the least rotation.
fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let at = |i: usize| s[i % n];
    let mut fail = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != usize::MAX && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = fail[i];
        }
        if i == usize::MAX && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            fail[j - k] = usize::MAX;
        } else {
            fail[j - k] = if i == usize::MAX { 0 } else { i + 1 };
        }
    }
    k
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then(self.len().cmp(&other.len())).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

/// Sparse polynomial in the free associative algebra `A_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly<F> {
    n: usize,
    terms: BTreeMap<Word, F>,
}

impl<F: Field> NcPoly<F> {
    pub fn zero(n: usize) -> Self {
        NcPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(Word::unit(n), F::one())
    }

    pub fn var(n: usize, i: usize) -> Result<Self> {
        Ok(Self::from_word(Word::letter(n, i)?))
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(w, F::one())
    }

    pub fn monomial(w: Word, c: F) -> Self {
        let mut p = Self::zero(w.nvars());
        if !c.is_zero() {
            p.terms.insert(w, c);
        }
        p
    }

    /// Sums the given terms, dropping zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, F)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (w, c) in terms {
            if w.nvars() != n {
                return Err(Error::AmbientMismatch { left: n, right: w.nvars() });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        NcPoly { n: self.n, terms: self.terms.iter().map(|(w, a)| (w.clone(), a.clone() * c.clone())).collect() }
    }

    /// Product in `A_n`: bilinear extension of word concatenation.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = Self::zero(self.n);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v)?, a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    /// Commutator `pq - qp`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.lie_bracket(other).expect("bracket of polynomials in different ambient algebras")
    }

    /// The common length of all terms, `None` for zero or mixed lengths.
    pub fn homogeneous_len(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    /// Coordinates in the degree-`len` word basis (dimension `n^len`).
    pub fn vectorize(&self, len: usize) -> Result<SparseVector<F>> {
        let dim = ambient_dim(self.n, len).ok_or(Error::BudgetExceeded { n: self.n, len, cap: usize::MAX as u64 })?;
        let mut entries = Vec::with_capacity(self.terms.len());
        for (w, c) in &self.terms {
            if w.len() != len {
                return Err(Error::NotHomogeneous(len));
            }
            entries.push((w.index().expect("index fits when n^len does") as usize, c.clone()));
        }
        // BTreeMap order within a fixed length is index order
        Ok(SparseVector::from_sorted(dim, entries))
    }

    /// Inverse of [`NcPoly::vectorize`].
    pub fn devectorize(n: usize, len: usize, v: &SparseVector<F>) -> Self {
        NcPoly { n, terms: v.entries().iter().map(|(i, c)| (Word::from_index(n, len, *i as u64), c.clone())).collect() }
    }
}

/// `n^len` as a `usize`, if it fits.
pub fn ambient_dim(n: usize, len: usize) -> Option<usize> {
    n.checked_pow(u32::try_from(len).ok()?)
}

impl<F: Field> fmt::Display for NcPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){w}")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for NcPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> Add for &NcPoly<F> {
    type Output = NcPoly<F>;
    fn add(self, rhs: Self) -> NcPoly<F> {
        self.checked_add(rhs).expect("ambient mismatch in polynomial sum")
    }
}

impl<F: Field> Sub for &NcPoly<F> {
    type Output = NcPoly<F>;
    fn sub(self, rhs: Self) -> NcPoly<F> {
        self.checked_sub(rhs).expect("ambient mismatch in polynomial difference")
    }
}

impl<F: Field> Mul for &NcPoly<F> {
    type Output = NcPoly<F>;
    fn mul(self, rhs: Self) -> NcPoly<F> {
        self.checked_mul(rhs).expect("ambient mismatch in polynomial product")
    }
}

impl<F: Field> Neg for &NcPoly<F> {
    type Output = NcPoly<F>;
    fn neg(self) -> NcPoly<F> {
        NcPoly { n: self.n, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp31, Rational};

    type P = NcPoly<Rational>;

    fn w(n: usize, l: &[usize]) -> Word {
        Word::new(n, l).unwrap()
    }

    fn x(n: usize, i: usize) -> P {
        P::var(n, i).unwrap()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w(2, &[1, 2]).concat(&w(2, &[2])).unwrap(), w(2, &[1, 2, 2]));
        assert_eq!(Word::unit(3).concat(&w(3, &[3, 1])).unwrap(), w(3, &[3, 1]));
        assert_eq!(w(3, &[1]).concat(&w(3, &[2, 3])).unwrap(), w(3, &[1, 2, 3]));
        assert!(matches!(w(2, &[1]).concat(&w(3, &[1])), Err(Error::AmbientMismatch { left: 2, right: 3 })));
    }

    #[test]
    fn letters_validated() {
        assert!(matches!(Word::new(2, &[3]), Err(Error::InvalidLetter { letter: 3, n: 2 })));
        assert!(Word::new(2, &[0]).is_err());
    }

    #[test]
    fn product_examples() {
        let n = 2;
        let p = &x(n, 1) + &x(n, 2);
        let q = &x(n, 1) - &x(n, 2);
        let expect = P::from_terms(
            n,
            [
                (w(n, &[1, 1]), Rational::from_i64(1)),
                (w(n, &[1, 2]), Rational::from_i64(-1)),
                (w(n, &[2, 1]), Rational::from_i64(1)),
                (w(n, &[2, 2]), Rational::from_i64(-1)),
            ],
        )
        .unwrap();
        assert_eq!(&p * &q, expect);
        assert_eq!(&p * &P::one(n), p);
        let a = P::from_word(w(n, &[1, 2]));
        let b = P::from_word(w(n, &[2, 1]));
        assert_eq!(&a * &b, P::from_word(w(n, &[1, 2, 2, 1])));
        assert!(a.checked_mul(&P::one(3)).is_err());
    }

    #[test]
    fn bracket_examples() {
        let n = 3;
        let b = x(n, 1).bracket(&x(n, 2));
        assert_eq!(b, &P::from_word(w(n, &[1, 2])) - &P::from_word(w(n, &[2, 1])));
        let p = &x(n, 1) + &P::from_word(w(n, &[2, 3]));
        assert!(p.bracket(&p).is_zero());
        let jac = &(&x(n, 1).bracket(&x(n, 2).bracket(&x(n, 3))) + &x(n, 2).bracket(&x(n, 3).bracket(&x(n, 1))))
            + &x(n, 3).bracket(&x(n, 1).bracket(&x(n, 2)));
        assert!(jac.is_zero());
    }

    #[test]
    fn cyclic_canonical_examples() {
        assert_eq!(w(2, &[2, 1]).cyclic_canonical(), w(2, &[1, 2]));
        assert_eq!(w(2, &[1, 1]).cyclic_canonical(), w(2, &[1, 1]));
        assert_eq!(w(3, &[3, 1, 2]).cyclic_canonical(), w(3, &[1, 2, 3]));
        assert_eq!(Word::unit(2).cyclic_canonical(), Word::unit(2));
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        for len in 1..=7 {
            for word in Word::all_of_len(3, len) {
                let brute = (0..len).map(|k| word.rotate_left(k)).min().unwrap();
                assert_eq!(word.cyclic_canonical(), brute, "{word}");
            }
        }
    }

    #[test]
    fn vectorize_examples() {
        let n = 2;
        let v = P::from_word(w(n, &[1, 2])).vectorize(2).unwrap();
        assert_eq!(v.dim(), 4);
        assert_eq!(v.entries(), &[(1, Rational::from_i64(1))]);
        assert!(P::zero(n).vectorize(2).unwrap().is_zero());
        let b = x(n, 1).bracket(&x(n, 2)).vectorize(2).unwrap();
        assert_eq!(b.entries(), &[(1, Rational::from_i64(1)), (2, Rational::from_i64(-1))]);
        assert!(matches!(x(n, 1).vectorize(2), Err(Error::NotHomogeneous(2))));
    }

    #[test]
    fn index_roundtrip() {
        for word in Word::all_of_len(3, 4) {
            let i = word.index().unwrap();
            assert_eq!(Word::from_index(3, 4, i), word);
        }
        let words: Vec<_> = Word::all_of_len(2, 3).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn multidegrees_of_total() {
        let all = Multidegree::all_of_total(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|m| m.total() == 2));
        assert_eq!(Multidegree::all_of_total(1, 4), vec![Multidegree(vec![4])]);
    }

    #[test]
    fn prime_field_polys() {
        let a = NcPoly::<Fp31>::var(2, 1).unwrap();
        let b = NcPoly::<Fp31>::var(2, 2).unwrap();
        let c = a.bracket(&b);
        assert_eq!(c.num_terms(), 2);
        assert_eq!(c.homogeneous_len(), Some(2));
    }

    mod properties {
        use super::*;
        use crate::lcs::necklace_count;
        use proptest::prelude::*;
        use std::collections::BTreeSet;

        fn poly(n: usize, len: usize) -> impl Strategy<Value = P> {
            prop::collection::vec((prop::collection::vec(1..=n, len), -4i64..=4), 1..4).prop_map(move |terms| {
                P::from_terms(n, terms.into_iter().map(|(l, c)| (Word::new(n, &l).unwrap(), Rational::from_i64(c))))
                    .unwrap()
            })
        }

        fn triple() -> impl Strategy<Value = (P, P, P)> {
            (1usize..=4, 0usize..=2, 0usize..=2, 0usize..=2)
                .prop_flat_map(|(n, a, b, c)| (poly(n, a), poly(n, b), poly(n, c)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn bracket_antisymmetry_and_jacobi((a, b, c) in triple()) {
                prop_assert!((&a.bracket(&b) + &b.bracket(&a)).is_zero());
                let jacobi = &(&a.bracket(&b.bracket(&c)) + &b.bracket(&c.bracket(&a))) + &c.bracket(&a.bracket(&b));
                prop_assert!(jacobi.is_zero());
            }

            #[test]
            fn products_are_graded((a, b, c) in triple()) {
                let ab = &a * &b;
                if !ab.is_zero() {
                    prop_assert_eq!(ab.homogeneous_len(), Some(a.homogeneous_len().unwrap() + b.homogeneous_len().unwrap()));
                }
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            }

            #[test]
            fn multidegree_is_additive(n in 1usize..=4, u in prop::collection::vec(0usize..4, 0..6), v in prop::collection::vec(0usize..4, 0..6)) {
                let u: Vec<usize> = u.into_iter().map(|l| l % n + 1).collect();
                let v: Vec<usize> = v.into_iter().map(|l| l % n + 1).collect();
                let (wu, wv) = (w(n, &u), w(n, &v));
                let uv = wu.concat(&wv).unwrap();
                prop_assert_eq!(uv.multidegree(), wu.multidegree().add(&wv.multidegree()));
                prop_assert_eq!(uv.multidegree().total(), uv.len());
            }

            #[test]
            fn vectorize_is_linear(n in 1usize..=3, len in 0usize..=3, seed in any::<(i8, i8)>(),
                                   la in prop::collection::vec((prop::collection::vec(0usize..3, 3), -3i64..=3), 1..4),
                                   lb in prop::collection::vec((prop::collection::vec(0usize..3, 3), -3i64..=3), 1..4)) {
                let mk = |terms: &[(Vec<usize>, i64)]| {
                    P::from_terms(n, terms.iter().map(|(l, c)| {
                        let letters: Vec<usize> = l[..len].iter().map(|x| x % n + 1).collect();
                        (w(n, &letters), Rational::from_i64(*c))
                    })).unwrap()
                };
                let (p, q) = (mk(&la), mk(&lb));
                let (s, t) = (Rational::from_i64(seed.0 as i64), Rational::from_i64(seed.1 as i64));
                let combo = &p.scale(&s) + &q.scale(&t);
                let lhs = combo.vectorize(len).unwrap();
                let rhs = p.vectorize(len).unwrap().scale(&s).add_scaled(&t, &q.vectorize(len).unwrap()).unwrap();
                prop_assert_eq!(&lhs, &rhs);
                prop_assert_eq!(P::devectorize(n, len, &lhs), combo);
            }
        }

        #[test]
        fn cyclic_classes_count_necklaces() {
            for n in 1..=3usize {
                for len in 1..=7usize {
                    let classes: BTreeSet<Word> = Word::all_of_len(n, len).map(|w| w.cyclic_canonical()).collect();
                    assert_eq!(classes.len() as u128, necklace_count(n as u64, len as u64));
                }
            }
        }
    }
}
