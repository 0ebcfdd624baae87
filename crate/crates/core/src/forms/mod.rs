//! Polynomial differential forms on `V = C^n`.
//!
//! A [`FormMonomial`] is `x^α dx_S` with `S` kept as a bitmask, which is the
//! same thing as a strictly increasing index list and makes wedge signs a
//! popcount. Both `x_i` and `dx_i` have weight 1, so the weight of
//! `x^α dx_S` is `|α| + |S|`.
//!
//! Besides the wedge product and `d`, forms carry the deformed product
//! `a ⋆ b = a ∧ b + (-1)^{deg a} da ∧ db`, which is associative, and
//! [`phi_map`] sends the free algebra to `(Ω^even, ⋆)` with `x_i ↦ x_i`.

pub mod checks;
pub mod sample;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactrank::SparseVector;
use crate::ncpoly::{Multidegree, NcPoly, Word};
use crate::scalar::Field;

/// `x^α dx_{s_1} ∧ ... ∧ dx_{s_m}` with `s_1 < ... < s_m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormMonomial {
    exponents: Multidegree,
    /// bit `i` set means `dx_{i+1}` is present
    dx: u32,
}

impl FormMonomial {
    pub fn new(exponents: Multidegree, dx_indices: &[usize]) -> Result<Self> {
        let n = exponents.nvars();
        if n > 32 {
            return Err(Error::InvalidArgument("forms support at most 32 variables".into()));
        }
        let mut mask = 0u32;
        for w in dx_indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(format!("dx indices must increase: {dx_indices:?}")));
            }
        }
        for &i in dx_indices {
            if !(1..=n).contains(&i) {
                return Err(Error::InvalidLetter { letter: i, n });
            }
            mask |= 1 << (i - 1);
        }
        Ok(FormMonomial { exponents, dx: mask })
    }

    pub fn nvars(&self) -> usize {
        self.exponents.nvars()
    }

    pub fn exponents(&self) -> &Multidegree {
        &self.exponents
    }

    /// Indices in `S`, increasing and 1-based.
    pub fn dx_indices(&self) -> Vec<usize> {
        (0..32).filter(|i| self.dx >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.dx.count_ones() as usize
    }

    pub fn weight(&self) -> usize {
        self.exponents.total() + self.degree()
    }
}

impl fmt::Display for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.exponents.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                e => parts.push(format!("x{}^{e}", i + 1)),
            }
        }
        let dx: Vec<String> = self.dx_indices().iter().map(|i| format!("dx{i}")).collect();
        if !dx.is_empty() {
            parts.push(dx.join("^"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sign of `dx_S ∧ dx_T` relative to `dx_{S ∪ T}`, or `None` if they overlap.
fn wedge_sign(s: u32, t: u32) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (s >> j).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// Sparse polynomial differential form.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm<F> {
    n: usize,
    terms: BTreeMap<FormMonomial, F>,
}

impl<F: Field> DifferentialForm<F> {
    pub fn zero(n: usize) -> Self {
        DifferentialForm { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(FormMonomial { exponents: Multidegree::zero(n), dx: 0 }, F::one())
    }

    pub fn monomial(m: FormMonomial, c: F) -> Self {
        let mut f = Self::zero(m.nvars());
        f.add_term(m, c);
        f
    }

    fn check_index(n: usize, i: usize) -> Result<()> {
        if (1..=n).contains(&i) && n <= 32 {
            Ok(())
        } else {
            Err(Error::InvalidLetter { letter: i, n })
        }
    }

    /// The coordinate function `x_i` as a 0-form.
    pub fn x(n: usize, i: usize) -> Result<Self> {
        Self::check_index(n, i)?;
        let mut e = Multidegree::zero(n);
        e.0[i - 1] = 1;
        Ok(Self::monomial(FormMonomial { exponents: e, dx: 0 }, F::one()))
    }

    pub fn dx(n: usize, i: usize) -> Result<Self> {
        Self::check_index(n, i)?;
        Ok(Self::monomial(FormMonomial { exponents: Multidegree::zero(n), dx: 1 << (i - 1) }, F::one()))
    }

    /// `η_{i,j} = dx_i ∧ dx_j`, for any order of `i` and `j`.
    pub fn eta(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::dx(n, i)?.wedge(&Self::dx(n, j)?)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (FormMonomial, F)>) -> Result<Self> {
        let mut f = Self::zero(n);
        for (m, c) in terms {
            if m.nvars() != n {
                return Err(Error::AmbientMismatch { left: n, right: m.nvars() });
            }
            f.add_term(m, c);
        }
        Ok(f)
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

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FormMonomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    fn add_term(&mut self, m: FormMonomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
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
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    /// Degrees present among the terms, increasing.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(FormMonomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.degree() % 2 == 0)
    }

    /// The part of degree `deg`.
    pub fn degree_part(&self, deg: usize) -> Self {
        DifferentialForm {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The common weight of all terms, `None` for zero or mixed weights.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut ws = self.terms.keys().map(FormMonomial::weight);
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = Self::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let Some(negative) = wedge_sign(a.dx, b.dx) else { continue };
                let m = FormMonomial { exponents: a.exponents.add(&b.exponents), dx: a.dx | b.dx };
                let c = x.clone() * y.clone();
                out.add_term(m, if negative { -c } else { c });
            }
        }
        Ok(out)
    }

    /// The de Rham differential.
    pub fn de_rham(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            for i in 0..self.n {
                let e = m.exponents.0[i];
                if e == 0 || m.dx >> i & 1 == 1 {
                    continue;
                }
                let mut exps = m.exponents.clone();
                exps.0[i] -= 1;
                // moving dx_i past the dx_s with s < i
                let negative = (m.dx & ((1u32 << i) - 1)).count_ones() % 2 == 1;
                let coef = c.clone() * F::from_i64(e as i64);
                out.add_term(FormMonomial { exponents: exps, dx: m.dx | 1 << i }, if negative { -coef } else { coef });
            }
        }
        out
    }

    /// `ω₁ ⋆ ω₂ = ω₁ ∧ ω₂ + (-1)^{deg ω₁} dω₁ ∧ dω₂`, extended bilinearly
    /// over the homogeneous parts of `ω₁`.
    pub fn star(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let d_other = other.de_rham();
        let mut out = self.wedge(other)?;
        for deg in self.degrees() {
            let part = self.degree_part(deg);
            let correction = part.de_rham().wedge(&d_other)?;
            out = if deg % 2 == 0 { out.checked_add(&correction)? } else { out.checked_sub(&correction)? };
        }
        Ok(out)
    }

    /// `ω₁ ⋆ ω₂ - ω₂ ⋆ ω₁` for even forms.
    pub fn star_commutator(&self, other: &Self) -> Result<Self> {
        if !self.is_even() || !other.is_even() {
            return Err(Error::OddForm);
        }
        self.star(other)?.checked_sub(&other.star(self)?)
    }
}

impl<F: Field> fmt::Display for DifferentialForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for DifferentialForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> Add for &DifferentialForm<F> {
    type Output = DifferentialForm<F>;
    fn add(self, rhs: Self) -> DifferentialForm<F> {
        self.checked_add(rhs).expect("ambient mismatch in form sum")
    }
}

impl<F: Field> Sub for &DifferentialForm<F> {
    type Output = DifferentialForm<F>;
    fn sub(self, rhs: Self) -> DifferentialForm<F> {
        self.checked_sub(rhs).expect("ambient mismatch in form difference")
    }
}

impl<F: Field> Neg for &DifferentialForm<F> {
    type Output = DifferentialForm<F>;
    fn neg(self) -> DifferentialForm<F> {
        self.scale(&-F::one())
    }
}

pub fn wedge<F: Field>(a: &DifferentialForm<F>, b: &DifferentialForm<F>) -> Result<DifferentialForm<F>> {
    a.wedge(b)
}

pub fn de_rham<F: Field>(a: &DifferentialForm<F>) -> DifferentialForm<F> {
    a.de_rham()
}

pub fn star_product<F: Field>(a: &DifferentialForm<F>, b: &DifferentialForm<F>) -> Result<DifferentialForm<F>> {
    a.star(b)
}

pub fn star_commutator<F: Field>(a: &DifferentialForm<F>, b: &DifferentialForm<F>) -> Result<DifferentialForm<F>> {
    a.star_commutator(b)
}

/// Memoized images of words under `φ_n`, built by extending prefixes.
pub struct PhiMap<F: Field> {
    n: usize,
    memo: HashMap<Word, DifferentialForm<F>>,
    letters: Vec<DifferentialForm<F>>,
}

impl<F: Field> PhiMap<F> {
    pub fn new(n: usize) -> Result<Self> {
        let letters = (1..=n).map(|i| DifferentialForm::x(n, i)).collect::<Result<Vec<_>>>()?;
        let mut memo = HashMap::new();
        memo.insert(Word::unit(n), DifferentialForm::one(n));
        Ok(PhiMap { n, memo, letters })
    }

    /// `φ(w)`: the left-to-right ⋆-product of the letters of `w`.
    pub fn word(&mut self, w: &Word) -> Result<DifferentialForm<F>> {
        if w.nvars() != self.n {
            return Err(Error::AmbientMismatch { left: self.n, right: w.nvars() });
        }
        if let Some(f) = self.memo.get(w) {
            return Ok(f.clone());
        }
        let letters: Vec<usize> = w.letters().collect();
        let prefix = Word::new(self.n, &letters[..letters.len() - 1])?;
        let head = self.word(&prefix)?;
        let image = head.star(&self.letters[letters[letters.len() - 1] - 1])?;
        self.memo.insert(w.clone(), image.clone());
        Ok(image)
    }

    pub fn poly(&mut self, p: &NcPoly<F>) -> Result<DifferentialForm<F>> {
        if p.nvars() != self.n {
            return Err(Error::AmbientMismatch { left: self.n, right: p.nvars() });
        }
        let mut out = DifferentialForm::zero(self.n);
        for (w, c) in p.terms() {
            out = out.checked_add(&self.word(w)?.scale(c))?;
        }
        Ok(out)
    }
}

/// The algebra map `φ_n: (A_n, ·) → (Ω^even, ⋆)` with `x_i ↦ x_i`.
pub fn phi_map<F: Field>(p: &NcPoly<F>) -> Result<DifferentialForm<F>> {
    PhiMap::new(p.nvars())?.poly(p)
}

/// Monomial basis of the forms of a fixed weight and a chosen set of degrees.
pub struct FormBasis {
    n: usize,
    weight: usize,
    monomials: Vec<FormMonomial>,
    index: HashMap<FormMonomial, usize>,
}

impl FormBasis {
    pub fn new(n: usize, weight: usize, degrees: &[usize]) -> Result<Self> {
        if n > 32 {
            return Err(Error::InvalidArgument("forms support at most 32 variables".into()));
        }
        let mut monomials = Vec::new();
        for &deg in degrees {
            if deg > n || deg > weight {
                continue;
            }
            for mask in (0u32..(1u64 << n) as u32).filter(|m| m.count_ones() as usize == deg) {
                for exps in Multidegree::all_of_total(n, weight - deg) {
                    monomials.push(FormMonomial { exponents: exps, dx: mask });
                }
            }
        }
        monomials.sort();
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(FormBasis { n, weight, monomials, index })
    }

    /// Even degrees `0, 2, 4, ...` up to `n`.
    pub fn even(n: usize, weight: usize) -> Result<Self> {
        let degrees: Vec<usize> = (0..=n).step_by(2).collect();
        Self::new(n, weight, &degrees)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn monomials(&self) -> &[FormMonomial] {
        &self.monomials
    }

    pub fn vectorize<F: Field>(&self, form: &DifferentialForm<F>) -> Result<SparseVector<F>> {
        if form.nvars() != self.n {
            return Err(Error::AmbientMismatch { left: self.n, right: form.nvars() });
        }
        let entries = form
            .terms()
            .map(|(m, c)| {
                self.index
                    .get(m)
                    .map(|&i| (i, c.clone()))
                    .ok_or_else(|| Error::InvalidArgument(format!("{m} is outside the form basis")))
            })
            .collect::<Result<Vec<_>>>()?;
        SparseVector::new(self.len(), entries)
    }
}

/// `C(a, b)` for small arguments.
pub(crate) fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
}

/// `dim Ω^j` in weight `ℓ`: `C(n, j) · C(ℓ - j + n - 1, n - 1)`.
pub fn form_space_dim(n: usize, degree: usize, weight: usize) -> usize {
    if degree > n || degree > weight {
        return 0;
    }
    binomial(n, degree) * binomial(weight - degree + n - 1, n - 1)
}
