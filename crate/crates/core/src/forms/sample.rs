//! Seeded random forms for property suites.

use rand::Rng;

use super::{DifferentialForm, FormMonomial};
use crate::ncpoly::Multidegree;
use crate::scalar::Field;

/// A random monomial of the given weight and degree, or `None` if none exists.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, n: usize, weight: usize, degree: usize) -> Option<FormMonomial> {
    if degree > n || degree > weight || n == 0 || n > 32 {
        return None;
    }
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..degree {
        let j = rng.gen_range(i..n);
        indices.swap(i, j);
    }
    let mask = indices[..degree].iter().fold(0u32, |m, &i| m | 1 << i);
    let mut exps = Multidegree::zero(n);
    for _ in 0..weight - degree {
        exps.0[rng.gen_range(0..n)] += 1;
    }
    Some(FormMonomial { exponents: exps, dx: mask })
}

/// A random form with up to `terms` terms of the given weight, degrees drawn
/// from `degrees`, and coefficients in `-5..=5`.
pub fn random_form<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    weight: usize,
    degrees: &[usize],
    terms: usize,
) -> DifferentialForm<F> {
    let mut f = DifferentialForm::zero(n);
    for _ in 0..terms {
        let deg = degrees[rng.gen_range(0..degrees.len())];
        if let Some(m) = random_monomial(rng, n, weight, deg) {
            f.add_term(m, F::from_i64(rng.gen_range(-5..=5)));
        }
    }
    f
}

/// A random even form of weight at most `max_weight`, homogeneous in weight.
pub fn random_even_form<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize, max_weight: usize) -> DifferentialForm<F> {
    let weight = rng.gen_range(0..=max_weight);
    let degrees: Vec<usize> = (0..=n.min(weight)).step_by(2).collect();
    let terms = rng.gen_range(1..=4);
    random_form(rng, n, weight, &degrees, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_forms_have_requested_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let f: DifferentialForm<Rational> = random_even_form(&mut rng, n, 5);
            assert!(f.is_even());
            assert!(f.is_zero() || f.homogeneous_weight().unwrap() <= 5);
        }
        assert!(random_monomial(&mut rng, 2, 1, 2).is_none());
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let a: DifferentialForm<Rational> = random_even_form(&mut ChaCha8Rng::seed_from_u64(9), 4, 5);
        let b: DifferentialForm<Rational> = random_even_form(&mut ChaCha8Rng::seed_from_u64(9), 4, 5);
        assert_eq!(a, b);
    }
}
