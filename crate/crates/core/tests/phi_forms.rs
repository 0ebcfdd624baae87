//! Closed forms, the image of commutators under φ, and the Λ² model, all
//! compared against the lower central series.

use nclcs_core::forms::checks::{closed_form_dim, lambda2_quotient_dim, theorem_2_2_check};
use nclcs_core::lcs::{LcsConfig, LcsEngine, DEFAULT_BUDGET};
use nclcs_core::{Fp31, Rational};

#[test]
fn phi_lcs_closed_forms_agree() {
    for (n, max_len) in [(2usize, 6usize), (3, 6), (4, 5)] {
        let e = LcsEngine::<Fp31>::new(n, LcsConfig::default()).unwrap();
        for len in 2..=max_len {
            let r = theorem_2_2_check(&e, len).unwrap();
            assert!(r.pass(), "{r:?}");
        }
    }
}

#[test]
fn second_commutator_quotient_formulas() {
    let e2 = LcsEngine::<Fp31>::new(2, LcsConfig::default()).unwrap();
    for len in 2..=9 {
        let r = theorem_2_2_check(&e2, len).unwrap();
        assert_eq!((r.lcs_dim, r.closed_sum, r.phi_rank), (len - 1, len - 1, len - 1));
    }
    let e3 = LcsEngine::<Fp31>::new(3, LcsConfig::default()).unwrap();
    for len in 2..=6 {
        let r = theorem_2_2_check(&e3, len).unwrap();
        assert_eq!(r.lcs_dim, len * len - 1);
    }
}

#[test]
fn top_degree_contributes_once_in_weight_four() {
    let e = LcsEngine::<Fp31>::new(4, LcsConfig::default()).unwrap();
    let r = theorem_2_2_check(&e, 4).unwrap();
    assert_eq!(r.closed_by_degree, vec![(2, closed_form_dim::<Fp31>(4, 2, 4).unwrap()), (4, 1)]);
    assert_eq!(r.lcs_dim, r.closed_by_degree[0].1 + 1);
}

#[test]
fn lambda2_model_matches_lcs() {
    for n in [2usize, 3] {
        let e = LcsEngine::<Fp31>::new(n, LcsConfig::default()).unwrap();
        for len in 0..=6 {
            let lcs = if len == 0 { 0 } else { e.quotient_dim(2, len).unwrap() };
            assert_eq!(lambda2_quotient_dim::<Fp31>(n, len, DEFAULT_BUDGET).unwrap(), lcs, "n={n} len={len}");
        }
    }
}

#[test]
fn rational_and_modular_checks_agree() {
    let eq = LcsEngine::<Rational>::new(3, LcsConfig::default()).unwrap();
    let ep = LcsEngine::<Fp31>::new(3, LcsConfig::default()).unwrap();
    for len in 2..=4 {
        assert_eq!(theorem_2_2_check(&eq, len).unwrap(), theorem_2_2_check(&ep, len).unwrap());
        assert_eq!(
            lambda2_quotient_dim::<Rational>(3, len, DEFAULT_BUDGET).unwrap(),
            lambda2_quotient_dim::<Fp31>(3, len, DEFAULT_BUDGET).unwrap()
        );
    }
}
