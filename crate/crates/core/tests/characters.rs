//! Characters of the lower central series quotients and their coinduced fits.

use std::collections::BTreeMap;

use nclcs_core::chars::{
    coinduced_dim_series, decompose_character, fit_coinduced, fit_coinduced_characters, quotient_character,
    quotient_row, schur_dim, CharacterFit, Layer, Partition, SchurExpansion,
};
use nclcs_core::lcs::{LcsConfig, LcsEngine};
use nclcs_core::Fp31;

fn engine(n: usize) -> LcsEngine<Fp31> {
    LcsEngine::new(n, LcsConfig::default()).unwrap()
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn character_fit(e: &LcsEngine<Fp31>, k: usize, levels: std::ops::RangeInclusive<usize>) -> CharacterFit {
    let chars: BTreeMap<usize, SchurExpansion> = levels.map(|l| (l, quotient_character(e, k, l).unwrap())).collect();
    fit_coinduced_characters(&chars, e.nvars()).unwrap()
}

#[test]
fn row_fits_over_stated_ranges() {
    let e2 = engine(2);
    let e3 = engine(3);
    let cases: [(&LcsEngine<Fp31>, usize, std::ops::RangeInclusive<usize>, Vec<Layer>); 4] = [
        (&e2, 3, 3..=9, vec![Layer { dim: 2, level: 3 }]),
        (&e2, 4, 4..=9, vec![Layer { dim: 3, level: 4 }, Layer { dim: 2, level: 5 }]),
        (&e3, 3, 3..=6, vec![Layer { dim: 8, level: 3 }]),
        (&e3, 4, 4..=6, vec![Layer { dim: 18, level: 4 }, Layer { dim: 18, level: 5 }]),
    ];
    for (e, k, range, layers) in cases {
        let row = quotient_row(e, k, range.clone()).unwrap();
        let fit = fit_coinduced(&row, e.nvars()).unwrap();
        assert!(fit.is_exact(), "n={} k={k}: {fit:?}", e.nvars());
        assert_eq!(fit.layers, layers);
        for l in range.clone() {
            let resum: u64 = fit
                .layers
                .iter()
                .map(|ly| coinduced_dim_series(ly.dim, ly.level, e.nvars(), *range.end()).get(l))
                .sum();
            assert_eq!(resum, row.get(l));
        }
    }
}

#[test]
fn a34_level4_splits_into_dimensions_3_and_15() {
    let e = engine(3);
    let weights: BTreeMap<_, u64> =
        e.multigraded_quotient_dims(4, 4).unwrap().into_iter().map(|(a, d)| (a, d as u64)).collect();
    let exp = decompose_character(&weights, 3).unwrap();
    let mut dims: Vec<u64> = exp.iter().map(|(q, m)| m * schur_dim(q, 3).unwrap()).collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![3, 15]);
    assert_eq!(exp.components.values().sum::<u64>(), 2);
    // the expansion reproduces the weights it came from
    assert_eq!(exp.character().unwrap(), weights.into_iter().filter(|(_, v)| *v > 0).collect());
}

#[test]
fn free_lie_degree_three_is_adjoint_like() {
    let e = engine(3);
    assert_eq!(quotient_character(&e, 3, 3).unwrap(), SchurExpansion::single(p(&[2, 1]), 3));
}

#[test]
fn a34_character_layers() {
    let fit = character_fit(&engine(3), 4, 4..=6);
    assert!(fit.failure.is_none(), "{fit:?}");
    assert_eq!(fit.layers.len(), 2);
    for layer in &fit.layers {
        // each starting diagram has as many boxes as its level
        for (q, m) in layer.expansion.iter() {
            assert_eq!(q.size(), layer.level);
            assert_eq!(m, 1);
        }
        let mut dims: Vec<u64> = layer.expansion.iter().map(|(q, _)| schur_dim(q, 3).unwrap()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![3, 15]);
    }
    // computed shapes, kept as a regression check
    assert_eq!(fit.layers[0].expansion.to_string(), "s(3,1) + s(2,1,1)");
    assert_eq!(fit.layers[1].expansion.to_string(), "s(3,2) + s(2,2,1)");
}

#[test]
fn character_layers_agree_with_dimension_layers() {
    for (n, k, range) in [(2usize, 3usize, 3..=9usize), (2, 4, 4..=9), (3, 3, 3..=6), (3, 4, 4..=6)] {
        let e = engine(n);
        let fit = character_fit(&e, k, range.clone());
        assert!(fit.failure.is_none());
        let row = quotient_row(&e, k, range).unwrap();
        let dims = fit_coinduced(&row, n).unwrap();
        let from_chars: Vec<Layer> =
            fit.layers.iter().map(|ly| Layer { dim: ly.expansion.dim(), level: ly.level }).collect();
        assert_eq!(from_chars, dims.layers);
    }
}

#[test]
fn commutative_case_has_no_higher_quotients() {
    let e = engine(1);
    let row = quotient_row(&e, 2, 2..=4).unwrap();
    let fit = fit_coinduced(&row, 1).unwrap();
    assert!(fit.layers.is_empty() && fit.is_exact());
}
