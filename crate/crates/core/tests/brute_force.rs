//! Brute-force joint path sums checked against the library.
//!
//! The oracle here walks the pyramid on its own, straight from the wiring
//! rule, and sums `i^{reflections}` over every joint route of all photons.
//! The scale `1/√2^{L(N+M)}` is common to all routes, so the sums are plain
//! Gaussian integers in `i64`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use qrw::{
    build_network, dense_simulate, expand, onefold_distribution, propagate_single, transfer_matrix,
    FockVector, HalfPowerAmplitude, InputSide, Limits, StateExpansion,
};

/// `(detector, reflections)` for every route of one photon.
fn oracle_routes(level: usize, from_left: bool) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << level) {
        let mut splitter = 1usize;
        let mut on_left = from_left;
        let mut reflections = 0;
        let mut port = 0;
        for step in 0..level {
            let reflect = mask >> step & 1 == 0;
            let exit_left = if reflect { on_left } else { !on_left };
            if reflect {
                reflections += 1;
            }
            port = if exit_left {
                2 * splitter - 1
            } else {
                2 * splitter
            };
            // Left output of splitter j feeds the right input of splitter j
            // one level down; right output feeds the left input of j + 1.
            if exit_left {
                on_left = false;
            } else {
                splitter += 1;
                on_left = true;
            }
        }
        out.push((port, reflections));
    }
    out
}

fn i_pow(r: u32) -> (i64, i64) {
    match r % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

/// Occupations → Σ i^{total reflections} over all joint routes.
fn oracle_coefficients(level: usize, n: usize, m: usize) -> BTreeMap<Vec<u32>, (i64, i64)> {
    let left = oracle_routes(level, true);
    let right = oracle_routes(level, false);
    let photons: Vec<&Vec<(usize, u32)>> = std::iter::repeat_n(&left, n)
        .chain(std::iter::repeat_n(&right, m))
        .collect();
    let mut out: BTreeMap<Vec<u32>, (i64, i64)> = BTreeMap::new();
    let mut idx = vec![0usize; photons.len()];
    let per = 1usize << level;
    loop {
        let mut occ = vec![0u32; 2 * level];
        let mut refl = 0;
        for (p, &i) in photons.iter().zip(&idx) {
            let (d, r) = p[i];
            occ[d - 1] += 1;
            refl += r;
        }
        let (a, b) = i_pow(refl);
        let e = out.entry(occ).or_insert((0, 0));
        e.0 += a;
        e.1 += b;

        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < per {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    out.retain(|_, c| *c != (0, 0));
    out
}

fn lib_state(level: usize, n: usize, m: usize) -> StateExpansion {
    let limits = Limits::default();
    let tm = transfer_matrix(&build_network(level, &limits).unwrap()).unwrap();
    expand(&tm, n, m, &limits).unwrap()
}

fn assert_matches_oracle(state: &StateExpansion, oracle: &BTreeMap<Vec<u32>, (i64, i64)>) {
    assert_eq!(state.len(), oracle.len(), "term count");
    for (occ, &(re, im)) in oracle {
        let term = state
            .term(&FockVector::new(occ.clone()))
            .unwrap_or_else(|| panic!("missing term {occ:?}"));
        assert_eq!(term.coefficient().re, BigInt::from(re), "{occ:?}");
        assert_eq!(term.coefficient().im, BigInt::from(im), "{occ:?}");
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn expansion_matches_joint_path_sum() {
    for level in 1..=4 {
        for t in 1..=3 {
            for n in 0..=t {
                let oracle = oracle_coefficients(level, n, t - n);
                assert_matches_oracle(&lib_state(level, n, t - n), &oracle);
            }
        }
    }
    for level in 1..=3 {
        for n in 0..=4 {
            assert_matches_oracle(
                &lib_state(level, n, 4 - n),
                &oracle_coefficients(level, n, 4 - n),
            );
        }
    }
}

#[test]
fn dense_matches_joint_path_sum() {
    let limits = Limits::default();
    for level in 1..=3 {
        for t in 1..=3 {
            for n in 0..=t {
                let net = build_network(level, &limits).unwrap();
                let dense = dense_simulate(&net, n, t - n, &limits).unwrap();
                assert_matches_oracle(&dense, &oracle_coefficients(level, n, t - n));
            }
        }
    }
}

// Single-photon columns frozen from the oracle.

fn oracle_column(level: usize, from_left: bool) -> Vec<HalfPowerAmplitude> {
    let mut sums = vec![(0i64, 0i64); 2 * level];
    for (d, r) in oracle_routes(level, from_left) {
        let (a, b) = i_pow(r);
        sums[d - 1].0 += a;
        sums[d - 1].1 += b;
    }
    sums.into_iter()
        .map(|(a, b)| HalfPowerAmplitude::new(a, b, level as u32))
        .collect()
}

#[test]
fn level_two_left_column_is_frozen() {
    let frozen = vec![
        HalfPowerAmplitude::new(0, 1, 2),
        HalfPowerAmplitude::new(-1, 0, 2),
        HalfPowerAmplitude::new(0, 1, 2),
        HalfPowerAmplitude::new(1, 0, 2),
    ];
    assert_eq!(oracle_column(2, true), frozen);
    let net = build_network(2, &Limits::default()).unwrap();
    assert_eq!(propagate_single(&net, InputSide::Left), frozen);
}

#[test]
fn level_three_columns_are_frozen() {
    let a = |re, im| HalfPowerAmplitude::new(re, im, 3);
    let left = vec![a(0, 1), a(-1, 0), a(0, 0), a(-2, 0), a(0, 1), a(1, 0)];
    let right = vec![a(1, 0), a(0, 1), a(-2, 0), a(0, 0), a(-1, 0), a(0, 1)];
    assert_eq!(oracle_column(3, true), left);
    assert_eq!(oracle_column(3, false), right);
    let net = build_network(3, &Limits::default()).unwrap();
    assert_eq!(propagate_single(&net, InputSide::Left), left);
    assert_eq!(propagate_single(&net, InputSide::Right), right);
}

#[test]
fn columns_match_oracle_up_to_level_ten() {
    let limits = Limits::default();
    for level in 1..=10 {
        let net = build_network(level, &limits).unwrap();
        assert_eq!(
            propagate_single(&net, InputSide::Left),
            oracle_column(level, true)
        );
        assert_eq!(
            propagate_single(&net, InputSide::Right),
            oracle_column(level, false)
        );
    }
}

#[test]
fn frozen_small_distributions() {
    // |2,0⟩ through one splitter: coefficients (i x1 + x2)² = -x1² + 2i x1x2 + x2².
    let oracle = oracle_coefficients(1, 2, 0);
    assert_eq!(oracle[&vec![2, 0]], (-1, 0));
    assert_eq!(oracle[&vec![1, 1]], (0, 2));
    assert_eq!(oracle[&vec![0, 2]], (1, 0));
    let s = lib_state(1, 2, 0);
    assert_eq!(s.probability(&FockVector::new(vec![2, 0])), q(1, 4));
    assert_eq!(s.probability(&FockVector::new(vec![1, 1])), q(1, 2));
    assert_eq!(s.probability(&FockVector::new(vec![0, 2])), q(1, 4));

    let onefold: Vec<_> = onefold_distribution(&lib_state(3, 1, 0))
        .into_iter()
        .map(|v| v.raw)
        .collect();
    assert_eq!(
        onefold,
        vec![q(1, 8), q(1, 8), q(0, 1), q(1, 2), q(1, 8), q(1, 8)]
    );

    let uniform: Vec<_> = onefold_distribution(&lib_state(2, 1, 0))
        .into_iter()
        .map(|v| v.raw)
        .collect();
    assert_eq!(uniform, vec![q(1, 4); 4]);
}
