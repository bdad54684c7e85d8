//! Normally-ordered coincidence correlations.
//!
//! For a detector multiset with multiplicities `μ(d)`, the k-fold correlation
//! `⟨a†_{m1}…a†_{mk} a_{mk}…a_{m1}⟩` of a Fock term `|s⟩` is the product of
//! falling factorials `Π_d s_d·(s_d − 1)···(s_d − μ(d) + 1)`. Summing that
//! against the exact term probabilities gives the correlation as a rational.
//!
//! When a detector appears more than once the raw value counts ordered photon
//! pairs (triples, …) at that detector. Dividing by `Π_d μ(d)!` recovers the
//! "that detector got exactly that many photons" reading, which is reported
//! separately as the interpretation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::state::{factorial, StateExpansion};
use crate::{Error, Limits, Result};

/// A sorted multiset of 1-based detector indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DetectorTuple {
    detectors: Vec<usize>,
}

impl DetectorTuple {
    /// Builds a tuple over `detector_count` detectors. Order of `detectors`
    /// does not matter.
    pub fn new(mut detectors: Vec<usize>, detector_count: usize) -> Result<Self> {
        if detectors.is_empty() {
            return Err(Error::invalid(
                "a detector tuple needs at least one detector",
            ));
        }
        if let Some(&bad) = detectors.iter().find(|&&d| d == 0 || d > detector_count) {
            return Err(Error::invalid(format!(
                "detector {bad} is outside 1..={detector_count}"
            )));
        }
        detectors.sort_unstable();
        Ok(DetectorTuple { detectors })
    }

    pub fn detectors(&self) -> &[usize] {
        &self.detectors
    }

    pub fn order(&self) -> usize {
        self.detectors.len()
    }

    /// Detector → multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<usize, u32> {
        let mut mu = BTreeMap::new();
        for &d in &self.detectors {
            *mu.entry(d).or_insert(0) += 1;
        }
        mu
    }

    pub fn has_repeats(&self) -> bool {
        self.detectors.windows(2).any(|w| w[0] == w[1])
    }

    /// The tuple seen through a left-right reflection of the pyramid.
    pub fn mirrored(&self, detector_count: usize) -> Self {
        let mut detectors: Vec<usize> = self
            .detectors
            .iter()
            .map(|&d| detector_count + 1 - d)
            .collect();
        detectors.sort_unstable();
        DetectorTuple { detectors }
    }

    /// Whether every detector of `self` appears in `other` at least as often.
    pub fn is_sub_multiset_of(&self, other: &DetectorTuple) -> bool {
        let theirs = other.multiplicities();
        self.multiplicities()
            .iter()
            .all(|(d, &n)| theirs.get(d).copied().unwrap_or(0) >= n)
    }
}

impl fmt::Display for DetectorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.detectors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationValue {
    pub raw: BigRational,
    /// `raw / Π μ!`, present only when the tuple repeats a detector.
    pub interpretation: Option<BigRational>,
}

impl CorrelationValue {
    fn for_tuple(raw: BigRational, tuple: &DetectorTuple) -> Self {
        let interpretation = tuple.has_repeats().then(|| {
            let divisor: BigInt = tuple
                .multiplicities()
                .values()
                .map(|&m| factorial(m))
                .product();
            &raw / BigRational::from_integer(divisor)
        });
        CorrelationValue {
            raw,
            interpretation,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn as_f64(&self) -> f64 {
        self.raw.to_f64().unwrap_or(f64::NAN)
    }
}

fn falling_factorial(s: u32, mu: u32) -> u64 {
    if mu > s {
        return 0;
    }
    (0..mu).map(|i| (s - i) as u64).product()
}

fn check_tuple(expansion: &StateExpansion, tuple: &DetectorTuple) -> Result<()> {
    let n = expansion.detector_count();
    match tuple.detectors().last() {
        Some(&d) if d > n => Err(Error::invalid(format!("detector {d} is outside 1..={n}"))),
        _ => Ok(()),
    }
}

/// Raw numerator of `gk` over the expansion's shared denominator.
fn gk_numerator(expansion: &StateExpansion, mu: &[(usize, u32)]) -> BigInt {
    let mut acc = BigInt::zero();
    for (fock, term) in expansion.iter() {
        let weight: u64 = mu
            .iter()
            .map(|&(d, m)| falling_factorial(fock.at(d), m))
            .product();
        if weight != 0 {
            acc += term.weight() * weight;
        }
    }
    acc
}

/// The k-fold normally-ordered correlation at `tuple`.
pub fn gk(expansion: &StateExpansion, tuple: &DetectorTuple) -> Result<CorrelationValue> {
    check_tuple(expansion, tuple)?;
    let mu: Vec<(usize, u32)> = tuple.multiplicities().into_iter().collect();
    let raw = BigRational::new(
        gk_numerator(expansion, &mu),
        expansion.denominator().clone(),
    );
    Ok(CorrelationValue::for_tuple(raw, tuple))
}

/// Mean photon number at every detector.
pub fn onefold_distribution(expansion: &StateExpansion) -> Vec<CorrelationValue> {
    let n = expansion.detector_count();
    let mut sums = vec![BigInt::zero(); n];
    for (fock, term) in expansion.iter() {
        let w = term.weight();
        for (d, &s) in fock.occupations().iter().enumerate() {
            if s > 0 {
                sums[d] += &w * s;
            }
        }
    }
    sums.into_iter()
        .map(|num| CorrelationValue {
            raw: BigRational::new(num, expansion.denominator().clone()),
            interpretation: None,
        })
        .collect()
}

/// Symmetric `2L × 2L` matrix of twofold correlations; `[m-1][n-1]` holds
/// `gk({m, n})`.
pub fn twofold_matrix(expansion: &StateExpansion) -> Vec<Vec<CorrelationValue>> {
    let n = expansion.detector_count();
    let mut nums = vec![vec![BigInt::zero(); n]; n];
    for (fock, term) in expansion.iter() {
        let w = term.weight();
        let occ = fock.occupations();
        let support: Vec<usize> = (0..n).filter(|&d| occ[d] > 0).collect();
        for (i, &a) in support.iter().enumerate() {
            let sa = occ[a] as u64;
            if sa >= 2 {
                nums[a][a] += &w * (sa * (sa - 1));
            }
            for &b in &support[i + 1..] {
                nums[a][b] += &w * (sa * occ[b] as u64);
            }
        }
    }
    let den = expansion.denominator();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    let tuple = DetectorTuple {
                        detectors: vec![lo + 1, hi + 1],
                    };
                    CorrelationValue::for_tuple(
                        BigRational::new(nums[lo][hi].clone(), den.clone()),
                        &tuple,
                    )
                })
                .collect()
        })
        .collect()
}

/// Fully symmetric `2L × 2L × 2L` array of threefold correlations;
/// `[m-1][n-1][l-1]` holds `gk({m, n, l})`.
pub fn threefold_cube(expansion: &StateExpansion) -> Vec<Vec<Vec<CorrelationValue>>> {
    let n = expansion.detector_count();
    let mut sorted: BTreeMap<[usize; 3], CorrelationValue> = BTreeMap::new();
    for a in 1..=n {
        for b in a..=n {
            for c in b..=n {
                let tuple = DetectorTuple {
                    detectors: vec![a, b, c],
                };
                let mu: Vec<(usize, u32)> = tuple.multiplicities().into_iter().collect();
                let raw = BigRational::new(
                    gk_numerator(expansion, &mu),
                    expansion.denominator().clone(),
                );
                sorted.insert([a, b, c], CorrelationValue::for_tuple(raw, &tuple));
            }
        }
    }
    (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| {
                    (1..=n)
                        .map(|c| {
                            let mut key = [a, b, c];
                            key.sort_unstable();
                            sorted[&key].clone()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `P[i][j]`: probability that detector `m` holds exactly `i` photons and
/// detector `n` exactly `j`. Both indices run over `0..=N+M`.
pub fn joint_number_distribution(
    expansion: &StateExpansion,
    m: usize,
    n: usize,
) -> Result<Vec<Vec<BigRational>>> {
    let count = expansion.detector_count();
    for d in [m, n] {
        if d == 0 || d > count {
            return Err(Error::invalid(format!(
                "detector {d} is outside 1..={count}"
            )));
        }
    }
    if m == n {
        return Err(Error::invalid(format!(
            "joint distribution needs two distinct detectors, got {m} twice"
        )));
    }
    let t = expansion.photon_count();
    let mut nums = vec![vec![BigInt::zero(); t + 1]; t + 1];
    for (fock, term) in expansion.iter() {
        nums[fock.at(m) as usize][fock.at(n) as usize] += term.weight();
    }
    let den = expansion.denominator();
    Ok(nums
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| BigRational::new(x, den.clone()))
                .collect()
        })
        .collect())
}

/// Distribution of the photon count at a single detector, `0..=N+M`.
pub fn number_distribution(
    expansion: &StateExpansion,
    detector: usize,
) -> Result<Vec<BigRational>> {
    let count = expansion.detector_count();
    if detector == 0 || detector > count {
        return Err(Error::invalid(format!(
            "detector {detector} is outside 1..={count}"
        )));
    }
    let t = expansion.photon_count();
    let mut nums = vec![BigInt::zero(); t + 1];
    for (fock, term) in expansion.iter() {
        nums[fock.at(detector) as usize] += term.weight();
    }
    Ok(nums
        .into_iter()
        .map(|x| BigRational::new(x, expansion.denominator().clone()))
        .collect())
}

/// Calls `visit` with every sorted k-multiset over `1..=n`.
pub(crate) fn for_each_multiset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k == 0 || n == 0 {
        return;
    }
    let mut idx = vec![1usize; k];
    loop {
        visit(&idx);
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == n {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        idx[pos - 1] += 1;
        let v = idx[pos - 1];
        for slot in &mut idx[pos..] {
            *slot = v;
        }
    }
}

/// Every k-multiset of detectors whose correlation is exactly zero.
pub fn zero_set(
    expansion: &StateExpansion,
    order: usize,
    limits: &Limits,
) -> Result<Vec<DetectorTuple>> {
    if order == 0 {
        return Err(Error::invalid("tuple order must be at least 1"));
    }
    if order > limits.max_zero_set_order {
        return Err(Error::bound(
            format!("zero set of order {order}"),
            format!("order {}", limits.max_zero_set_order),
            format!(
                "{} tuples",
                crate::state::multiset_count(expansion.detector_count(), order)
            ),
        ));
    }
    let mut zeros = Vec::new();
    for_each_multiset(expansion.detector_count(), order, |ds| {
        let tuple = DetectorTuple {
            detectors: ds.to_vec(),
        };
        let mu: Vec<(usize, u32)> = tuple.multiplicities().into_iter().collect();
        if gk_numerator(expansion, &mu).is_zero() {
            zeros.push(tuple);
        }
    });
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_network, transfer_matrix};
    use crate::state::expand;
    use num_traits::One;

    fn state(l: usize, n: usize, m: usize) -> StateExpansion {
        let limits = Limits::default();
        let tm = transfer_matrix(&build_network(l, &limits).unwrap()).unwrap();
        expand(&tm, n, m, &limits).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn tuple(ds: &[usize], l: usize) -> DetectorTuple {
        DetectorTuple::new(ds.to_vec(), 2 * l).unwrap()
    }

    #[test]
    fn tuple_validation() {
        assert!(DetectorTuple::new(vec![], 6).is_err());
        assert!(DetectorTuple::new(vec![0], 6).is_err());
        assert!(DetectorTuple::new(vec![7], 6).is_err());
        let t = DetectorTuple::new(vec![5, 1, 5], 6).unwrap();
        assert_eq!(t.detectors(), &[1, 5, 5]);
        assert_eq!(t, DetectorTuple::new(vec![5, 5, 1], 6).unwrap());
        assert_eq!(t.multiplicities()[&5], 2);
        assert_eq!(t.mirrored(6).detectors(), &[2, 2, 6]);
    }

    #[test]
    fn gk_rejects_out_of_range_detectors() {
        let s = state(1, 1, 0);
        let t = DetectorTuple::new(vec![3], 6).unwrap();
        assert!(matches!(gk(&s, &t), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hom_bunching_values() {
        let s = state(1, 1, 1);
        assert!(gk(&s, &tuple(&[1, 2], 1)).unwrap().is_zero());
        let same = gk(&s, &tuple(&[1, 1], 1)).unwrap();
        assert_eq!(same.raw, q(1, 1));
        assert_eq!(same.interpretation, Some(q(1, 2)));
    }

    #[test]
    fn known_dark_tuples() {
        assert!(gk(&state(3, 1, 1), &tuple(&[1, 5], 3)).unwrap().is_zero());
        assert!(gk(&state(3, 2, 1), &tuple(&[1, 4, 6], 3))
            .unwrap()
            .is_zero());
        let single = state(3, 1, 0);
        assert!(gk(&single, &tuple(&[3], 3)).unwrap().is_zero());
        assert_eq!(gk(&single, &tuple(&[4], 3)).unwrap().raw, q(1, 2));
    }

    #[test]
    fn onefold_level_three() {
        let raw: Vec<_> = onefold_distribution(&state(3, 1, 0))
            .into_iter()
            .map(|v| v.raw)
            .collect();
        assert_eq!(
            raw,
            vec![q(1, 8), q(1, 8), q(0, 1), q(1, 2), q(1, 8), q(1, 8)]
        );
        let raw1: Vec<_> = onefold_distribution(&state(1, 1, 0))
            .into_iter()
            .map(|v| v.raw)
            .collect();
        assert_eq!(raw1, vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn onefold_agrees_with_gk() {
        let s = state(4, 2, 1);
        for (m, v) in onefold_distribution(&s).iter().enumerate() {
            assert_eq!(*v, gk(&s, &tuple(&[m + 1], 4)).unwrap());
        }
    }

    #[test]
    fn twofold_matrix_agrees_with_gk() {
        let s = state(3, 2, 1);
        let g2 = twofold_matrix(&s);
        for m in 1..=6 {
            for n in 1..=6 {
                assert_eq!(g2[m - 1][n - 1], gk(&s, &tuple(&[m, n], 3)).unwrap());
            }
        }
    }

    #[test]
    fn hom_twofold_matrix() {
        let g2 = twofold_matrix(&state(1, 1, 1));
        assert_eq!(g2[0][1].raw, q(0, 1));
        assert_eq!(g2[0][0].raw, q(1, 1));
        assert_eq!(g2[1][1].raw, q(1, 1));
    }

    #[test]
    fn single_photon_has_no_coincidences() {
        let s = state(3, 1, 0);
        assert!(twofold_matrix(&s)
            .iter()
            .flatten()
            .all(CorrelationValue::is_zero));
        assert!(threefold_cube(&state(2, 1, 1))
            .iter()
            .flatten()
            .flatten()
            .all(CorrelationValue::is_zero));
    }

    #[test]
    fn threefold_cube_matches_gk_and_is_symmetric() {
        let s = state(3, 2, 1);
        let cube = threefold_cube(&s);
        for a in 1..=6 {
            for b in 1..=6 {
                for c in 1..=6 {
                    let v = &cube[a - 1][b - 1][c - 1];
                    assert_eq!(*v, gk(&s, &tuple(&[a, b, c], 3)).unwrap());
                }
            }
        }
        for p in [
            [1, 4, 6],
            [4, 1, 6],
            [6, 1, 4],
            [1, 6, 4],
            [4, 6, 1],
            [6, 4, 1],
        ] {
            assert!(cube[p[0] - 1][p[1] - 1][p[2] - 1].is_zero());
        }
    }

    #[test]
    fn joint_distribution_examples() {
        let p = joint_number_distribution(&state(1, 1, 1), 1, 2).unwrap();
        assert_eq!(p[2][0], q(1, 2));
        assert_eq!(p[0][2], q(1, 2));
        assert_eq!(p[1][1], q(0, 1));

        let p = joint_number_distribution(&state(3, 1, 0), 3, 4).unwrap();
        assert_eq!(p[0][0], q(1, 2));
        assert_eq!(p[0][1], q(1, 2));
        assert!(p[1].iter().all(Zero::is_zero));

        assert!(joint_number_distribution(&state(3, 1, 0), 2, 2).is_err());
        assert!(joint_number_distribution(&state(3, 1, 0), 2, 9).is_err());
    }

    #[test]
    fn joint_distribution_is_consistent() {
        let s = state(3, 2, 2);
        for m in 1..=6 {
            for n in (1..=6).filter(|&n| n != m) {
                let p = joint_number_distribution(&s, m, n).unwrap();
                let total: BigRational = p.iter().flatten().cloned().sum();
                assert!(total.is_one());
                let cross: BigRational = p
                    .iter()
                    .enumerate()
                    .flat_map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(move |(j, x)| x * BigRational::from_integer((i * j).into()))
                    })
                    .sum();
                assert_eq!(cross, gk(&s, &tuple(&[m, n], 3)).unwrap().raw);
                let marginal: Vec<BigRational> =
                    p.iter().map(|row| row.iter().cloned().sum()).collect();
                assert_eq!(marginal, number_distribution(&s, m).unwrap());
            }
        }
    }

    #[test]
    fn zero_set_examples() {
        let limits = Limits::default();
        assert_eq!(
            zero_set(&state(3, 1, 0), 1, &limits).unwrap(),
            vec![tuple(&[3], 3)]
        );
        assert!(zero_set(&state(3, 1, 1), 2, &limits)
            .unwrap()
            .contains(&tuple(&[1, 5], 3)));
        assert!(zero_set(&state(3, 2, 1), 3, &limits)
            .unwrap()
            .contains(&tuple(&[1, 4, 6], 3)));
        assert!(matches!(
            zero_set(&state(3, 2, 1), 4, &limits),
            Err(Error::ResourceBound { .. })
        ));
    }

    #[test]
    fn multiset_walk_counts() {
        let mut count = 0;
        for_each_multiset(6, 3, |ds| {
            assert!(ds.windows(2).all(|w| w[0] <= w[1]));
            count += 1;
        });
        assert_eq!(count, 56);
    }
}
