//! Path-sum views of the walk and independent cross-checks.
//!
//! A single photon meets exactly one splitter per level, so each route is a
//! string of `L` reflect/transmit choices with amplitude `i^r / √2^L`, where
//! `r` is the number of reflections. Summing the routes that end on a
//! detector must reproduce the transfer-matrix entry. Multi-photon diagrams
//! are joint assignments of routes, one per photon, post-selected on the
//! detectors that fire.

mod dense;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::amplitude::{GaussianInt, HalfPowerAmplitude};
use crate::correlation::DetectorTuple;
use crate::lattice::{InputSide, Network, TransferMatrix};
use crate::state::{binomial, factorial};
use crate::{Error, Limits, Result};

pub use dense::dense_simulate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Reflect,
    Transmit,
}

impl Step {
    pub fn symbol(self) -> char {
        match self {
            Step::Reflect => 'R',
            Step::Transmit => 'T',
        }
    }
}

/// One single-photon route from an input port to a detector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathRecord {
    pub input_side: InputSide,
    pub steps: Vec<Step>,
    pub reflections: u32,
    pub terminal_detector: usize,
}

impl PathRecord {
    /// `i^reflections / √2^L`.
    pub fn amplitude(&self) -> HalfPowerAmplitude {
        let phase = GaussianInt::i().pow(self.reflections % 4);
        HalfPowerAmplitude::from_gaussian(phase, self.steps.len() as u32)
    }

    /// The step sequence as a string such as `"RTR"`.
    pub fn step_string(&self) -> String {
        self.steps.iter().map(|s| s.symbol()).collect()
    }
}

impl fmt::Display for PathRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} -> D{}",
            self.input_side.label(),
            self.step_string(),
            self.terminal_detector
        )
    }
}

/// Follows `steps` through the wiring and returns the final detector.
fn trace(network: &Network, side: InputSide, steps: &[Step]) -> usize {
    let mut splitter = 1;
    let mut entering = side;
    let mut port = 0;
    for (depth, step) in steps.iter().enumerate() {
        let exit = match (step, entering) {
            (Step::Reflect, s) => s,
            (Step::Transmit, InputSide::Left) => InputSide::Right,
            (Step::Transmit, InputSide::Right) => InputSide::Left,
        };
        port = match exit {
            InputSide::Left => 2 * splitter - 1,
            InputSide::Right => 2 * splitter,
        };
        if depth + 1 < steps.len() {
            let (next, side) = network.downstream(port);
            splitter = next;
            entering = side;
        }
    }
    port
}

/// All `2^L` routes for a photon entering at `side`.
pub fn enumerate_paths(
    network: &Network,
    side: InputSide,
    limits: &Limits,
) -> Result<Vec<PathRecord>> {
    let level = network.level_count();
    if level > limits.max_enumeration_level {
        return Err(Error::bound(
            format!("path enumeration at level {level}"),
            format!("level {}", limits.max_enumeration_level),
            format!("2^{level} = {} paths", BigInt::one() << level),
        ));
    }
    let mut out = Vec::with_capacity(1 << level);
    for mask in 0u64..(1u64 << level) {
        // Bit `level - 1 - i` set means step i transmits, so the
        // all-reflect path comes first.
        let steps: Vec<Step> = (0..level)
            .map(|i| {
                if mask >> (level - 1 - i) & 1 == 1 {
                    Step::Transmit
                } else {
                    Step::Reflect
                }
            })
            .collect();
        let reflections = steps.iter().filter(|s| **s == Step::Reflect).count() as u32;
        let terminal_detector = trace(network, side, &steps);
        out.push(PathRecord {
            input_side: side,
            steps,
            reflections,
            terminal_detector,
        });
    }
    Ok(out)
}

/// Sum of the amplitudes of every route from `side` that ends at `detector`.
pub fn endpoint_amplitude(
    network: &Network,
    side: InputSide,
    detector: usize,
    limits: &Limits,
) -> Result<HalfPowerAmplitude> {
    let count = network.detector_count();
    if detector == 0 || detector > count {
        return Err(Error::invalid(format!(
            "detector {detector} is outside 1..={count}"
        )));
    }
    Ok(enumerate_paths(network, side, limits)?
        .iter()
        .filter(|p| p.terminal_detector == detector)
        .fold(HalfPowerAmplitude::zero(), |acc, p| &acc + &p.amplitude()))
}

/// One joint route assignment: a path per photon, in photon order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub paths: Vec<PathRecord>,
    /// Product of the member path amplitudes.
    pub amplitude: HalfPowerAmplitude,
}

/// Every joint assignment whose endpoints are exactly the detector tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramSet {
    pub tuple: DetectorTuple,
    pub photons: Vec<InputSide>,
    pub assignments: Vec<Assignment>,
}

impl DiagramSet {
    /// Sum of the joint amplitudes. No symmetrization factor is applied.
    pub fn total_amplitude(&self) -> HalfPowerAmplitude {
        self.assignments
            .iter()
            .fold(HalfPowerAmplitude::zero(), |acc, a| &acc + &a.amplitude)
    }
}

/// Post-selected joint route assignments for distinguishable photon labels.
///
/// `photons[i]` is the input port of photon `i`; the tuple must list one
/// detector per photon.
pub fn diagrams_for(
    network: &Network,
    photons: &[InputSide],
    tuple: &DetectorTuple,
    limits: &Limits,
) -> Result<DiagramSet> {
    if photons.len() != tuple.order() {
        return Err(Error::invalid(format!(
            "{} photons cannot end on {} detectors",
            photons.len(),
            tuple.order()
        )));
    }
    let count = network.detector_count();
    if let Some(&d) = tuple.detectors().last() {
        if d > count {
            return Err(Error::invalid(format!(
                "detector {d} is outside 1..={count}"
            )));
        }
    }
    let steps = photons.len() * network.level_count();
    if steps > limits.max_diagram_steps {
        return Err(Error::bound(
            format!(
                "diagrams for {} photons at level {}",
                photons.len(),
                network.level_count()
            ),
            format!("{} photon-steps", limits.max_diagram_steps),
            format!("2^{steps} joint paths"),
        ));
    }

    let mut by_side: BTreeMap<InputSide, Vec<PathRecord>> = BTreeMap::new();
    for &side in photons {
        if let std::collections::btree_map::Entry::Vacant(slot) = by_side.entry(side) {
            let wanted: Vec<PathRecord> = enumerate_paths(network, side, limits)?
                .into_iter()
                .filter(|p| tuple.detectors().contains(&p.terminal_detector))
                .collect();
            slot.insert(wanted);
        }
    }

    let mut remaining = tuple.multiplicities();
    let mut chosen = Vec::with_capacity(photons.len());
    let mut assignments = Vec::new();
    assign(
        photons,
        &by_side,
        &mut remaining,
        &mut chosen,
        &mut assignments,
    );
    Ok(DiagramSet {
        tuple: tuple.clone(),
        photons: photons.to_vec(),
        assignments,
    })
}

fn assign(
    photons: &[InputSide],
    by_side: &BTreeMap<InputSide, Vec<PathRecord>>,
    remaining: &mut BTreeMap<usize, u32>,
    chosen: &mut Vec<PathRecord>,
    out: &mut Vec<Assignment>,
) {
    let Some((&side, rest)) = photons.split_first() else {
        let amplitude = chosen
            .iter()
            .fold(HalfPowerAmplitude::one(), |acc, p| &acc * &p.amplitude());
        out.push(Assignment {
            paths: chosen.clone(),
            amplitude,
        });
        return;
    };
    for path in &by_side[&side] {
        let slot = remaining.get_mut(&path.terminal_detector).unwrap();
        if *slot == 0 {
            continue;
        }
        *slot -= 1;
        chosen.push(path.clone());
        assign(rest, by_side, remaining, chosen, out);
        chosen.pop();
        *remaining.get_mut(&path.terminal_detector).unwrap() += 1;
    }
}

/// Post-selected probability from the column-restricted expansion.
///
/// Only the detectors in `tuple` are kept in the two linear forms
/// `Σ u_d x_d` and `Σ v_d x_d`, which are raised to the powers `N` and `M`.
/// When the tuple has `N + M` entries, the coefficient `c` of the monomial
/// whose exponents match the tuple's multiplicities gives the probability
/// `|c|²·Π μ! / (N!·M!)` of exactly that coincidence. For shorter tuples the
/// result is the probability that every photon lands inside the tuple's
/// support with each tuple detector receiving at least its multiplicity.
pub fn simplified_feynman(
    transfer: &TransferMatrix,
    photons_left: usize,
    photons_right: usize,
    tuple: &DetectorTuple,
) -> Result<BigRational> {
    let total = photons_left + photons_right;
    if tuple.order() > total {
        return Err(Error::invalid(format!(
            "tuple of order {} exceeds the {total} available photons",
            tuple.order()
        )));
    }
    let count = transfer.detector_count();
    if let Some(&d) = tuple.detectors().last() {
        if d > count {
            return Err(Error::invalid(format!(
                "detector {d} is outside 1..={count}"
            )));
        }
    }
    let level = transfer.level_count() as u32;
    let mu: Vec<(usize, u32)> = tuple.multiplicities().into_iter().collect();
    let restricted = |side: InputSide| -> Vec<GaussianInt> {
        mu.iter()
            .map(|&(d, _)| {
                transfer
                    .entry(side, d)
                    .numerator_at(level)
                    .expect("pyramid amplitudes share the scale 1/√2^L")
            })
            .collect()
    };
    let u = restricted(InputSide::Left);
    let v = restricted(InputSide::Right);

    let mut poly: BTreeMap<Vec<u32>, GaussianInt> = BTreeMap::new();
    poly.insert(vec![0; mu.len()], GaussianInt::one());
    for column in
        std::iter::repeat_n(&u, photons_left).chain(std::iter::repeat_n(&v, photons_right))
    {
        let mut next: BTreeMap<Vec<u32>, GaussianInt> = BTreeMap::new();
        for (mono, c) in &poly {
            for (k, coef) in column.iter().enumerate() {
                let mut key = mono.clone();
                key[k] += 1;
                *next.entry(key).or_default() += &(c * coef);
            }
        }
        poly = next;
    }

    let mut numerator = BigInt::zero();
    for (mono, c) in &poly {
        if mono.iter().zip(&mu).all(|(&s, &(_, m))| s >= m) {
            let occupancy: BigInt = mono.iter().map(|&s| factorial(s)).product();
            numerator += c.norm_sqr() * occupancy;
        }
    }
    let denominator = factorial(photons_left as u32)
        * factorial(photons_right as u32)
        * (BigInt::one() << (level as usize * total));
    Ok(BigRational::new(numerator, denominator))
}

/// Number of joint routes for `|N,M⟩` through `level` levels: `2^{L(N+M)}`.
pub fn total_path_count(level: usize, photons_left: usize, photons_right: usize) -> BigInt {
    BigInt::one() << (level * (photons_left + photons_right))
}

/// Number of single-photon routes into the splitter feeding detector pair
/// `pair_index` at `level`: `C(level − 1, pair_index − 1)`.
pub fn pair_path_count(level: usize, pair_index: usize) -> Result<BigInt> {
    if level == 0 || pair_index == 0 || pair_index > level {
        return Err(Error::invalid(format!(
            "pair index {pair_index} is outside 1..={level}"
        )));
    }
    Ok(binomial((level - 1) as u64, (pair_index - 1) as u64))
}
