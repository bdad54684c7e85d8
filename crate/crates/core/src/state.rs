//! Expansion of a two-mode `|N,M⟩` input into output Fock states.
//!
//! Every splitter acts linearly on creation operators, so the left input
//! operator ends up as `Σ_k u_k a†_k` and the right one as `Σ_k v_k a†_k`,
//! where `u` and `v` are the transfer-matrix columns. The output state is
//!
//! ```text
//! (Σ u_k a†_k)^N (Σ v_k a†_k)^M |0⟩ / √(N!·M!)
//! ```
//!
//! Writing every `u_k`, `v_k` over the common scale `√2^L` turns the two
//! linear forms into Gaussian-integer polynomials. A monomial `Π a†_k^{s_k}`
//! with coefficient `c` becomes `c·√(Π s_k!)·|s⟩`, so each term's probability
//! is `|c|²·Π s_k! / (N!·M!·2^{L(N+M)})`. Terms share that denominator, which
//! keeps every downstream sum in integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::amplitude::GaussianInt;
use crate::lattice::{InputSide, TransferMatrix};
use crate::{Error, Limits, Result};

/// Occupation numbers over the `2L` detectors; the label of one outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockVector {
    occupations: Vec<u32>,
    total: u32,
}

impl FockVector {
    pub fn new(occupations: Vec<u32>) -> Self {
        let total = occupations.iter().sum();
        FockVector { occupations, total }
    }

    /// A single photon at 1-based `detector` among `modes`.
    pub fn single(modes: usize, detector: usize) -> Self {
        let mut occ = vec![0; modes];
        occ[detector - 1] = 1;
        FockVector::new(occ)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    /// Occupation of 1-based `detector`.
    pub fn at(&self, detector: usize) -> u32 {
        self.occupations[detector - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut occupations = self.occupations.clone();
        occupations.reverse();
        FockVector {
            occupations,
            total: self.total,
        }
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.occupations.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// One output term. The physical amplitude is
/// `coefficient · √(Π s_k!) / (√(N!·M!) · √2^{L(N+M)})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    coefficient: GaussianInt,
    occupancy_factor: BigInt,
}

impl Term {
    /// Gaussian-integer polynomial coefficient of this monomial.
    pub fn coefficient(&self) -> &GaussianInt {
        &self.coefficient
    }

    /// `Π s_k!` for this term's occupations.
    pub fn occupancy_factor(&self) -> &BigInt {
        &self.occupancy_factor
    }

    /// Probability numerator over the expansion's shared denominator.
    pub fn weight(&self) -> BigInt {
        self.coefficient.norm_sqr() * &self.occupancy_factor
    }
}

/// The exact output state of an `|N,M⟩` input at a given depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateExpansion {
    level_count: usize,
    input: (usize, usize),
    terms: BTreeMap<FockVector, Term>,
    denominator: BigInt,
}

impl StateExpansion {
    /// Normalizes a creation-operator polynomial whose coefficients are all
    /// scaled by `1/√2^{L(N+M)}`. Zero coefficients are dropped.
    pub(crate) fn from_polynomial(
        level_count: usize,
        input: (usize, usize),
        polynomial: BTreeMap<Vec<u32>, GaussianInt>,
    ) -> Self {
        let (n, m) = input;
        let denominator =
            factorial(n as u32) * factorial(m as u32) * (BigInt::one() << (level_count * (n + m)));
        let terms = polynomial
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(occ, coefficient)| {
                let occupancy_factor = occ.iter().map(|&s| factorial(s)).product();
                (
                    FockVector::new(occ),
                    Term {
                        coefficient,
                        occupancy_factor,
                    },
                )
            })
            .collect();
        StateExpansion {
            level_count,
            input,
            terms,
            denominator,
        }
    }

    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn detector_count(&self) -> usize {
        2 * self.level_count
    }

    /// `(N, M)`.
    pub fn input(&self) -> (usize, usize) {
        self.input
    }

    pub fn photon_count(&self) -> usize {
        self.input.0 + self.input.1
    }

    /// Shared probability denominator `N!·M!·2^{L(N+M)}`.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Non-zero terms in lexicographic order of their occupations.
    pub fn iter(&self) -> impl Iterator<Item = (&FockVector, &Term)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, fock: &FockVector) -> Option<&Term> {
        self.terms.get(fock)
    }

    /// Exact probability of `fock`; zero for absent terms.
    pub fn probability(&self, fock: &FockVector) -> BigRational {
        self.terms
            .get(fock)
            .map(|t| BigRational::new(t.weight(), self.denominator.clone()))
            .unwrap_or_else(BigRational::zero)
    }

    /// Exact `(|Re ψ_s|², |Im ψ_s|²)` for `fock`.
    pub fn amplitude_sq_components(&self, fock: &FockVector) -> (BigRational, BigRational) {
        match self.terms.get(fock) {
            None => (BigRational::zero(), BigRational::zero()),
            Some(t) => {
                let c = &t.coefficient;
                (
                    BigRational::new(
                        &c.re * &c.re * &t.occupancy_factor,
                        self.denominator.clone(),
                    ),
                    BigRational::new(
                        &c.im * &c.im * &t.occupancy_factor,
                        self.denominator.clone(),
                    ),
                )
            }
        }
    }

    pub fn total_probability(&self) -> BigRational {
        let sum: BigInt = self.terms.values().map(Term::weight).sum();
        BigRational::new(sum, self.denominator.clone())
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Upper bound on the number of output terms: multisets of `photons` drawn
/// from `modes`.
pub fn multiset_count(modes: usize, photons: usize) -> BigInt {
    if modes == 0 {
        return BigInt::zero();
    }
    binomial((photons + modes - 1) as u64, photons as u64)
}

/// `(Σ_k column_k x_k)^exp` as a map from exponent vectors to coefficients.
fn linear_form_power(column: &[GaussianInt], exp: usize) -> BTreeMap<Vec<u32>, GaussianInt> {
    let mut poly = BTreeMap::new();
    poly.insert(vec![0u32; column.len()], GaussianInt::one());
    for _ in 0..exp {
        let mut next: BTreeMap<Vec<u32>, GaussianInt> = BTreeMap::new();
        for (mono, c) in &poly {
            for (k, coef) in column.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let mut key = mono.clone();
                key[k] += 1;
                *next.entry(key).or_default() += &(c * coef);
            }
        }
        poly = next;
    }
    poly
}

/// Computes the exact output state of `|photons_left, photons_right⟩`.
pub fn expand(
    transfer: &TransferMatrix,
    photons_left: usize,
    photons_right: usize,
    limits: &Limits,
) -> Result<StateExpansion> {
    let total = photons_left + photons_right;
    if total == 0 {
        return Err(Error::invalid("at least one photon is required"));
    }
    let level = transfer.level_count();
    let modes = transfer.detector_count();
    if total > limits.max_photons || level > limits.max_level {
        return Err(Error::bound(
            format!("expansion of |{photons_left},{photons_right}⟩ at level {level}"),
            format!("{} photons, level {}", limits.max_photons, limits.max_level),
            format!("{} output terms", multiset_count(modes, total)),
        ));
    }

    let scaled = |side: InputSide| -> Result<Vec<GaussianInt>> {
        transfer
            .column(side)
            .iter()
            .map(|a| {
                a.numerator_at(level as u32).ok_or_else(|| {
                    Error::Defect(format!("amplitude {a} is not a multiple of 1/√2^{level}"))
                })
            })
            .collect()
    };
    let left = linear_form_power(&scaled(InputSide::Left)?, photons_left);
    let right = linear_form_power(&scaled(InputSide::Right)?, photons_right);

    let mut product: BTreeMap<Vec<u32>, GaussianInt> = BTreeMap::new();
    for (a, ca) in &left {
        for (b, cb) in &right {
            let key: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            *product.entry(key).or_default() += &(ca * cb);
        }
    }
    Ok(StateExpansion::from_polynomial(
        level,
        (photons_left, photons_right),
        product,
    ))
}

/// Reflects the output left to right. Equals the expansion of the input with
/// `N` and `M` swapped.
pub fn mirror(expansion: &StateExpansion) -> StateExpansion {
    StateExpansion {
        level_count: expansion.level_count,
        input: (expansion.input.1, expansion.input.0),
        terms: expansion
            .terms
            .iter()
            .map(|(k, t)| (k.reversed(), t.clone()))
            .collect(),
        denominator: expansion.denominator.clone(),
    }
}
