//! Splitter-by-splitter propagation of the full multiphoton polynomial.
//!
//! This never looks at the transfer matrix. It starts from `a†^N b†^M` and
//! substitutes each splitter's input operators in topological order,
//! expanding `(i·x_L + x_R)^p (x_L + i·x_R)^q` with binomial coefficients and
//! keeping every cross term. Every photon meets one splitter per level, so
//! the accumulated `1/√2` factors are the same `1/√2^{L(N+M)}` for all terms
//! and are left implicit.

use std::collections::BTreeMap;

use crate::amplitude::GaussianInt;
use crate::lattice::{Feed, InputSide, Network};
use crate::state::{binomial, StateExpansion};
use crate::{Error, Limits, Result};

/// Exact output state of `|N,M⟩` computed without the single-photon shortcut.
pub fn dense_simulate(
    network: &Network,
    photons_left: usize,
    photons_right: usize,
    limits: &Limits,
) -> Result<StateExpansion> {
    let total = photons_left + photons_right;
    let level_count = network.level_count();
    if total == 0 {
        return Err(Error::invalid("at least one photon is required"));
    }
    if total > limits.max_dense_photons || level_count > limits.max_dense_level {
        return Err(Error::bound(
            format!("dense propagation of |{photons_left},{photons_right}⟩ at level {level_count}"),
            format!(
                "{} photons, level {}",
                limits.max_dense_photons, limits.max_dense_level
            ),
            format!(
                "{} output terms",
                crate::state::multiset_count(2 * level_count, total)
            ),
        ));
    }

    // Frontier exponents. Before level 1 the frontier is the two input modes.
    let mut poly: BTreeMap<Vec<u32>, GaussianInt> = BTreeMap::new();
    poly.insert(
        vec![photons_left as u32, photons_right as u32],
        GaussianInt::one(),
    );

    for level in 1..=level_count {
        let old_width = if level == 1 { 2 } else { 2 * (level - 1) };
        let new_width = 2 * level;
        // Working keys hold the old frontier followed by the new one.
        let mut work: BTreeMap<Vec<u32>, GaussianInt> = poly
            .into_iter()
            .map(|(k, c)| {
                let mut key = k;
                key.resize(old_width + new_width, 0);
                (key, c)
            })
            .collect();

        for splitter in network.level(level) {
            let slot = |feed: Feed| match feed {
                Feed::Vacuum => None,
                Feed::Injection(InputSide::Left) => Some(0),
                Feed::Injection(InputSide::Right) => Some(1),
                Feed::Port(p) => Some(p - 1),
            };
            let left_slot = slot(splitter.left_input);
            let right_slot = slot(splitter.right_input);
            let (out_left, out_right) = splitter.output_ports();
            let out_left = old_width + out_left - 1;
            let out_right = old_width + out_right - 1;

            let mut next: BTreeMap<Vec<u32>, GaussianInt> = BTreeMap::new();
            for (key, coef) in work {
                let p = left_slot.map_or(0, |s| key[s]);
                let q = right_slot.map_or(0, |s| key[s]);
                let mut base = key;
                if let Some(s) = left_slot {
                    base[s] = 0;
                }
                if let Some(s) = right_slot {
                    base[s] = 0;
                }
                // (i x_L + x_R)^p: choose a reflected (stay-left) photons.
                // (x_L + i x_R)^q: choose b transmitted (cross-to-left) photons.
                for a in 0..=p {
                    for b in 0..=q {
                        let reflections = a + (q - b);
                        let weight = binomial(p as u64, a as u64) * binomial(q as u64, b as u64);
                        let term = GaussianInt::i().pow(reflections % 4).scale(&weight);
                        let mut k = base.clone();
                        k[out_left] += a + b;
                        k[out_right] += (p - a) + (q - b);
                        *next.entry(k).or_default() += &(&coef * &term);
                    }
                }
            }
            work = next;
        }

        poly = work
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(key, c)| {
                debug_assert!(key[..old_width].iter().all(|&e| e == 0));
                (key[old_width..].to_vec(), c)
            })
            .collect();
    }

    Ok(StateExpansion::from_polynomial(
        level_count,
        (photons_left, photons_right),
        poly,
    ))
}
