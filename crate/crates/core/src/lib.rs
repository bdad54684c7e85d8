//! Exact simulation of multiphoton quantum random walks.
//!
//! Photons enter the two input ports of a single symmetric 50/50 beam splitter
//! and cascade down a staggered pyramid of further splitters. After `L` levels
//! there are `2L` detectors. This crate computes the output state of an
//! `|N,M⟩` input exactly, using Gaussian integers scaled by powers of `1/√2`
//! and arbitrary-precision rationals, so destructive interference produces
//! exact zeros rather than small floats.
//!
//! The pipeline is:
//!
//! 1. [`lattice`] builds the pyramid and propagates a single photon from each
//!    input port, producing a [`TransferMatrix`].
//! 2. [`state`] raises the two propagated columns to the powers `N` and `M`
//!    and collects the output Fock terms into a [`StateExpansion`].
//! 3. [`correlation`] evaluates normally-ordered k-fold coincidence
//!    correlations and joint photon-number distributions.
//! 4. [`feynman`] holds the independent checks: single-photon path
//!    enumeration, post-selected path diagrams, the column-restricted
//!    expansion used for hand calculations, and a dense splitter-by-splitter
//!    propagation of the full multiphoton polynomial.
//!
//! ```
//! use qrw::{build_network, transfer_matrix, expand, gk, DetectorTuple, Limits};
//!
//! let limits = Limits::default();
//! let network = build_network(3, &limits)?;
//! let transfer = transfer_matrix(&network)?;
//! let state = expand(&transfer, 1, 1, &limits)?;
//!
//! // Photons from opposite ports never coincide at D1 and D5.
//! let g2 = gk(&state, &DetectorTuple::new(vec![1, 5], 6)?)?;
//! assert!(g2.is_zero());
//! # Ok::<(), qrw::Error>(())
//! ```

pub mod amplitude;
pub mod correlation;
mod error;
pub mod feynman;
pub mod lattice;
pub mod state;

pub use amplitude::{GaussianInt, HalfPowerAmplitude};
pub use correlation::{
    gk, joint_number_distribution, number_distribution, onefold_distribution, threefold_cube,
    twofold_matrix, zero_set, CorrelationValue, DetectorTuple,
};
pub use error::{Error, Result};
pub use feynman::{
    dense_simulate, diagrams_for, endpoint_amplitude, enumerate_paths, pair_path_count,
    simplified_feynman, total_path_count, Assignment, DiagramSet, PathRecord, Step,
};
pub use lattice::{
    build_network, propagate_single, transfer_matrix, InputSide, Network, TransferMatrix,
};
pub use state::{expand, mirror, multiset_count, FockVector, StateExpansion, Term};

/// Size caps guarding against accidental resource exhaustion.
///
/// Every operation that can blow up checks against one of these and returns
/// [`Error::ResourceBound`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest pyramid depth accepted by [`build_network`].
    pub max_level: usize,
    /// Largest total photon number `N + M` accepted by [`expand`].
    pub max_photons: usize,
    /// Largest depth for single-photon path enumeration.
    pub max_enumeration_level: usize,
    /// Largest `photons × level` for post-selected diagram enumeration.
    pub max_diagram_steps: usize,
    /// Largest total photon number for [`dense_simulate`].
    pub max_dense_photons: usize,
    /// Largest depth for [`dense_simulate`].
    pub max_dense_level: usize,
    /// Largest tuple order for [`zero_set`].
    pub max_zero_set_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_level: 24,
            max_photons: 6,
            max_enumeration_level: 16,
            max_diagram_steps: 24,
            max_dense_photons: 4,
            max_dense_level: 6,
            max_zero_set_order: 3,
        }
    }
}

// The book chapters and README are compiled as doc-tests so their snippets cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/amplitudes.md")]
    mod amplitudes {}
    #[doc = include_str!("../../../book/src/pyramid.md")]
    mod pyramid {}
    #[doc = include_str!("../../../book/src/fock_expansion.md")]
    mod fock_expansion {}
    #[doc = include_str!("../../../book/src/correlations.md")]
    mod correlations {}
    #[doc = include_str!("../../../book/src/feynman_paths.md")]
    mod feynman_paths {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
