//! Pyramid geometry and single-photon propagation.
//!
//! Level `l` holds `l` beam splitters and exposes `2l` output ports. Outputs
//! of level `l` are numbered left to right, so splitter `j` owns ports
//! `2j − 1` (left) and `2j` (right). Splitter `j` at level `l + 1` takes its
//! left input from the right output of splitter `j − 1` and its right input
//! from the left output of splitter `j`; missing neighbours at the edges are
//! vacuum.
//!
//! A photon reflected by a splitter stays on its side and picks up a factor
//! `i/√2`; a transmitted photon crosses over with a factor `1/√2`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::amplitude::HalfPowerAmplitude;
use crate::{Error, Limits, Result};

/// Which input port of the first beam splitter a photon enters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputSide {
    Left,
    Right,
}

impl InputSide {
    pub fn label(self) -> &'static str {
        match self {
            InputSide::Left => "left",
            InputSide::Right => "right",
        }
    }
}

/// Where a beam splitter input slot is fed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feed {
    Vacuum,
    /// One of the two external input ports (level 1 only).
    Injection(InputSide),
    /// An output port of the previous level, 1-based.
    Port(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamSplitter {
    pub level: usize,
    /// 1-based position within the level.
    pub index: usize,
    pub left_input: Feed,
    pub right_input: Feed,
}

impl BeamSplitter {
    /// 1-based ports `(left, right)` this splitter writes at its own level.
    pub fn output_ports(&self) -> (usize, usize) {
        (2 * self.index - 1, 2 * self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    level_count: usize,
    splitters: Vec<BeamSplitter>,
}

impl Network {
    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn detector_count(&self) -> usize {
        2 * self.level_count
    }

    /// All splitters in topological order (level, then index).
    pub fn splitters(&self) -> &[BeamSplitter] {
        &self.splitters
    }

    pub fn level(&self, level: usize) -> &[BeamSplitter] {
        let start = level * (level - 1) / 2;
        &self.splitters[start..start + level]
    }

    /// The splitter at `level` whose output port number is `port`.
    pub fn splitter_for_port(&self, level: usize, port: usize) -> &BeamSplitter {
        &self.level(level)[(port - 1) / 2]
    }

    /// Where output port `port` of `level` is routed at the next level:
    /// `(splitter index, side of its input)`.
    pub fn downstream(&self, port: usize) -> (usize, InputSide) {
        let owner = port.div_ceil(2);
        if port % 2 == 1 {
            (owner, InputSide::Right)
        } else {
            (owner + 1, InputSide::Left)
        }
    }
}

/// Builds the depth-`level_count` pyramid.
pub fn build_network(level_count: usize, limits: &Limits) -> Result<Network> {
    if level_count == 0 {
        return Err(Error::invalid("level count must be at least 1"));
    }
    if level_count > limits.max_level {
        return Err(Error::invalid(format!(
            "level count {level_count} exceeds the maximum of {}",
            limits.max_level
        )));
    }

    let mut splitters = Vec::with_capacity(level_count * (level_count + 1) / 2);
    splitters.push(BeamSplitter {
        level: 1,
        index: 1,
        left_input: Feed::Injection(InputSide::Left),
        right_input: Feed::Injection(InputSide::Right),
    });
    for level in 2..=level_count {
        for index in 1..=level {
            let left_input = if index == 1 {
                Feed::Vacuum
            } else {
                Feed::Port(2 * (index - 1))
            };
            let right_input = if index == level {
                Feed::Vacuum
            } else {
                Feed::Port(2 * index - 1)
            };
            splitters.push(BeamSplitter {
                level,
                index,
                left_input,
                right_input,
            });
        }
    }
    Ok(Network {
        level_count,
        splitters,
    })
}

/// One splitter's action on the amplitudes arriving at its two inputs.
fn split(
    left: &HalfPowerAmplitude,
    right: &HalfPowerAmplitude,
) -> (HalfPowerAmplitude, HalfPowerAmplitude) {
    let t = HalfPowerAmplitude::transmit();
    let r = HalfPowerAmplitude::reflect();
    let left_out = &(&r * left) + &(&t * right);
    let right_out = &(&t * left) + &(&r * right);
    (left_out, right_out)
}

/// Exact amplitudes at detectors `D1..D2L` for one photon injected at `side`.
pub fn propagate_single(network: &Network, side: InputSide) -> Vec<HalfPowerAmplitude> {
    let mut ports: Vec<HalfPowerAmplitude> = Vec::new();
    for level in 1..=network.level_count() {
        let mut next = Vec::with_capacity(2 * level);
        for splitter in network.level(level) {
            let fetch = |feed: Feed| match feed {
                Feed::Vacuum => HalfPowerAmplitude::zero(),
                Feed::Injection(s) if s == side => HalfPowerAmplitude::one(),
                Feed::Injection(_) => HalfPowerAmplitude::zero(),
                Feed::Port(p) => ports[p - 1].clone(),
            };
            let (l, r) = split(&fetch(splitter.left_input), &fetch(splitter.right_input));
            next.push(l);
            next.push(r);
        }
        ports = next;
    }
    ports
}

/// The single-photon isometry from the two input ports to the `2L` detectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    level_count: usize,
    left: Vec<HalfPowerAmplitude>,
    right: Vec<HalfPowerAmplitude>,
}

impl TransferMatrix {
    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn detector_count(&self) -> usize {
        2 * self.level_count
    }

    pub fn column(&self, side: InputSide) -> &[HalfPowerAmplitude] {
        match side {
            InputSide::Left => &self.left,
            InputSide::Right => &self.right,
        }
    }

    /// Amplitude at 1-based `detector` for injection at `side`.
    pub fn entry(&self, side: InputSide, detector: usize) -> &HalfPowerAmplitude {
        &self.column(side)[detector - 1]
    }

    /// Checks normalization, orthogonality and mirror symmetry exactly.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.detector_count();
        for side in [InputSide::Left, InputSide::Right] {
            let total = self
                .column(side)
                .iter()
                .fold(BigRational::zero(), |acc, a| acc + a.norm_sqr());
            if !total.is_one() {
                return Err(Error::Defect(format!(
                    "{} column has squared norm {total}",
                    side.label()
                )));
            }
        }
        let overlap = self
            .left
            .iter()
            .zip(&self.right)
            .fold(HalfPowerAmplitude::zero(), |acc, (u, v)| {
                &acc + &(u * &v.conj())
            });
        if !overlap.is_zero() {
            return Err(Error::Defect(format!("columns overlap by {overlap}")));
        }
        for k in 0..n {
            if self.right[k] != self.left[n - 1 - k] {
                return Err(Error::Defect(format!(
                    "mirror symmetry broken at detector {}",
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

pub fn transfer_matrix(network: &Network) -> Result<TransferMatrix> {
    let tm = TransferMatrix {
        level_count: network.level_count(),
        left: propagate_single(network, InputSide::Left),
        right: propagate_single(network, InputSide::Right),
    };
    tm.check_invariants()?;
    Ok(tm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(re: i64, im: i64, h: u32) -> HalfPowerAmplitude {
        HalfPowerAmplitude::new(re, im, h)
    }

    fn net(l: usize) -> Network {
        build_network(l, &Limits::default()).unwrap()
    }

    #[test]
    fn smallest_pyramid() {
        let n = net(1);
        assert_eq!(n.splitters().len(), 1);
        assert_eq!(n.detector_count(), 2);
        let bs = n.splitters()[0];
        assert_eq!(bs.left_input, Feed::Injection(InputSide::Left));
        assert_eq!(bs.right_input, Feed::Injection(InputSide::Right));
    }

    #[test]
    fn level_three_shape() {
        let n = net(3);
        for l in 1..=3 {
            assert_eq!(n.level(l).len(), l);
            assert!(n.level(l).iter().all(|bs| bs.level == l));
        }
        assert_eq!(n.detector_count(), 6);
        // Central splitter of level 3 is fed by both level-2 splitters.
        let central = n.level(3)[1];
        assert_eq!(central.left_input, Feed::Port(2));
        assert_eq!(central.right_input, Feed::Port(3));
        assert_eq!(n.level(3)[0].left_input, Feed::Vacuum);
        assert_eq!(n.level(3)[2].right_input, Feed::Vacuum);
    }

    #[test]
    fn only_level_one_is_injected() {
        let n = net(5);
        let injected = n
            .splitters()
            .iter()
            .flat_map(|bs| [bs.left_input, bs.right_input])
            .filter(|f| matches!(f, Feed::Injection(_)))
            .count();
        assert_eq!(injected, 2);
    }

    #[test]
    fn rejects_bad_levels() {
        assert!(matches!(
            build_network(0, &Limits::default()),
            Err(Error::InvalidArgument(_))
        ));
        let err = build_network(25, &Limits::default()).unwrap_err();
        assert!(err.to_string().contains("24"));
        let wide = Limits {
            max_level: 30,
            ..Limits::default()
        };
        assert!(build_network(25, &wide).is_ok());
    }

    #[test]
    fn downstream_matches_wiring() {
        let n = net(4);
        for level in 1..4 {
            for port in 1..=2 * level {
                let (idx, side) = n.downstream(port);
                let bs = n.level(level + 1)[idx - 1];
                let feed = match side {
                    InputSide::Left => bs.left_input,
                    InputSide::Right => bs.right_input,
                };
                assert_eq!(feed, Feed::Port(port));
            }
        }
    }

    #[test]
    fn single_splitter_columns() {
        let tm = transfer_matrix(&net(1)).unwrap();
        assert_eq!(tm.column(InputSide::Left), &[amp(0, 1, 1), amp(1, 0, 1)]);
        assert_eq!(tm.column(InputSide::Right), &[amp(1, 0, 1), amp(0, 1, 1)]);
    }

    #[test]
    fn level_two_left_column() {
        let col = propagate_single(&net(2), InputSide::Left);
        assert_eq!(
            col,
            vec![amp(0, 1, 2), amp(-1, 0, 2), amp(0, 1, 2), amp(1, 0, 2)]
        );
    }

    #[test]
    fn level_three_orientation() {
        let n = net(3);
        let left = propagate_single(&n, InputSide::Left);
        let right = propagate_single(&n, InputSide::Right);
        assert_eq!(
            left,
            vec![
                amp(0, 1, 3),
                amp(-1, 0, 3),
                amp(0, 0, 0),
                amp(-2, 0, 3),
                amp(0, 1, 3),
                amp(1, 0, 3)
            ]
        );
        assert_eq!(
            right,
            vec![
                amp(1, 0, 3),
                amp(0, 1, 3),
                amp(-2, 0, 3),
                amp(0, 0, 0),
                amp(-1, 0, 3),
                amp(0, 1, 3)
            ]
        );
    }

    #[test]
    fn isometry_up_to_twelve_levels() {
        for l in 1..=12 {
            let tm = transfer_matrix(&net(l)).unwrap();
            tm.check_invariants().unwrap();
            for a in tm.column(InputSide::Left) {
                assert!(a.half_exp() as usize <= l);
            }
        }
    }

    #[test]
    fn edge_detectors_get_one_path_worth() {
        for l in 1..=10 {
            let tm = transfer_matrix(&net(l)).unwrap();
            let edge = BigRational::new(1.into(), num_bigint::BigInt::one() << l);
            for side in [InputSide::Left, InputSide::Right] {
                assert_eq!(tm.entry(side, 1).norm_sqr(), edge);
                assert_eq!(tm.entry(side, 2 * l).norm_sqr(), edge);
            }
        }
    }

    #[test]
    fn broken_matrix_is_reported() {
        let mut tm = transfer_matrix(&net(2)).unwrap();
        tm.right.swap(0, 1);
        assert!(matches!(tm.check_invariants(), Err(Error::Defect(_))));
    }
}
