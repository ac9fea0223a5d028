//! Two-stage layered relay-interference networks under the shift model.
//!
//! Sources `S1, S2` reach relays `R1, R2`; relays reach destinations
//! `D1, D2`. Every link carries `J^(q - g)` for its integer gain `g`, so the
//! top `g` bits of the sender land on the bottom `g` subnodes of the
//! receiver and superpose there by XOR.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};

pub const MAX_BIT_WIDTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// All eight links may be present.
    Xx,
    /// `S1 -> R2` and `R2 -> D1` are absent.
    Zs,
    /// `S1 -> R2` and `R1 -> D2` are absent.
    Zz,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Xx, Topology::Zs, Topology::Zz];

    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Xx => "xx",
            Topology::Zs => "zs",
            Topology::Zz => "zz",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Xx => "XX",
            Topology::Zs => "ZS",
            Topology::Zz => "ZZ",
        })
    }
}

impl std::str::FromStr for Topology {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xx" => Ok(Topology::Xx),
            "zs" => Ok(Topology::Zs),
            "zz" => Ok(Topology::Zz),
            other => Err(format!("unknown topology {other:?} (expected xx, zs or zz)")),
        }
    }
}

/// Bit-width, topology tag and the eight link exponents of a network.
///
/// `m[i][j]` is the gain of `S_{j+1} -> R_{i+1}` and `n[i][j]` the gain of
/// `R_{j+1} -> D_{i+1}`. Profiles are validated on construction, including
/// the zero links implied by the topology tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct GainProfile {
    q: usize,
    topology: Topology,
    m: [[usize; 2]; 2],
    n: [[usize; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    q: usize,
    topology: Topology,
    m: [[i64; 2]; 2],
    n: [[i64; 2]; 2],
}

impl TryFrom<RawProfile> for GainProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        let q = raw.q;
        let conv = |g: [[i64; 2]; 2]| -> Result<[[usize; 2]; 2]> {
            let mut out = [[0usize; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let e = g[i][j];
                    if e < 0 || e as u64 > q as u64 {
                        return Err(Error::InvalidExponent { exponent: e, q });
                    }
                    out[i][j] = e as usize;
                }
            }
            Ok(out)
        };
        GainProfile::new(q, raw.topology, conv(raw.m)?, conv(raw.n)?)
    }
}

impl From<GainProfile> for RawProfile {
    fn from(p: GainProfile) -> Self {
        let conv = |g: [[usize; 2]; 2]| g.map(|row| row.map(|e| e as i64));
        RawProfile {
            q: p.q,
            topology: p.topology,
            m: conv(p.m),
            n: conv(p.n),
        }
    }
}

impl GainProfile {
    pub fn new(
        q: usize,
        topology: Topology,
        m: [[usize; 2]; 2],
        n: [[usize; 2]; 2],
    ) -> Result<Self> {
        if q > MAX_BIT_WIDTH {
            return Err(Error::BitWidthTooLarge(q));
        }
        for &e in m.iter().chain(n.iter()).flatten() {
            if e > q {
                return Err(Error::InvalidExponent {
                    exponent: e as i64,
                    q,
                });
            }
        }
        let forced_zero: [(&'static str, usize); 2] = match topology {
            Topology::Xx => return Ok(GainProfile { q, topology, m, n }),
            Topology::Zs => [("m21", m[1][0]), ("n12", n[0][1])],
            Topology::Zz => [("m21", m[1][0]), ("n21", n[1][0])],
        };
        for (link, value) in forced_zero {
            if value != 0 {
                return Err(Error::TopologyViolation {
                    topology,
                    link,
                    value,
                });
            }
        }
        Ok(GainProfile { q, topology, m, n })
    }

    /// ZS network: first hop `S1->R1, S2->R1, S2->R2`, second hop `R1->D1, R1->D2, R2->D2`.
    pub fn zs(q: usize, m11: usize, m12: usize, m22: usize, n11: usize, n21: usize, n22: usize) -> Result<Self> {
        Self::new(q, Topology::Zs, [[m11, m12], [0, m22]], [[n11, 0], [n21, n22]])
    }

    /// ZZ network: first hop `S1->R1, S2->R1, S2->R2`, second hop `R1->D1, R2->D1, R2->D2`.
    pub fn zz(q: usize, m11: usize, m12: usize, m22: usize, n11: usize, n12: usize, n22: usize) -> Result<Self> {
        Self::new(q, Topology::Zz, [[m11, m12], [0, m22]], [[n11, n12], [0, n22]])
    }

    /// Real-valued power gains `|h|^2` mapped through [`gain_to_exponent`] and clamped to `q`.
    pub fn from_power_gains(
        q: usize,
        topology: Topology,
        m: [[f64; 2]; 2],
        n: [[f64; 2]; 2],
    ) -> Result<Self> {
        let conv = |g: [[f64; 2]; 2]| -> Result<[[usize; 2]; 2]> {
            let mut out = [[0usize; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = gain_to_exponent(g[i][j])?.min(q);
                }
            }
            Ok(out)
        };
        Self::new(q, topology, conv(m)?, conv(n)?)
    }

    /// Every valid profile of the given topology and bit-width, in canonical order.
    pub fn enumerate(topology: Topology, q: usize) -> Vec<GainProfile> {
        let free: Vec<(usize, usize, usize)> = match topology {
            Topology::Xx => vec![(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)],
            Topology::Zs => vec![(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 0), (1, 1, 1)],
            Topology::Zz => vec![(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 1)],
        };
        let base = q + 1;
        let total = base.pow(free.len() as u32);
        (0..total)
            .map(|mut code| {
                let mut m = [[0; 2]; 2];
                let mut n = [[0; 2]; 2];
                let mut digits = vec![0; free.len()];
                for d in digits.iter_mut().rev() {
                    *d = code % base;
                    code /= base;
                }
                for (&(layer, i, j), &d) in free.iter().zip(&digits) {
                    if layer == 0 {
                        m[i][j] = d;
                    } else {
                        n[i][j] = d;
                    }
                }
                GainProfile::new(q, topology, m, n).expect("enumerated profile is valid")
            })
            .collect()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn m(&self) -> [[usize; 2]; 2] {
        self.m
    }

    pub fn n(&self) -> [[usize; 2]; 2] {
        self.n
    }

    pub fn m11(&self) -> usize {
        self.m[0][0]
    }
    pub fn m12(&self) -> usize {
        self.m[0][1]
    }
    pub fn m21(&self) -> usize {
        self.m[1][0]
    }
    pub fn m22(&self) -> usize {
        self.m[1][1]
    }
    pub fn n11(&self) -> usize {
        self.n[0][0]
    }
    pub fn n12(&self) -> usize {
        self.n[0][1]
    }
    pub fn n21(&self) -> usize {
        self.n[1][0]
    }
    pub fn n22(&self) -> usize {
        self.n[1][1]
    }

    /// Copy with exponents replaced; revalidated.
    pub fn with_gains(&self, m: [[usize; 2]; 2], n: [[usize; 2]; 2]) -> Result<Self> {
        Self::new(self.q, self.topology, m, n)
    }

    /// Channel matrix `S_{source+1} -> R_{relay+1}` (0-based indices).
    pub fn first_hop(&self, relay: usize, source: usize) -> Gf2Matrix {
        Gf2Matrix::shift(self.q, self.m[relay][source]).expect("validated exponent")
    }

    /// Channel matrix `R_{relay+1} -> D_{dest+1}` (0-based indices).
    pub fn second_hop(&self, dest: usize, relay: usize) -> Gf2Matrix {
        Gf2Matrix::shift(self.q, self.n[dest][relay]).expect("validated exponent")
    }

    /// Gain of the link `from -> to`, or `None` when the two nodes are not in adjacent layers.
    pub fn link_gain(&self, from: Node, to: Node) -> Option<usize> {
        match (from.transmit_index(), to.receive_index()) {
            (Some((Layer::Source, j)), Some((Layer::Relay, i))) => Some(self.m[i][j]),
            (Some((Layer::Relay, j)), Some((Layer::Destination, i))) => Some(self.n[i][j]),
            _ => None,
        }
    }

    pub fn first_layer(&self, x1: &Gf2Vector, x2: &Gf2Vector) -> Result<(Gf2Vector, Gf2Vector)> {
        first_layer(self, x1, x2)
    }

    pub fn second_layer(&self, x1p: &Gf2Vector, x2p: &Gf2Vector) -> Result<(Gf2Vector, Gf2Vector)> {
        second_layer(self, x1p, x2p)
    }
}

impl fmt::Display for GainProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} q={} m=[{},{},{},{}] n=[{},{},{},{}]",
            self.topology,
            self.q,
            self.m11(),
            self.m12(),
            self.m21(),
            self.m22(),
            self.n11(),
            self.n12(),
            self.n21(),
            self.n22()
        )
    }
}

fn superpose(
    q: usize,
    gains: [[usize; 2]; 2],
    x1: &Gf2Vector,
    x2: &Gf2Vector,
) -> Result<(Gf2Vector, Gf2Vector)> {
    for x in [x1, x2] {
        if x.len() != q {
            return Err(Error::DimensionMismatch {
                op: "layer input",
                left: (q, 1),
                right: (x.len(), 1),
            });
        }
    }
    let rx = |i: usize| -> Result<Gf2Vector> {
        let a = Gf2Matrix::shift(q, gains[i][0])?.apply(x1)?;
        let b = Gf2Matrix::shift(q, gains[i][1])?.apply(x2)?;
        a.xor(&b)
    };
    Ok((rx(0)?, rx(1)?))
}

/// Signals received by `R1, R2` when the sources transmit `x1, x2`.
pub fn first_layer(profile: &GainProfile, x1: &Gf2Vector, x2: &Gf2Vector) -> Result<(Gf2Vector, Gf2Vector)> {
    superpose(profile.q, profile.m, x1, x2)
}

/// Signals received by `D1, D2` when the relays transmit `x1p, x2p`.
pub fn second_layer(profile: &GainProfile, x1p: &Gf2Vector, x2p: &Gf2Vector) -> Result<(Gf2Vector, Gf2Vector)> {
    superpose(profile.q, profile.n, x1p, x2p)
}

/// Integer exponent `ceil(log2(|h|^2) / 2)` for a real power gain; gains at or below 1 map to 0.
pub fn gain_to_exponent(h_squared: f64) -> Result<usize> {
    if !h_squared.is_finite() || h_squared < 0.0 {
        return Err(Error::NegativeGain(h_squared));
    }
    if h_squared <= 1.0 {
        return Ok(0);
    }
    Ok((0.5 * h_squared.log2()).ceil() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    S1,
    S2,
    R1,
    R2,
    D1,
    D2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layer {
    Source,
    Relay,
    Destination,
}

impl Node {
    pub const ALL: [Node; 6] = [Node::S1, Node::S2, Node::R1, Node::R2, Node::D1, Node::D2];

    fn transmit_index(self) -> Option<(Layer, usize)> {
        match self {
            Node::S1 => Some((Layer::Source, 0)),
            Node::S2 => Some((Layer::Source, 1)),
            Node::R1 => Some((Layer::Relay, 0)),
            Node::R2 => Some((Layer::Relay, 1)),
            Node::D1 | Node::D2 => None,
        }
    }

    fn receive_index(self) -> Option<(Layer, usize)> {
        match self {
            Node::R1 => Some((Layer::Relay, 0)),
            Node::R2 => Some((Layer::Relay, 1)),
            Node::D1 => Some((Layer::Destination, 0)),
            Node::D2 => Some((Layer::Destination, 1)),
            Node::S1 | Node::S2 => None,
        }
    }

    pub fn transmits(self) -> bool {
        self.transmit_index().is_some()
    }

    pub fn receives(self) -> bool {
        self.receive_index().is_some()
    }
}

/// Partition of the six nodes into a source side and a destination side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutSpec {
    source_side: BTreeSet<Node>,
}

impl CutSpec {
    /// `dest_side` must be exactly the complement of `source_side`. At least
    /// one session must cross the cut (its source on the source side and its
    /// destination on the other side).
    pub fn new(source_side: &[Node], dest_side: &[Node]) -> Result<Self> {
        let src: BTreeSet<Node> = source_side.iter().copied().collect();
        let dst: BTreeSet<Node> = dest_side.iter().copied().collect();
        if src.len() != source_side.len() || dst.len() != dest_side.len() {
            return Err(Error::InvalidCut("duplicate node".into()));
        }
        if let Some(n) = src.intersection(&dst).next() {
            return Err(Error::InvalidCut(format!("{n:?} is on both sides")));
        }
        if src.len() + dst.len() != Node::ALL.len() {
            return Err(Error::InvalidCut("sides do not cover all six nodes".into()));
        }
        let cut = CutSpec { source_side: src };
        if cut.separated_sessions().is_empty() {
            return Err(Error::InvalidCut("no session crosses the cut".into()));
        }
        Ok(cut)
    }

    /// Cut with the given source side; the destination side is the complement.
    pub fn from_source_side(source_side: &[Node]) -> Result<Self> {
        let dest: Vec<Node> = Node::ALL
            .iter()
            .copied()
            .filter(|n| !source_side.contains(n))
            .collect();
        Self::new(source_side, &dest)
    }

    pub fn on_source_side(&self, node: Node) -> bool {
        self.source_side.contains(&node)
    }

    pub fn source_side(&self) -> impl Iterator<Item = Node> + '_ {
        self.source_side.iter().copied()
    }

    pub fn dest_side(&self) -> impl Iterator<Item = Node> + '_ {
        Node::ALL.into_iter().filter(|n| !self.source_side.contains(n))
    }

    /// Sessions (1 and/or 2) whose source and destination are separated by this cut.
    pub fn separated_sessions(&self) -> Vec<usize> {
        [(Node::S1, Node::D1, 1), (Node::S2, Node::D2, 2)]
            .into_iter()
            .filter(|&(s, d, _)| self.on_source_side(s) && !self.on_source_side(d))
            .map(|(_, _, k)| k)
            .collect()
    }
}

/// Rank of the transfer matrix from transmit subnodes on the source side to
/// receive subnodes on the destination side.
pub fn cut_value(profile: &GainProfile, cut: &CutSpec) -> usize {
    let q = profile.q;
    let senders: Vec<Node> = cut.source_side().filter(|n| n.transmits()).collect();
    let receivers: Vec<Node> = cut.dest_side().filter(|n| n.receives()).collect();
    if senders.is_empty() || receivers.is_empty() || q == 0 {
        return 0;
    }
    let transfer = Gf2Matrix::from_fn(receivers.len() * q, senders.len() * q, |row, col| {
        let (rx, tx) = (receivers[row / q], senders[col / q]);
        match profile.link_gain(tx, rx) {
            Some(g) => row % q == col % q + (q - g),
            None => false,
        }
    });
    transfer.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: &[u8]) -> Gf2Vector {
        Gf2Vector::from_bits(bits).unwrap()
    }

    #[test]
    fn zero_channels_give_silence() {
        let p = GainProfile::new(3, Topology::Xx, [[0; 2]; 2], [[0; 2]; 2]).unwrap();
        let (a, b) = p.first_layer(&v(&[1, 0, 1]), &v(&[1, 1, 1])).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = p.second_layer(&v(&[1, 0, 1]), &v(&[1, 1, 1])).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn parallel_identity_links() {
        let p = GainProfile::new(3, Topology::Xx, [[3, 0], [0, 3]], [[3, 0], [0, 3]]).unwrap();
        let (x1, x2) = (v(&[1, 0, 1]), v(&[0, 1, 1]));
        assert_eq!(p.first_layer(&x1, &x2).unwrap(), (x1.clone(), x2.clone()));
        assert_eq!(p.second_layer(&x1, &x2).unwrap(), (x1, x2));
    }

    #[test]
    fn mac_superposition_matches_shift_semantics() {
        let p = GainProfile::zs(3, 3, 2, 0, 0, 0, 0).unwrap();
        // y1' = (a1, a2 + b1, a3 + b2)
        for code in 0..64u32 {
            let a: Vec<u8> = (0..3).map(|i| (code >> i & 1) as u8).collect();
            let b: Vec<u8> = (3..6).map(|i| (code >> i & 1) as u8).collect();
            let (y1, _) = p.first_layer(&v(&a), &v(&b)).unwrap();
            assert_eq!(y1.to_bits(), vec![a[0], a[1] ^ b[0], a[2] ^ b[1]]);
        }
    }

    #[test]
    fn second_layer_zz_overlap() {
        let p = GainProfile::zz(3, 0, 0, 0, 2, 2, 0).unwrap();
        let (y1, y2) = p.second_layer(&v(&[1, 0, 1]), &v(&[1, 1, 0])).unwrap();
        assert_eq!(y1.to_bits(), vec![0, 0, 1]);
        assert!(y2.is_zero());
    }

    #[test]
    fn layer_length_mismatch() {
        let p = GainProfile::zz(3, 1, 1, 1, 1, 1, 1).unwrap();
        assert!(p.first_layer(&v(&[1, 0]), &v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(
            GainProfile::new(3, Topology::Xx, [[5, 0], [0, 0]], [[0; 2]; 2]),
            Err(Error::InvalidExponent { exponent: 5, q: 3 })
        ));
        assert!(matches!(
            GainProfile::new(3, Topology::Zs, [[1, 1], [1, 1]], [[0; 2]; 2]),
            Err(Error::TopologyViolation { link: "m21", .. })
        ));
        assert!(matches!(
            GainProfile::new(3, Topology::Zz, [[1, 1], [0, 1]], [[1, 1], [1, 1]]),
            Err(Error::TopologyViolation { link: "n21", .. })
        ));
        assert!(matches!(
            GainProfile::new(3, Topology::Zs, [[1, 1], [0, 1]], [[1, 1], [1, 1]]),
            Err(Error::TopologyViolation { link: "n12", .. })
        ));
    }

    #[test]
    fn profile_json_roundtrip_and_validation() {
        let p = GainProfile::zz(3, 3, 2, 2, 3, 2, 2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"q":3,"topology":"zz","m":[[3,2],[0,2]],"n":[[3,2],[0,2]]}"#);
        assert_eq!(serde_json::from_str::<GainProfile>(&s).unwrap(), p);
        let bad = r#"{"q":3,"topology":"xx","m":[[5,0],[0,0]],"n":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<GainProfile>(bad).is_err());
        let neg = r#"{"q":3,"topology":"xx","m":[[-1,0],[0,0]],"n":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<GainProfile>(neg).is_err());
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(GainProfile::enumerate(Topology::Zz, 2).len(), 729);
        assert_eq!(GainProfile::enumerate(Topology::Zs, 1).len(), 64);
        assert_eq!(GainProfile::enumerate(Topology::Xx, 1).len(), 256);
        assert_eq!(GainProfile::enumerate(Topology::Zz, 0).len(), 1);
        let all = GainProfile::enumerate(Topology::Zs, 2);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn exponent_mapping() {
        assert_eq!(gain_to_exponent(1.0).unwrap(), 0);
        assert_eq!(gain_to_exponent(0.25).unwrap(), 0);
        assert_eq!(gain_to_exponent(4.0).unwrap(), 1);
        assert_eq!(gain_to_exponent(10.0).unwrap(), 2);
        assert_eq!(gain_to_exponent(16.0).unwrap(), 2);
        assert_eq!(gain_to_exponent(17.0).unwrap(), 3);
        assert!(gain_to_exponent(-1.0).is_err());
        assert!(gain_to_exponent(f64::NAN).is_err());
        let p = GainProfile::from_power_gains(2, Topology::Xx, [[1e9, 4.0], [0.5, 10.0]], [[1.0; 2]; 2]).unwrap();
        assert_eq!(p.m(), [[2, 1], [0, 2]]);
    }

    #[test]
    fn cut_spec_validation() {
        use Node::*;
        assert!(CutSpec::new(&[S1, S2], &[R1, R2, D1]).is_err());
        assert!(CutSpec::new(&[S1, S2, R1], &[R1, R2, D1, D2]).is_err());
        assert!(CutSpec::new(&[D1, D2], &[S1, S2, R1, R2]).is_err());
        let c = CutSpec::new(&[S2, R2], &[S1, R1, D1, D2]).unwrap();
        assert_eq!(c.separated_sessions(), vec![2]);
        assert_eq!(CutSpec::from_source_side(&[S1, S2]).unwrap().separated_sessions(), vec![1, 2]);
    }

    #[test]
    fn cut_values_match_rank_terms() {
        use Node::*;
        let zs = GainProfile::zs(3, 3, 2, 1, 2, 1, 3).unwrap();
        let cut = CutSpec::from_source_side(&[S2, R2]).unwrap();
        assert_eq!(cut_value(&zs, &cut), zs.m12() + zs.n22());
        let cut = CutSpec::from_source_side(&[S1, S2, R1, D1]).unwrap();
        assert_eq!(cut_value(&zs, &cut), zs.m22() + zs.n21());
        let cut = CutSpec::from_source_side(&[S1, S2, R2]).unwrap();
        assert_eq!(cut_value(&zs, &cut), zs.m11().max(zs.m12()) + zs.n22());
        let cut = CutSpec::from_source_side(&[S1, S2, R1]).unwrap();
        assert_eq!(cut_value(&zs, &cut), zs.m22() + zs.n11().max(zs.n21()));
    }

    #[test]
    fn broadcast_cut_on_xx_is_first_layer_rank() {
        use Node::*;
        let p = GainProfile::new(3, Topology::Xx, [[3, 1], [2, 3]], [[1, 1], [1, 1]]).unwrap();
        let block = p
            .first_hop(0, 0)
            .hstack(&p.first_hop(0, 1))
            .unwrap()
            .vstack(&p.first_hop(1, 0).hstack(&p.first_hop(1, 1)).unwrap())
            .unwrap();
        let cut = CutSpec::from_source_side(&[S1, S2]).unwrap();
        assert_eq!(cut_value(&p, &cut), block.rank());
    }

    #[test]
    fn zero_gain_cut_is_zero() {
        use Node::*;
        let p = GainProfile::zz(3, 0, 2, 2, 3, 2, 2).unwrap();
        let cut = CutSpec::from_source_side(&[S1]).unwrap();
        assert_eq!(cut_value(&p, &cut), 0);
    }

    #[test]
    fn cut_value_ignores_isolated_nodes() {
        use Node::*;
        for p in GainProfile::enumerate(Topology::Zs, 2) {
            // R2 with no incoming or outgoing gain can sit on either side.
            if p.m22() != 0 || p.n22() != 0 {
                continue;
            }
            let with = CutSpec::from_source_side(&[S1, S2, R2]).unwrap();
            let without = CutSpec::from_source_side(&[S1, S2]).unwrap();
            assert_eq!(cut_value(&p, &with), cut_value(&p, &without), "{p}");
        }
    }
}
