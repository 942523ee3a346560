//! Topology, directional links, flows, and multi-hop paths.
//!
//! A [`Topology`] is immutable during a run: node positions, one PNC flag,
//! and a full directed rate map where rate 0 means the link is blocked.
//! Rates are integers in a configured alphabet, numerically the number of
//! packets a link transmits per time slot.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Index of a node in the topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u16);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a traffic flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowId(pub u16);

impl fmt::Display for FlowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point in the plane, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// A directed link between two distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub src: NodeId,
    pub dst: NodeId,
}

impl Link {
    pub fn new(src: NodeId, dst: NodeId) -> Self {
        Link { src, dst }
    }

    /// True iff the two links share at least one endpoint node.
    pub fn touches(&self, node: NodeId) -> bool {
        self.src == node || self.dst == node
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.dst)
    }
}

/// Adjacency of directed links: true iff they have a common vertex.
/// Symmetric, and reflexive on any link (a link shares both endpoints with
/// itself).
pub fn adjacent(a: Link, b: Link) -> bool {
    a.touches(b.src) || a.touches(b.dst)
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkError {
    /// Node ids out of range or duplicate positions.
    BadTopology(String),
    /// A path violates chaining, loop-freedom, or positive-rate rules.
    BadPath(String),
    /// Split does not conserve the flow demand.
    BadSplit { expected: u64, got: u64 },
    /// Zero-length averaging window.
    ZeroFrame,
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::BadTopology(msg) => write!(f, "bad topology: {msg}"),
            NetworkError::BadPath(msg) => write!(f, "bad path: {msg}"),
            NetworkError::BadSplit { expected, got } => {
                write!(f, "split sums to {got}, demand is {expected}")
            }
            NetworkError::ZeroFrame => write!(f, "frame length must be positive"),
        }
    }
}

/// The network under schedule: node positions, the PNC, and directional
/// link rates (packets per slot; 0 = blocked).
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<Point>,
    labels: Vec<String>,
    pnc: NodeId,
    /// Dense row-major rate matrix, `rate[s * n + r]`.
    rates: Vec<u32>,
    /// Permitted nonzero rates, ascending.
    alphabet: Vec<u32>,
}

impl Topology {
    /// Build a topology with all rates initially blocked.
    pub fn new(
        positions: Vec<Point>,
        labels: Vec<String>,
        pnc: NodeId,
        alphabet: Vec<u32>,
    ) -> Result<Self, NetworkError> {
        let n = positions.len();
        if n < 2 {
            return Err(NetworkError::BadTopology("need at least two nodes".into()));
        }
        if labels.len() != n {
            return Err(NetworkError::BadTopology("label count != node count".into()));
        }
        if (pnc.0 as usize) >= n {
            return Err(NetworkError::BadTopology("pnc id out of range".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if positions[i] == positions[j] {
                    return Err(NetworkError::BadTopology(
                        "positions must be pairwise distinct".into(),
                    ));
                }
            }
        }
        let mut alphabet = alphabet;
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.iter().any(|&r| r == 0) {
            return Err(NetworkError::BadTopology("alphabet rates must be > 0".into()));
        }
        Ok(Topology {
            rates: alloc::vec![0; n * n],
            positions,
            labels,
            pnc,
            alphabet,
        })
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    /// Maximum number of pairwise non-adjacent links, ⌊n/2⌋.
    pub fn max_concurrent_links(&self) -> usize {
        self.node_count() / 2
    }

    pub fn pnc(&self) -> NodeId {
        self.pnc
    }

    pub fn position(&self, node: NodeId) -> Point {
        self.positions[node.0 as usize]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.0 as usize]
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        self.position(a).distance(&self.position(b))
    }

    pub fn rate(&self, link: Link) -> u32 {
        self.rates[link.src.0 as usize * self.node_count() + link.dst.0 as usize]
    }

    pub fn set_rate(&mut self, link: Link, rate: u32) -> Result<(), NetworkError> {
        if link.src == link.dst {
            return Err(NetworkError::BadTopology("self link".into()));
        }
        if rate != 0 && !self.alphabet.contains(&rate) {
            return Err(NetworkError::BadTopology(alloc::format!(
                "rate {rate} not in alphabet"
            )));
        }
        let n = self.node_count();
        self.rates[link.src.0 as usize * n + link.dst.0 as usize] = rate;
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count() as u16).map(NodeId)
    }

    /// A copy with every nonzero rate replaced by `rate` (FDMAC-UR view).
    pub fn with_uniform_rate(&self, rate: u32) -> Topology {
        let mut t = self.clone();
        if !t.alphabet.contains(&rate) {
            t.alphabet.push(rate);
            t.alphabet.sort_unstable();
        }
        for r in t.rates.iter_mut() {
            if *r != 0 {
                *r = rate;
            }
        }
        t
    }
}

/// Distance-to-rate quantizer: ascending buckets of (max distance, rate);
/// distances beyond the last bucket map to rate 0 (blocked).
#[derive(Debug, Clone, PartialEq)]
pub struct RateQuantizer {
    buckets: Vec<(f64, u32)>,
}

impl RateQuantizer {
    pub fn new(mut buckets: Vec<(f64, u32)>) -> Self {
        buckets.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        RateQuantizer { buckets }
    }

    /// Default quantizer for a square arena: thresholds at 25%/50%/75%/100%
    /// of the diagonal mapping to rates 4/3/2/1.
    pub fn for_square_arena(side_m: f64) -> Self {
        let diag = side_m * core::f64::consts::SQRT_2;
        RateQuantizer::new(alloc::vec![
            (0.25 * diag, 4),
            (0.50 * diag, 3),
            (0.75 * diag, 2),
            (diag, 1),
        ])
    }

    /// Like [`for_square_arena`](Self::for_square_arena) but with the last
    /// bucket ending at `blocked_frac` of the diagonal, so the longest pairs
    /// are blocked.
    pub fn blocking(side_m: f64, blocked_frac: f64) -> Self {
        let diag = side_m * core::f64::consts::SQRT_2;
        let top = blocked_frac * diag;
        RateQuantizer::new(alloc::vec![
            (0.25 * top, 4),
            (0.50 * top, 3),
            (0.75 * top, 2),
            (top, 1),
        ])
    }

    pub fn quantize(&self, dist_m: f64) -> u32 {
        for &(max_d, rate) in &self.buckets {
            if dist_m <= max_d {
                return rate;
            }
        }
        0
    }

    pub fn rates(&self) -> impl Iterator<Item = u32> + '_ {
        self.buckets.iter().map(|&(_, r)| r)
    }
}

/// Fill every ordered node pair's rate from inter-node distance.
/// Deterministic in its inputs.
pub fn rate_from_distance(topology: &mut Topology, quantizer: &RateQuantizer) {
    let n = topology.node_count();
    for s in 0..n as u16 {
        for r in 0..n as u16 {
            if s == r {
                continue;
            }
            let link = Link::new(NodeId(s), NodeId(r));
            let rate = quantizer.quantize(topology.distance(NodeId(s), NodeId(r)));
            let idx = s as usize * n + r as usize;
            topology.rates[idx] = rate;
            if rate != 0 && !topology.alphabet.contains(&rate) {
                topology.alphabet.push(rate);
                topology.alphabet.sort_unstable();
            }
            let _ = link;
        }
    }
}

/// A traffic demand: source, destination, queued packets, and the
/// long-run demand intensity estimate D̄ (packets per slot).
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub id: FlowId,
    pub src: NodeId,
    pub dst: NodeId,
    pub demand_pkts: u64,
    pub demand_intensity: f64,
}

impl Flow {
    pub fn new(id: FlowId, src: NodeId, dst: NodeId) -> Self {
        Flow {
            id,
            src,
            dst,
            demand_pkts: 0,
            demand_intensity: 0.0,
        }
    }

    pub fn direct_link(&self) -> Link {
        Link::new(self.src, self.dst)
    }
}

/// Exponential moving average update of the demand intensity:
/// D̄ ← (1−α)·D̄ + α·(arrivals / frame_slots).
pub fn demand_intensity_update(
    current: f64,
    arrivals_this_frame: u64,
    frame_slots: u64,
    alpha: f64,
) -> Result<f64, NetworkError> {
    if frame_slots == 0 {
        return Err(NetworkError::ZeroFrame);
    }
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    let rate = arrivals_this_frame as f64 / frame_slots as f64;
    Ok((1.0 - alpha) * current + alpha * rate)
}

/// A loop-free chain of directed hops.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    hops: Vec<Link>,
}

impl Path {
    /// Validate chaining, loop-freedom, and positive rates.
    pub fn new(hops: Vec<Link>, topology: &Topology) -> Result<Self, NetworkError> {
        if hops.is_empty() {
            return Err(NetworkError::BadPath("empty path".into()));
        }
        for w in hops.windows(2) {
            if w[0].dst != w[1].src {
                return Err(NetworkError::BadPath("hops do not chain".into()));
            }
        }
        let mut seen = Vec::with_capacity(hops.len() + 1);
        seen.push(hops[0].src);
        for h in &hops {
            if seen.contains(&h.dst) {
                return Err(NetworkError::BadPath("path has a loop".into()));
            }
            seen.push(h.dst);
        }
        for h in &hops {
            if topology.rate(*h) == 0 {
                return Err(NetworkError::BadPath(alloc::format!("hop {h} is blocked")));
            }
        }
        Ok(Path { hops })
    }

    pub fn hops(&self) -> &[Link] {
        &self.hops
    }

    pub fn hop_count(&self) -> usize {
        self.hops.len()
    }

    pub fn first_node(&self) -> NodeId {
        self.hops[0].src
    }

    pub fn last_node(&self) -> NodeId {
        self.hops[self.hops.len() - 1].dst
    }

    /// The lowest transmission rate on the path, c_l(p).
    pub fn bottleneck_rate(&self, topology: &Topology) -> u32 {
        self.hops.iter().map(|h| topology.rate(*h)).min().unwrap()
    }

    /// The hop carrying the lowest rate (first such hop on ties).
    pub fn bottleneck_hop(&self, topology: &Topology) -> Link {
        let c = self.bottleneck_rate(topology);
        *self.hops.iter().find(|h| topology.rate(**h) == c).unwrap()
    }

    /// Node id sequence, for deterministic ordering.
    pub fn node_seq(&self) -> Vec<NodeId> {
        let mut seq = Vec::with_capacity(self.hops.len() + 1);
        seq.push(self.hops[0].src);
        seq.extend(self.hops.iter().map(|h| h.dst));
        seq
    }

    pub fn shares_hop_with(&self, other: &Path) -> bool {
        self.hops.iter().any(|h| other.hops.contains(h))
    }
}

/// A flow's selected paths P_s(v) and the per-path demand split d_vp.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub flow: FlowId,
    pub paths: Vec<Path>,
    pub split: Vec<u64>,
}

impl PathSet {
    pub fn new(
        flow: FlowId,
        paths: Vec<Path>,
        split: Vec<u64>,
        demand: u64,
    ) -> Result<Self, NetworkError> {
        if paths.len() != split.len() {
            return Err(NetworkError::BadPath("split length != path count".into()));
        }
        let got: u64 = split.iter().sum();
        if got != demand {
            return Err(NetworkError::BadSplit {
                expected: demand,
                got,
            });
        }
        for i in 0..paths.len() {
            for j in (i + 1)..paths.len() {
                if paths[i].shares_hop_with(&paths[j]) {
                    return Err(NetworkError::BadPath("paths share a hop".into()));
                }
            }
        }
        Ok(PathSet { flow, paths, split })
    }

    /// Drop paths whose split rounded to zero; preserves order.
    pub fn without_zero_splits(mut self) -> Self {
        let keep: Vec<bool> = self.split.iter().map(|&d| d > 0).collect();
        let mut paths = Vec::new();
        let mut split = Vec::new();
        for (i, p) in self.paths.drain(..).enumerate() {
            if keep[i] {
                paths.push(p);
                split.push(self.split[i]);
            }
        }
        PathSet {
            flow: self.flow,
            paths,
            split,
        }
    }

    pub fn total_demand(&self) -> u64 {
        self.split.iter().sum()
    }
}
