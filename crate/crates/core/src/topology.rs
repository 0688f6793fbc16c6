//! The n-dimensional balanced hypercube `BH_n`.
//!
//! A vertex is a length-`n` vector of mod-4 digits `(a0, a1, ..., a{n-1})`.
//! `a0` is the inner index and decides the vertex color: even is white,
//! odd is black. Every vertex has the `2n` neighbors
//!
//! * `(a0 ± 1, a1, ..., a{n-1})` (dimension 0), and
//! * `(a0 ± 1, a1, ..., ai + (-1)^a0, ..., a{n-1})` for `1 <= i < n`
//!   (dimension `i`).
//!
//! Deleting the dimension-`l` edges (`l >= 1`) splits `BH_n` into four copies
//! of `BH_{n-1}` indexed by digit `l`; see [`Partition`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest dimension accepted by [`NodeId`]; keeps dense indices in `usize`.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("dimension {0} is outside 1..={MAX_DIM}")]
    BadSize(usize),
    #[error("digit {digit} at position {pos} is not in 0..3")]
    BadDigit { pos: usize, digit: u8 },
    #[error("split dimension {l} is invalid for BH_{n} (need 1 <= l <= n-1)")]
    BadDimension { l: usize, n: usize },
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(NodeId, NodeId),
    #[error("{0} and {1} belong to different dimensions")]
    DimensionMismatch(NodeId, NodeId),
    #[error("cannot parse node {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("terminals agree on every digit >= 1, no split dimension exists")]
    NoSplit,
}

/// Vertex color in the bipartition of `BH_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::White => f.write_str("white"),
            Color::Black => f.write_str("black"),
        }
    }
}

/// A vertex of `BH_n`, identified by its digit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    coords: Vec<u8>,
}

impl NodeId {
    pub fn new(coords: Vec<u8>) -> Result<Self, TopologyError> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(TopologyError::BadSize(coords.len()));
        }
        if let Some((pos, &digit)) = coords.iter().enumerate().find(|(_, &d)| d > 3) {
            return Err(TopologyError::BadDigit { pos, digit });
        }
        Ok(NodeId { coords })
    }

    /// Builds a node from digits already known to be valid.
    pub(crate) fn from_digits(coords: Vec<u8>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|&d| d < 4));
        NodeId { coords }
    }

    /// The vertex with dense index `index` in `BH_n` (base 4, `a0` least significant).
    pub fn from_index(index: usize, n: usize) -> Self {
        debug_assert!(index < order(n));
        let coords = (0..n).map(|i| ((index >> (2 * i)) & 3) as u8).collect();
        NodeId { coords }
    }

    pub fn index(&self) -> usize {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, &d)| (d as usize) << (2 * i))
            .sum()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    /// The dimension `n` of the cube this vertex lives in.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn inner(&self) -> u8 {
        self.coords[0]
    }

    pub fn digit(&self, i: usize) -> u8 {
        self.coords[i]
    }

    pub fn color(&self) -> Color {
        if self.coords[0] % 2 == 0 {
            Color::White
        } else {
            Color::Black
        }
    }

    pub fn is_white(&self) -> bool {
        self.color() == Color::White
    }

    pub fn is_black(&self) -> bool {
        self.color() == Color::Black
    }

    /// `u` with the inner index shifted by 2; `u` and its image share the neighbor set.
    pub fn symmetric(&self) -> NodeId {
        let mut coords = self.coords.clone();
        coords[0] = (coords[0] + 2) % 4;
        NodeId { coords }
    }

    /// Direction `(-1)^a0` of the dimensional moves out of this vertex, as a mod-4 step.
    fn step(&self) -> u8 {
        if self.coords[0] % 2 == 0 {
            1
        } else {
            3
        }
    }

    /// The two dimension-`i` neighbors (`i >= 1`), or the two dimension-0 neighbors for `i == 0`.
    pub fn neighbors_in_dim(&self, i: usize) -> [NodeId; 2] {
        let step = self.step();
        let mut lo = self.coords.clone();
        let mut hi = self.coords.clone();
        lo[0] = (lo[0] + 3) % 4;
        hi[0] = (hi[0] + 1) % 4;
        if i > 0 {
            lo[i] = (lo[i] + step) % 4;
            hi[i] = (hi[i] + step) % 4;
        }
        [NodeId { coords: lo }, NodeId { coords: hi }]
    }

    /// The node with digit `dim` removed (used to map a subcube vertex to `BH_{n-1}`).
    pub fn without_digit(&self, dim: usize) -> NodeId {
        let mut coords = self.coords.clone();
        coords.remove(dim);
        NodeId { coords }
    }

    /// The node with `digit` inserted at position `dim`.
    pub fn with_digit(&self, dim: usize, digit: u8) -> NodeId {
        debug_assert!(digit < 4 && dim <= self.coords.len());
        let mut coords = self.coords.clone();
        coords.insert(dim, digit);
        NodeId { coords }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for NodeId {
    type Err = TopologyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_node(text)
    }
}

impl Serialize for NodeId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_node(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses the canonical text form `"(a0,a1,...,a{n-1})"`. Whitespace around digits is ignored.
pub fn parse_node(text: &str) -> Result<NodeId, TopologyError> {
    let err = |reason: &str| TopologyError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let body = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err("expected parenthesised digit list"))?;
    let mut coords = Vec::new();
    for part in body.split(',') {
        let part = part.trim();
        let digit: u8 = match part.as_bytes() {
            [c @ b'0'..=b'3'] => c - b'0',
            [] => return Err(err("empty digit")),
            _ => return Err(err(&format!("digit {part:?} is not in 0..3"))),
        };
        coords.push(digit);
    }
    NodeId::new(coords).map_err(|e| err(&e.to_string()))
}

pub fn format_node(u: &NodeId) -> String {
    u.to_string()
}

/// Number of vertices of `BH_n`.
pub fn order(n: usize) -> usize {
    1usize << (2 * n)
}

/// The raw neighbor list of Def. 2.1 order: for each dimension `i`, the `-1` then the `+1`
/// inner move. Always `2n` entries; for `n = 1` both dimension-0 entries repeat.
pub fn neighbors(u: &NodeId) -> Vec<NodeId> {
    let n = u.dim();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.extend(u.neighbors_in_dim(i));
    }
    out
}

/// Neighbor set without the `n = 1` repetitions, sorted.
pub fn distinct_neighbors(u: &NodeId) -> Vec<NodeId> {
    let mut out = neighbors(u);
    out.sort();
    out.dedup();
    out
}

pub fn are_adjacent(u: &NodeId, v: &NodeId) -> bool {
    u.dim() == v.dim() && edge_dimension(u, v).is_ok()
}

/// Dimension of the edge `(u, v)`: 0 when only the inner index differs,
/// otherwise the unique `i >= 1` where the digits also differ.
pub fn edge_dimension(u: &NodeId, v: &NodeId) -> Result<usize, TopologyError> {
    if u.dim() != v.dim() {
        return Err(TopologyError::DimensionMismatch(u.clone(), v.clone()));
    }
    let inner = (4 + v.inner() - u.inner()) % 4;
    if inner != 1 && inner != 3 {
        return Err(TopologyError::NotAdjacent(u.clone(), v.clone()));
    }
    let mut differing = (1..u.dim()).filter(|&i| u.digit(i) != v.digit(i));
    match (differing.next(), differing.next()) {
        (None, _) => Ok(0),
        (Some(i), None) if (u.digit(i) + u.step()) % 4 == v.digit(i) => Ok(i),
        _ => Err(TopologyError::NotAdjacent(u.clone(), v.clone())),
    }
}

/// An edge of `BH_n` tagged with its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub dim: usize,
}

impl DimEdge {
    pub fn new(u: NodeId, v: NodeId) -> Result<Self, TopologyError> {
        let dim = edge_dimension(&u, &v)?;
        Ok(DimEdge { u, v, dim })
    }

    /// The endpoint of the given color.
    pub fn endpoint(&self, color: Color) -> &NodeId {
        if self.u.color() == color {
            &self.u
        } else {
            &self.v
        }
    }
}

/// The balanced hypercube `BH_n` as a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalancedHypercube {
    n: usize,
}

impl BalancedHypercube {
    pub fn new(n: usize) -> Result<Self, TopologyError> {
        if n == 0 || n > MAX_DIM {
            return Err(TopologyError::BadSize(n));
        }
        Ok(BalancedHypercube { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        order(self.n)
    }

    pub fn contains(&self, u: &NodeId) -> bool {
        u.dim() == self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.order()).map(move |i| NodeId::from_index(i, self.n))
    }

    pub fn nodes_of_color(&self, color: Color) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(move |u| u.color() == color)
    }

    /// Every edge once, listed from its white endpoint.
    pub fn edges(&self) -> Vec<DimEdge> {
        let mut out = Vec::new();
        for u in self.nodes_of_color(Color::White) {
            for v in distinct_neighbors(&u) {
                let dim = edge_dimension(&u, &v).expect("generated neighbor");
                out.push(DimEdge { u: u.clone(), v, dim });
            }
        }
        out
    }

    pub fn partition_along(&self, l: usize) -> Result<Partition, TopologyError> {
        Partition::new(self.n, l)
    }
}

/// `BH_n` split along dimension `l >= 1` into four subcubes `{u : u[l] = i}`.
///
/// A white vertex of subcube `i` has its two dimension-`l` (crossing) neighbors in
/// subcube `i + 1`; a black vertex has them in subcube `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    l: usize,
}

impl Partition {
    pub fn new(n: usize, l: usize) -> Result<Self, TopologyError> {
        if n < 2 || n > MAX_DIM || l == 0 || l >= n {
            return Err(TopologyError::BadDimension { l, n });
        }
        Ok(Partition { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn split(&self) -> usize {
        self.l
    }

    pub fn subcube_of(&self, u: &NodeId) -> u8 {
        u.digit(self.l)
    }

    pub fn to_local(&self, u: &NodeId) -> NodeId {
        u.without_digit(self.l)
    }

    pub fn to_global(&self, cube: u8, local: &NodeId) -> NodeId {
        local.with_digit(self.l, cube)
    }

    pub fn subcube_nodes(&self, cube: u8) -> Vec<NodeId> {
        (0..order(self.n - 1))
            .map(|i| self.to_global(cube, &NodeId::from_index(i, self.n - 1)))
            .collect()
    }

    pub fn crossing_neighbors(&self, u: &NodeId) -> [NodeId; 2] {
        u.neighbors_in_dim(self.l)
    }

    /// Subcube reached from `cube` along a crossing edge leaving a vertex of `color`.
    pub fn crossing_target(cube: u8, color: Color) -> u8 {
        match color {
            Color::White => (cube + 1) % 4,
            Color::Black => (cube + 3) % 4,
        }
    }

    pub fn is_crossing(&self, u: &NodeId, v: &NodeId) -> bool {
        matches!(edge_dimension(u, v), Ok(d) if d == self.l)
    }
}

/// Smallest `l >= 1` on which the three terminals do not all agree.
///
/// Three distinct white vertices always differ somewhere at or above digit 1, since only
/// two even inner indices exist.
pub fn choose_split_dimension(ts: [&NodeId; 3]) -> Result<usize, TopologyError> {
    let n = ts[0].dim();
    if ts.iter().any(|t| t.dim() != n) {
        return Err(TopologyError::DimensionMismatch(ts[0].clone(), ts[1].clone()));
    }
    (1..n)
        .find(|&l| !(ts[0].digit(l) == ts[1].digit(l) && ts[1].digit(l) == ts[2].digit(l)))
        .ok_or(TopologyError::NoSplit)
}

/// Adds `shift` to digit `dim >= 1`. A color-preserving automorphism of `BH_n`.
pub fn translate(u: &NodeId, dim: usize, shift: u8) -> NodeId {
    debug_assert!(dim >= 1 && dim < u.dim());
    let mut coords = u.coords.clone();
    coords[dim] = (coords[dim] + shift) % 4;
    NodeId { coords }
}
