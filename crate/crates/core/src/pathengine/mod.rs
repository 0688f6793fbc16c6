//! Path primitives consumed by the 3-DPC construction: Hamiltonian paths between
//! opposite-color vertices, paired 2-disjoint path covers, paired k-DPC search, 8-cycles
//! with one edge in each subcube, and the five-path/Hamiltonian-cycle certificates.
//!
//! Hamiltonian paths and 2-DPCs are produced by a deterministic backtracking search over
//! scopes of at most `BH_3` (64 vertices).

mod cycles;
mod solver;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{are_adjacent, NodeId, Partition, TopologyError};

pub use cycles::FivePathCertificate;
pub(crate) use solver::MAX_SOLVER_DIM;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    /// Exhaustive search proved that no cover exists.
    #[error("no disjoint path cover exists for the given terminals")]
    Unsat,
    #[error("search budget exceeded after {expansions} node expansions")]
    BudgetExceeded { expansions: u64 },
    #[error("search scope BH_{dim} is larger than the supported BH_{max}", max = MAX_SOLVER_DIM)]
    ScopeTooLarge { dim: usize },
    #[error("invalid terminals: {0}")]
    InvalidTerminals(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A simple path: consecutive vertices adjacent, all vertices distinct.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<NodeId>", into = "Vec<NodeId>")]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(nodes: Vec<NodeId>) -> Result<Self, EngineError> {
        check_walk(&nodes, false)?;
        Ok(Path { nodes })
    }

    pub(crate) fn from_trusted(nodes: Vec<NodeId>) -> Self {
        debug_assert!(check_walk(&nodes, false).is_ok(), "{nodes:?}");
        Path { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> &NodeId {
        &self.nodes[0]
    }

    pub fn last(&self) -> &NodeId {
        &self.nodes[self.nodes.len() - 1]
    }

    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Path { nodes }
    }

    pub fn contains(&self, u: &NodeId) -> bool {
        self.nodes.contains(u)
    }
}

impl TryFrom<Vec<NodeId>> for Path {
    type Error = EngineError;

    fn try_from(nodes: Vec<NodeId>) -> Result<Self, Self::Error> {
        Path::new(nodes)
    }
}

impl From<Path> for Vec<NodeId> {
    fn from(p: Path) -> Self {
        p.nodes
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, u) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, ">")
    }
}

/// A cycle listed once around; the closing edge joins the last vertex back to the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    nodes: Vec<NodeId>,
}

impl Cycle {
    pub fn new(nodes: Vec<NodeId>) -> Result<Self, EngineError> {
        if nodes.len() < 4 || nodes.len() % 2 != 0 {
            return Err(EngineError::InvalidPath(format!(
                "a cycle of BH_n needs even length >= 4, got {}",
                nodes.len()
            )));
        }
        check_walk(&nodes, true)?;
        Ok(Cycle { nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn position(&self, u: &NodeId) -> Option<usize> {
        self.nodes.iter().position(|x| x == u)
    }

    /// Whether `path` appears as a contiguous stretch of the cycle, in either direction.
    pub fn contains_segment(&self, path: &[NodeId]) -> bool {
        let m = self.nodes.len();
        let Some(start) = path.first().and_then(|u| self.position(u)) else {
            return false;
        };
        let forward = path.iter().enumerate().all(|(k, u)| &self.nodes[(start + k) % m] == u);
        let backward = path.iter().enumerate().all(|(k, u)| &self.nodes[(start + m - k % m) % m] == u);
        path.len() <= m && (forward || backward)
    }

    /// Whether `u` and `v` are consecutive on the cycle.
    pub fn has_edge(&self, u: &NodeId, v: &NodeId) -> bool {
        let m = self.nodes.len();
        match self.position(u) {
            Some(i) => &self.nodes[(i + 1) % m] == v || &self.nodes[(i + m - 1) % m] == v,
            None => false,
        }
    }
}

fn check_walk(nodes: &[NodeId], closed: bool) -> Result<(), EngineError> {
    if nodes.is_empty() {
        return Err(EngineError::InvalidPath("empty".into()));
    }
    let n = nodes[0].dim();
    let mut seen = std::collections::HashSet::with_capacity(nodes.len());
    for u in nodes {
        if u.dim() != n {
            return Err(EngineError::InvalidPath(format!("{u} is not in BH_{n}")));
        }
        if !seen.insert(u) {
            return Err(EngineError::InvalidPath(format!("{u} repeats")));
        }
    }
    for w in nodes.windows(2) {
        if !are_adjacent(&w[0], &w[1]) {
            return Err(EngineError::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
    }
    if closed && !are_adjacent(&nodes[nodes.len() - 1], &nodes[0]) {
        return Err(EngineError::InvalidPath("cycle does not close".into()));
    }
    Ok(())
}

/// The vertex set a search runs over: a whole `BH_k` or one subcube of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Whole(usize),
    Subcube(Partition, u8),
}

impl Scope {
    /// Dimension of the scope as a balanced hypercube.
    pub fn dim(&self) -> usize {
        match self {
            Scope::Whole(n) => *n,
            Scope::Subcube(part, _) => part.dim() - 1,
        }
    }

    pub fn order(&self) -> usize {
        crate::topology::order(self.dim())
    }

    pub fn contains(&self, u: &NodeId) -> bool {
        match self {
            Scope::Whole(n) => u.dim() == *n,
            Scope::Subcube(part, cube) => u.dim() == part.dim() && part.subcube_of(u) == *cube,
        }
    }

    pub fn to_local(&self, u: &NodeId) -> Result<NodeId, EngineError> {
        if !self.contains(u) {
            return Err(EngineError::InvalidTerminals(format!("{u} is outside {self:?}")));
        }
        Ok(match self {
            Scope::Whole(_) => u.clone(),
            Scope::Subcube(part, _) => part.to_local(u),
        })
    }

    pub fn to_global(&self, local: &NodeId) -> NodeId {
        match self {
            Scope::Whole(_) => local.clone(),
            Scope::Subcube(part, cube) => part.to_global(*cube, local),
        }
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        let k = self.dim();
        (0..self.order()).map(|i| self.to_global(&NodeId::from_index(i, k))).collect()
    }
}

/// Deterministic, stateless search engine; `budget` caps node expansions per call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathEngine {
    budget: u64,
}

impl Default for PathEngine {
    fn default() -> Self {
        PathEngine { budget: Self::DEFAULT_BUDGET }
    }
}

impl PathEngine {
    pub const DEFAULT_BUDGET: u64 = 10_000_000;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: u64) -> Self {
        PathEngine { budget }
    }

    /// No expansion cap; used by the exhaustive oracle.
    pub fn unbounded() -> Self {
        PathEngine { budget: u64::MAX }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Paired k-DPC of `scope` (`k` in 1..=3): path `j` runs from black `pairs[j].0` to
    /// white `pairs[j].1` and the paths partition the scope.
    pub fn solve_kdpc(&self, scope: Scope, pairs: &[(NodeId, NodeId)]) -> Result<Vec<Path>, EngineError> {
        if pairs.is_empty() || pairs.len() > 3 {
            return Err(EngineError::InvalidTerminals(format!("k = {} is not in 1..=3", pairs.len())));
        }
        let dim = scope.dim();
        if dim > MAX_SOLVER_DIM {
            return Err(EngineError::ScopeTooLarge { dim });
        }
        if scope.order() < 2 * pairs.len() {
            return Err(EngineError::InvalidTerminals("scope too small for k pairs".into()));
        }
        let mut src = Vec::with_capacity(pairs.len());
        let mut dst = Vec::with_capacity(pairs.len());
        for (s, t) in pairs {
            if !s.is_black() || !t.is_white() {
                return Err(EngineError::InvalidTerminals(format!("pair {s} -> {t} must run black to white")));
            }
            src.push(scope.to_local(s)?.index());
            dst.push(scope.to_local(t)?.index());
        }
        let mut all: Vec<usize> = src.iter().chain(&dst).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != 2 * pairs.len() {
            return Err(EngineError::InvalidTerminals("terminals are not distinct".into()));
        }
        match solver::search(dim, &src, &dst, self.budget) {
            Ok((paths, _)) => Ok(paths
                .into_iter()
                .map(|p| {
                    Path::from_trusted(p.into_iter().map(|i| scope.to_global(&NodeId::from_index(i, dim))).collect())
                })
                .collect()),
            Err(solver::SearchFailure::Unsat) => Err(EngineError::Unsat),
            Err(solver::SearchFailure::Budget(expansions)) => Err(EngineError::BudgetExceeded { expansions }),
        }
    }

    /// Hamiltonian path of `scope` from `u` to `v` (opposite colors, either order).
    pub fn ham_path(&self, scope: Scope, u: &NodeId, v: &NodeId) -> Result<Path, EngineError> {
        if u.color() == v.color() {
            return Err(EngineError::InvalidTerminals(format!("{u} and {v} have the same color")));
        }
        if u.is_black() {
            Ok(self.solve_kdpc(scope, &[(u.clone(), v.clone())])?.remove(0))
        } else {
            Ok(self.solve_kdpc(scope, &[(v.clone(), u.clone())])?.remove(0).reversed())
        }
    }

    /// Paired 2-DPC of `scope`: `s1 -> t1` and `s2 -> t2`.
    pub fn two_dpc(
        &self,
        scope: Scope,
        (s1, t1): (&NodeId, &NodeId),
        (s2, t2): (&NodeId, &NodeId),
    ) -> Result<(Path, Path), EngineError> {
        let mut paths = self.solve_kdpc(scope, &[(s1.clone(), t1.clone()), (s2.clone(), t2.clone())])?;
        let second = paths.pop().expect("two paths");
        let first = paths.pop().expect("two paths");
        Ok((first, second))
    }

    pub fn find_8cycle(&self, edge: &crate::topology::DimEdge, part: &Partition) -> Result<Cycle, EngineError> {
        cycles::find_8cycle(edge, part)
    }

    pub fn five_path_pair(&self, s: &NodeId) -> Result<[FivePathCertificate; 2], EngineError> {
        cycles::five_path_pair(self, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{BalancedHypercube, Color};

    fn node(text: &str) -> NodeId {
        text.parse().unwrap()
    }

    fn nodes(texts: &[&str]) -> Vec<NodeId> {
        texts.iter().map(|t| node(t)).collect()
    }

    #[test]
    fn path_invariants() {
        assert!(Path::new(nodes(&["(1,0)", "(0,0)"])).is_ok());
        assert!(Path::new(nodes(&["(1,0)", "(2,0)", "(1,0)"])).is_err());
        assert!(Path::new(nodes(&["(0,0)", "(2,0)"])).is_err());
        assert!(Path::new(vec![]).is_err());
        assert!(Cycle::new(nodes(&["(0)", "(1)", "(2)", "(3)"])).is_ok());
        assert!(Cycle::new(nodes(&["(0)", "(1)", "(2)"])).is_err());
    }

    #[test]
    fn cycle_segments() {
        let c = Cycle::new(nodes(&["(0)", "(1)", "(2)", "(3)"])).unwrap();
        assert!(c.contains_segment(&nodes(&["(3)", "(0)", "(1)"])));
        assert!(c.contains_segment(&nodes(&["(1)", "(0)", "(3)"])));
        assert!(!c.contains_segment(&nodes(&["(0)", "(2)"])));
        assert!(c.has_edge(&node("(3)"), &node("(0)")));
    }

    #[test]
    fn ham_path_on_bh1() {
        let engine = PathEngine::new();
        let p = engine.ham_path(Scope::Whole(1), &node("(0)"), &node("(1)")).unwrap();
        assert_eq!(p.nodes(), nodes(&["(0)", "(3)", "(2)", "(1)"]).as_slice());
    }

    #[test]
    fn ham_path_all_pairs_bh2() {
        let engine = PathEngine::new();
        let cube = BalancedHypercube::new(2).unwrap();
        for b in cube.nodes_of_color(Color::Black) {
            for w in cube.nodes_of_color(Color::White) {
                let p = engine.ham_path(Scope::Whole(2), &w, &b).unwrap();
                assert_eq!(p.len(), 16);
                assert_eq!((p.first(), p.last()), (&w, &b));
            }
        }
    }

    #[test]
    fn two_dpc_examples() {
        let engine = PathEngine::new();
        let (p, q) = engine
            .two_dpc(Scope::Whole(1), (&node("(1)"), &node("(0)")), (&node("(3)"), &node("(2)")))
            .unwrap();
        assert_eq!(p.nodes(), nodes(&["(1)", "(0)"]).as_slice());
        assert_eq!(q.nodes(), nodes(&["(3)", "(2)"]).as_slice());
        let (p, q) = engine
            .two_dpc(Scope::Whole(2), (&node("(1,0)"), &node("(0,0)")), (&node("(3,0)"), &node("(2,0)")))
            .unwrap();
        assert_eq!(p.len() + q.len(), 16);
    }

    #[test]
    fn subcube_scope_maps_back() {
        let part = Partition::new(3, 2).unwrap();
        let scope = Scope::Subcube(part, 2);
        let engine = PathEngine::new();
        let p = engine.ham_path(scope, &node("(1,0,2)"), &node("(0,3,2)")).unwrap();
        assert_eq!(p.len(), 16);
        assert!(p.nodes().iter().all(|u| part.subcube_of(u) == 2));
        assert!(engine.ham_path(scope, &node("(1,0,1)"), &node("(0,3,2)")).is_err());
    }

    #[test]
    fn rejects_bad_terminals() {
        let engine = PathEngine::new();
        let same = engine.solve_kdpc(Scope::Whole(2), &[(node("(1,0)"), node("(0,0)")), (node("(1,0)"), node("(2,0)"))]);
        assert!(matches!(same, Err(EngineError::InvalidTerminals(_))));
        let colors = engine.solve_kdpc(Scope::Whole(2), &[(node("(0,0)"), node("(1,0)"))]);
        assert!(matches!(colors, Err(EngineError::InvalidTerminals(_))));
        let big = engine.ham_path(Scope::Whole(4), &node("(0,0,0,0)"), &node("(1,0,0,0)"));
        assert_eq!(big, Err(EngineError::ScopeTooLarge { dim: 4 }));
    }

    #[test]
    fn nonexistence_instance() {
        let engine = PathEngine::new();
        let pairs = [
            (node("(1,0)"), node("(0,0)")),
            (node("(3,0)"), node("(2,0)")),
            (node("(1,2)"), node("(0,1)")),
        ];
        assert_eq!(engine.solve_kdpc(Scope::Whole(2), &pairs), Err(EngineError::Unsat));
    }

    #[test]
    fn table_row_has_a_solution() {
        let engine = PathEngine::new();
        let pairs = [
            (node("(1,0)"), node("(0,0)")),
            (node("(3,0)"), node("(2,0)")),
            (node("(1,1)"), node("(0,1)")),
        ];
        let paths = engine.solve_kdpc(Scope::Whole(2), &pairs).unwrap();
        assert_eq!(paths.iter().map(Path::len).sum::<usize>(), 16);
    }
}
