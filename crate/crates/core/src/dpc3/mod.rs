//! Paired 3-disjoint path covers of `BH_n` for `n >= 3`.
//!
//! The sinks fix a split dimension `l`; the pairs' positions in the four subcubes give
//! the case profile, which selects one of three constructions:
//!
//! * every subcube meets some pair: route each pair through a chain of crossing edges
//!   and cover each subcube with the resulting 1, 2 or 3 pairs;
//! * some subcube is empty and at most one is met by all three pairs: the same, plus a
//!   ring detour spliced into one edge that sweeps through every other subcube;
//! * one subcube is empty and two are met by all three pairs: all sources share a
//!   subcube, and a Hamiltonian cycle through a 4-cycle there routes the pairs.

mod case1;
mod case23;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pathengine::{EngineError, Path, PathEngine, Scope};
use crate::topology::{choose_split_dimension, NodeId, Partition};
use crate::verify::verify_paths;

pub use case1::{construct_case1, construct_case1_detour, select_chains};
pub use case23::construct_case23;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Dpc3Error {
    #[error("BH_{0} is below the n >= 3 bound; paired 3-DPCs of BH_2 do not always exist")]
    DimensionTooSmall(usize),
    #[error("invalid terminals: {0}")]
    InvalidSpec(String),
    #[error("subcase {subcase} with beta = {beta:?} cannot occur")]
    UnreachableCase { subcase: Subcase, beta: [u8; 4] },
    #[error("no admissible choice of helper vertices: {0}")]
    ChoiceExhausted(String),
    #[error("no edge admits a ring detour: {0}")]
    DetourInfeasible(String),
    #[error("constructed cover failed verification: {}", .0.join("; "))]
    Verification(Vec<String>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Three black sources and three white sinks, `s_j` paired with `t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TerminalSpec {
    n: usize,
    sources: [NodeId; 3],
    sinks: [NodeId; 3],
}

impl TerminalSpec {
    pub fn new(sources: [NodeId; 3], sinks: [NodeId; 3]) -> Result<Self, Dpc3Error> {
        let n = sources[0].dim();
        let all: Vec<&NodeId> = sources.iter().chain(&sinks).collect();
        if all.iter().any(|u| u.dim() != n) {
            return Err(Dpc3Error::InvalidSpec("terminals come from different dimensions".into()));
        }
        if let Some(s) = sources.iter().find(|s| !s.is_black()) {
            return Err(Dpc3Error::InvalidSpec(format!("source {s} is not black")));
        }
        if let Some(t) = sinks.iter().find(|t| !t.is_white()) {
            return Err(Dpc3Error::InvalidSpec(format!("sink {t} is not white")));
        }
        for (i, u) in all.iter().enumerate() {
            if all[..i].contains(u) {
                return Err(Dpc3Error::InvalidSpec(format!("{u} appears twice")));
            }
        }
        Ok(TerminalSpec { n, sources, sinks })
    }

    pub fn from_pairs(pairs: &[(NodeId, NodeId)]) -> Result<Self, Dpc3Error> {
        let [p1, p2, p3] = pairs else {
            return Err(Dpc3Error::InvalidSpec(format!("expected 3 pairs, got {}", pairs.len())));
        };
        Self::new(
            [p1.0.clone(), p2.0.clone(), p3.0.clone()],
            [p1.1.clone(), p2.1.clone(), p3.1.clone()],
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sources(&self) -> &[NodeId; 3] {
        &self.sources
    }

    pub fn sinks(&self) -> &[NodeId; 3] {
        &self.sinks
    }

    pub fn pairs(&self) -> [(NodeId, NodeId); 3] {
        [0, 1, 2].map(|j| (self.sources[j].clone(), self.sinks[j].clone()))
    }

    pub fn is_terminal(&self, u: &NodeId) -> bool {
        self.sources.contains(u) || self.sinks.contains(u)
    }
}

impl fmt::Display for TerminalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..3 {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", self.sources[j], self.sinks[j])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subcase {
    /// No empty subcube, none met by all three pairs.
    S11,
    /// No empty subcube, at least one met by all three pairs.
    S12,
    /// Some empty subcube, at most one met by all three pairs.
    S13,
    S21,
    S22,
    /// One empty subcube, two met by all three pairs.
    S23,
}

impl Subcase {
    pub const ALL: [Subcase; 6] = [Subcase::S11, Subcase::S12, Subcase::S13, Subcase::S21, Subcase::S22, Subcase::S23];

    pub fn is_reachable(self) -> bool {
        !matches!(self, Subcase::S21 | Subcase::S22)
    }
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Subcase::S11 => "1.1",
            Subcase::S12 => "1.2",
            Subcase::S13 => "1.3",
            Subcase::S21 => "2.1",
            Subcase::S22 => "2.2",
            Subcase::S23 => "2.3",
        };
        f.write_str(label)
    }
}

/// Where the pairs sit relative to the split along `l`.
///
/// `m[j][i] == 1` iff subcube `i` lies on the cyclic interval `g[j], g[j] + 1, ..., h[j]`
/// that pair `j` must travel, since crossing edges only lead from white vertices of
/// subcube `i` to subcube `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseProfile {
    pub l: usize,
    pub g: [u8; 3],
    pub h: [u8; 3],
    pub m: [[u8; 4]; 3],
    pub beta: [u8; 4],
    pub f: [u8; 4],
}

impl CaseProfile {
    pub fn covers(&self, j: usize, cube: u8) -> bool {
        self.m[j][cube as usize] == 1
    }

    /// Subcubes visited by pair `j`, in travel order.
    pub fn interval(&self, j: usize) -> Vec<u8> {
        let len = (self.h[j] + 4 - self.g[j]) % 4 + 1;
        (0..len).map(|k| (self.g[j] + k) % 4).collect()
    }

    pub fn subcase(&self) -> Subcase {
        let [f0, _, _, f3] = self.f;
        match (f0, f3) {
            (0, 0) => Subcase::S11,
            (0, _) => Subcase::S12,
            (_, 0 | 1) => Subcase::S13,
            (2, 2) => Subcase::S21,
            (1, 3) => Subcase::S22,
            (1, 2) => Subcase::S23,
            _ => unreachable!("f0 + f3 <= 4 with f0 >= 1 and f3 >= 2"),
        }
    }

    pub fn partition(&self, n: usize) -> Partition {
        Partition::new(n, self.l).expect("profile split dimension is valid")
    }

    /// First subcube with the largest `beta`.
    pub fn busiest(&self) -> u8 {
        let max = *self.beta.iter().max().expect("four subcubes");
        self.beta.iter().position(|&b| b == max).expect("max is present") as u8
    }
}

/// Profile along the smallest dimension `l >= 1` on which the sinks do not all agree.
pub fn compute_profile(spec: &TerminalSpec) -> CaseProfile {
    let [t1, t2, t3] = &spec.sinks;
    let l = choose_split_dimension([t1, t2, t3]).expect("three distinct white vertices differ above digit 0");
    profile_along(spec, l)
}

pub fn profile_along(spec: &TerminalSpec, l: usize) -> CaseProfile {
    let g = [0, 1, 2].map(|j| spec.sources[j].digit(l));
    let h = [0, 1, 2].map(|j| spec.sinks[j].digit(l));
    let mut m = [[0u8; 4]; 3];
    for j in 0..3 {
        let mut i = g[j];
        loop {
            m[j][i as usize] = 1;
            if i == h[j] {
                break;
            }
            i = (i + 1) % 4;
        }
    }
    let beta = [0, 1, 2, 3].map(|i| m[0][i] + m[1][i] + m[2][i]);
    let mut f = [0u8; 4];
    for &b in &beta {
        f[b as usize] += 1;
    }
    CaseProfile { l, g, h, m, beta, f }
}

/// A pair's helper vertices `a^g, b^(g+1), a^(g+1), ..., b^h`: each white `a^i` in
/// subcube `i` is joined by a crossing edge to the black `b^(i+1)` in subcube `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingChain {
    pub pair: usize,
    pub nodes: Vec<NodeId>,
}

impl CrossingChain {
    /// The crossing edges `(a^i, b^(i+1))` in travel order.
    pub fn hops(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> {
        self.nodes.chunks(2).map(|w| (&w[0], &w[1]))
    }
}

/// Three disjoint paths `s_j -> t_j` covering `BH_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCover {
    pub spec: TerminalSpec,
    pub paths: [Path; 3],
}

impl PathCover {
    fn from_nodes(spec: &TerminalSpec, nodes: Vec<Vec<NodeId>>) -> Result<Self, Dpc3Error> {
        let mut it = nodes.into_iter().map(Path::new);
        let paths = [
            it.next().expect("three paths")?,
            it.next().expect("three paths")?,
            it.next().expect("three paths")?,
        ];
        Ok(PathCover { spec: spec.clone(), paths })
    }

    pub fn raw_paths(&self) -> Vec<Vec<NodeId>> {
        self.paths.iter().map(|p| p.nodes().to_vec()).collect()
    }
}

/// Builds a verified paired 3-DPC with the default search budget.
pub fn build_3dpc(spec: &TerminalSpec) -> Result<PathCover, Dpc3Error> {
    build_3dpc_with(spec, &PathEngine::new())
}

pub fn build_3dpc_with(spec: &TerminalSpec, engine: &PathEngine) -> Result<PathCover, Dpc3Error> {
    if spec.n < 3 {
        return Err(Dpc3Error::DimensionTooSmall(spec.n));
    }
    let profile = compute_profile(spec);
    let cover = match profile.subcase() {
        Subcase::S11 | Subcase::S12 => {
            let chains = select_chains(spec, &profile)?;
            construct_case1(spec, &profile, &chains, engine)?
        }
        Subcase::S13 => {
            let chains = select_chains(spec, &profile)?;
            construct_case1_detour(spec, &profile, &chains, engine)?
        }
        subcase @ (Subcase::S21 | Subcase::S22) => {
            return Err(Dpc3Error::UnreachableCase { subcase, beta: profile.beta });
        }
        Subcase::S23 => construct_case23(spec, &profile, engine)?,
    };
    let report = verify_paths(spec.n, &spec.pairs(), &cover.paths);
    if !report.passed() {
        return Err(Dpc3Error::Verification(report.problems()));
    }
    Ok(cover)
}

/// Upper bound on distinct subcube covers tried by one construction.
const MAX_SOLVES: usize = 50_000;

/// Memoized subcube covers for one construction.
pub(crate) struct Ctx<'e> {
    engine: &'e PathEngine,
    part: Partition,
    cache: HashMap<Vec<(usize, usize)>, Option<Vec<Path>>>,
}

impl<'e> Ctx<'e> {
    fn new(engine: &'e PathEngine, part: Partition) -> Self {
        Ctx { engine, part, cache: HashMap::new() }
    }

    /// A paired DPC of subcube `cube` for `pairs`, or `None` when none is found.
    fn solve(&mut self, cube: u8, pairs: &[(NodeId, NodeId)]) -> Result<Option<Vec<Path>>, Dpc3Error> {
        let key: Vec<(usize, usize)> = pairs.iter().map(|(s, t)| (s.index(), t.index())).collect();
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        if self.cache.len() >= MAX_SOLVES {
            return Err(Dpc3Error::ChoiceExhausted(format!("{MAX_SOLVES} subcube covers tried")));
        }
        let scope = Scope::Subcube(self.part, cube);
        let found = if pairs.len() == 3 && scope.dim() >= 3 {
            let local: Vec<(NodeId, NodeId)> =
                pairs.iter().map(|(s, t)| (self.part.to_local(s), self.part.to_local(t))).collect();
            let cover = build_3dpc_with(&TerminalSpec::from_pairs(&local)?, self.engine)?;
            Some(
                cover
                    .paths
                    .iter()
                    .map(|p| Path::new(p.nodes().iter().map(|u| self.part.to_global(cube, u)).collect()))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            match self.engine.solve_kdpc(scope, pairs) {
                Ok(paths) => Some(paths),
                Err(EngineError::Unsat | EngineError::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e.into()),
            }
        };
        self.cache.insert(key, found.clone());
        Ok(found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(text: &str) -> NodeId {
        text.parse().unwrap()
    }

    fn spec(pairs: &[(&str, &str); 3]) -> TerminalSpec {
        TerminalSpec::new(pairs.map(|p| node(p.0)), pairs.map(|p| node(p.1))).unwrap()
    }

    #[test]
    fn interval_rule() {
        let s = spec(&[("(1,0,2)", "(0,0,0)"), ("(1,1,1)", "(0,1,1)"), ("(1,2,1)", "(0,2,1)")]);
        let p = profile_along(&s, 2);
        assert_eq!(p.m[0], [1, 0, 1, 1]);
        assert_eq!(p.interval(0), [2, 3, 0]);
        assert_eq!(p.interval(1), [1]);
    }

    #[test]
    fn spec_validation() {
        let bad = TerminalSpec::new(
            [node("(1,0,0)"), node("(3,0,0)"), node("(1,0,0)")],
            [node("(0,0,0)"), node("(2,0,0)"), node("(0,1,0)")],
        );
        assert!(matches!(bad, Err(Dpc3Error::InvalidSpec(_))));
        let colors = TerminalSpec::new(
            [node("(0,0,0)"), node("(3,0,0)"), node("(1,1,0)")],
            [node("(2,0,0)"), node("(2,1,0)"), node("(0,1,0)")],
        );
        assert!(matches!(colors, Err(Dpc3Error::InvalidSpec(_))));
    }

    #[test]
    fn bh2_is_rejected() {
        let s = spec(&[("(1,0)", "(0,0)"), ("(3,0)", "(2,0)"), ("(1,2)", "(0,1)")]);
        assert_eq!(build_3dpc(&s), Err(Dpc3Error::DimensionTooSmall(2)));
    }

    #[test]
    fn cli_example_instance() {
        let s = spec(&[("(1,0,0)", "(0,0,0)"), ("(3,0,0)", "(2,0,0)"), ("(1,2,0)", "(0,1,0)")]);
        let cover = build_3dpc(&s).unwrap();
        assert_eq!(cover.paths.iter().map(Path::len).sum::<usize>(), 64);
    }
}
