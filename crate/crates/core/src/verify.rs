//! Independent cover verification and exhaustive ground truth on `BH_1`/`BH_2`.
//!
//! The verifier recomputes adjacency straight from the digit rule and shares nothing with
//! the construction code beyond [`NodeId`].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pathengine::{EngineError, Path, PathEngine, Scope};
use crate::topology::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub problems: Vec<String>,
}

/// Outcome of [`verify_kdpc`]: one entry per named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    pub k: usize,
    pub covered: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Every problem from failed checks, prefixed with the check name.
    pub fn problems(&self) -> Vec<String> {
        self.checks
            .iter()
            .flat_map(|c| c.problems.iter().map(move |p| format!("{}: {p}", c.name)))
            .collect()
    }
}

fn adjacent(u: &[u8], v: &[u8]) -> bool {
    if u.len() != v.len() || u.is_empty() {
        return false;
    }
    let d0 = (v[0] + 4 - u[0]) % 4;
    if d0 != 1 && d0 != 3 {
        return false;
    }
    let shift = if u[0] % 2 == 0 { 1 } else { 3 };
    let changed: Vec<usize> = (1..u.len()).filter(|&i| u[i] != v[i]).collect();
    match changed.as_slice() {
        [] => true,
        [i] => v[*i] == (u[*i] + shift) % 4,
        _ => false,
    }
}

fn in_cube(u: &NodeId, n: usize) -> bool {
    u.coords().len() == n && u.coords().iter().all(|&d| d < 4)
}

/// Checks that `paths` is a paired k-DPC of `BH_n`: path `j` runs black `pairs[j].0` to
/// white `pairs[j].1`, paths are disjoint, and together they cover all `4^n` vertices.
pub fn verify_kdpc(n: usize, pairs: &[(NodeId, NodeId)], paths: &[Vec<NodeId>]) -> Report {
    let mut adjacency = Vec::new();
    for (j, p) in paths.iter().enumerate() {
        if p.is_empty() {
            adjacency.push(format!("path {} is empty", j + 1));
        }
        for u in p {
            if !in_cube(u, n) {
                adjacency.push(format!("path {}: {u} is not a vertex of BH_{n}", j + 1));
            }
        }
        for w in p.windows(2) {
            if !adjacent(w[0].coords(), w[1].coords()) {
                adjacency.push(format!("path {}: {} - {} is not an edge", j + 1, w[0], w[1]));
            }
        }
    }

    let mut endpoints = Vec::new();
    if pairs.len() != paths.len() {
        endpoints.push(format!("{} pairs but {} paths", pairs.len(), paths.len()));
    }
    for (j, ((s, t), p)) in pairs.iter().zip(paths).enumerate() {
        if s.coords()[0] % 2 != 1 {
            endpoints.push(format!("source {s} is not black"));
        }
        if t.coords()[0] % 2 != 0 {
            endpoints.push(format!("sink {t} is not white"));
        }
        if p.first() != Some(s) || p.last() != Some(t) {
            let shown = |x: Option<&NodeId>| x.map_or("-".to_string(), ToString::to_string);
            endpoints.push(format!(
                "path {} runs {} -> {}, expected {s} -> {t}",
                j + 1,
                shown(p.first()),
                shown(p.last())
            ));
        }
    }

    let mut disjoint = Vec::new();
    let mut owner: HashMap<&NodeId, usize> = HashMap::new();
    for (j, p) in paths.iter().enumerate() {
        for u in p {
            if let Some(&other) = owner.get(u) {
                if other == j {
                    disjoint.push(format!("{u} repeats on path {}", j + 1));
                } else {
                    disjoint.push(format!("{u} is on paths {} and {}", other + 1, j + 1));
                }
            } else {
                owner.insert(u, j);
            }
        }
    }

    let mut coverage = Vec::new();
    let total = 1usize << (2 * n);
    let covered = owner.keys().filter(|u| in_cube(u, n)).count();
    if covered != total {
        let mut digits = vec![0u8; n];
        for _ in 0..total {
            let u = NodeId::new(digits.clone()).expect("valid digits");
            if !owner.contains_key(&u) {
                coverage.push(format!("{u} is not covered"));
            }
            for d in digits.iter_mut() {
                *d = (*d + 1) % 4;
                if *d != 0 {
                    break;
                }
            }
        }
    }

    let check = |name: &str, problems: Vec<String>| Check { name: name.into(), passed: problems.is_empty(), problems };
    Report {
        n,
        k: paths.len(),
        covered,
        checks: vec![
            check("adjacency", adjacency),
            check("endpoints", endpoints),
            check("disjoint", disjoint),
            check("coverage", coverage),
        ],
    }
}

/// [`verify_kdpc`] over typed paths.
pub fn verify_paths(n: usize, pairs: &[(NodeId, NodeId)], paths: &[Path]) -> Report {
    let raw: Vec<Vec<NodeId>> = paths.iter().map(|p| p.nodes().to_vec()).collect();
    verify_kdpc(n, pairs, &raw)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the exhaustive oracle covers BH_2 only, got BH_{0}")]
    OutOfScope(usize),
    #[error("invalid terminals: {0}")]
    InvalidTerminals(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    Yes(Vec<Path>),
    No,
}

impl OracleAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleAnswer::Yes(_))
    }
}

/// Exhaustive answer to whether a paired 3-DPC of `BH_n` exists; `n` must be 2 since
/// `BH_1` has only two black vertices.
pub fn oracle_exists_3dpc(n: usize, pairs: &[(NodeId, NodeId); 3]) -> Result<OracleAnswer, OracleError> {
    if n != 2 {
        return Err(OracleError::OutOfScope(n));
    }
    if pairs.iter().any(|(s, t)| s.dim() != n || t.dim() != n) {
        return Err(OracleError::InvalidTerminals(format!("terminals must lie in BH_{n}")));
    }
    match PathEngine::unbounded().solve_kdpc(Scope::Whole(n), pairs) {
        Ok(paths) => Ok(OracleAnswer::Yes(paths)),
        Err(EngineError::Unsat) => Ok(OracleAnswer::No),
        Err(EngineError::InvalidTerminals(msg)) => Err(OracleError::InvalidTerminals(msg)),
        Err(e) => unreachable!("unbounded search on BH_2 failed: {e}"),
    }
}

/// Every white `t3` outside `{t1, t2}` for which `s_j -> t_j` has a paired 3-DPC of `BH_2`.
pub fn oracle_find_t3(sources: &[NodeId; 3], t1: &NodeId, t2: &NodeId) -> Result<Vec<NodeId>, OracleError> {
    let mut found = Vec::new();
    for idx in 0..16 {
        let t3 = NodeId::from_index(idx, 2);
        if !t3.is_white() || t3 == *t1 || t3 == *t2 {
            continue;
        }
        let pairs = [
            (sources[0].clone(), t1.clone()),
            (sources[1].clone(), t2.clone()),
            (sources[2].clone(), t3.clone()),
        ];
        if oracle_exists_3dpc(2, &pairs)?.is_yes() {
            found.push(t3);
        }
    }
    Ok(found)
}
