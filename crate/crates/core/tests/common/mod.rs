#![allow(dead_code)]

use bhdpc_core::{BalancedHypercube, Color, NodeId, TerminalSpec};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn node(text: &str) -> NodeId {
    text.parse().unwrap()
}

pub fn pairs(texts: &[(&str, &str)]) -> Vec<(NodeId, NodeId)> {
    texts.iter().map(|(s, t)| (node(s), node(t))).collect()
}

/// Digit-rule adjacency, written out independently of the library.
pub fn adjacent(u: &NodeId, v: &NodeId) -> bool {
    let (a, b) = (u.coords(), v.coords());
    if a.len() != b.len() || (b[0] + 4 - a[0]) % 4 % 2 == 0 {
        return false;
    }
    let up = if a[0] % 2 == 0 { 1 } else { 3 };
    let diff: Vec<usize> = (1..a.len()).filter(|&i| a[i] != b[i]).collect();
    diff.is_empty() || (diff.len() == 1 && b[diff[0]] == (a[diff[0]] + up) % 4)
}

/// Plain exhaustive search for a paired k-DPC of `BH_n` with no pruning at all.
pub fn reference_kdpc(n: usize, pairs: &[(NodeId, NodeId)]) -> Option<Vec<Vec<NodeId>>> {
    let all: Vec<NodeId> = BalancedHypercube::new(n).unwrap().nodes().collect();
    let mut used: Vec<NodeId> = pairs.iter().flat_map(|(s, t)| [s.clone(), t.clone()]).collect();
    let mut paths: Vec<Vec<NodeId>> = pairs.iter().map(|(s, _)| vec![s.clone()]).collect();
    fn go(all: &[NodeId], pairs: &[(NodeId, NodeId)], j: usize, used: &mut Vec<NodeId>, paths: &mut Vec<Vec<NodeId>>) -> bool {
        if j == pairs.len() {
            return used.len() == all.len();
        }
        let head = paths[j].last().unwrap().clone();
        let sink = &pairs[j].1;
        if adjacent(&head, sink) {
            paths[j].push(sink.clone());
            if go(all, pairs, j + 1, used, paths) {
                return true;
            }
            paths[j].pop();
        }
        for v in all {
            if adjacent(&head, v) && !used.contains(v) {
                used.push(v.clone());
                paths[j].push(v.clone());
                if go(all, pairs, j, used, paths) {
                    return true;
                }
                paths[j].pop();
                used.pop();
            }
        }
        false
    }
    go(&all, pairs, 0, &mut used, &mut paths).then_some(paths)
}

pub fn blacks(n: usize) -> Vec<NodeId> {
    BalancedHypercube::new(n).unwrap().nodes_of_color(Color::Black).collect()
}

pub fn whites(n: usize) -> Vec<NodeId> {
    BalancedHypercube::new(n).unwrap().nodes_of_color(Color::White).collect()
}

/// `k` random pairs of distinct black sources and white sinks.
pub fn random_pairs<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<(NodeId, NodeId)> {
    let s: Vec<NodeId> = blacks(n).choose_multiple(rng, k).cloned().collect();
    let t: Vec<NodeId> = whites(n).choose_multiple(rng, k).cloned().collect();
    s.into_iter().zip(t).collect()
}

pub fn random_spec<R: Rng>(rng: &mut R, n: usize) -> TerminalSpec {
    TerminalSpec::from_pairs(&random_pairs(rng, n, 3)).unwrap()
}
