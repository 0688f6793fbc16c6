//! Backtracking search for paired k-disjoint path covers of `BH_k`, `k <= 3`.
//!
//! Vertices are dense indices into a `u64` bitset. Paths are grown one at a time from
//! their black source; the remaining segments (the open one plus every untouched pair)
//! constrain the unvisited region:
//!
//! * every free vertex needs two usable neighbors;
//! * a segment can only run inside one free component, so there are at most as many
//!   components as segments, and each component must be claimed by a segment whose
//!   two endpoints touch it;
//! * the black/white surplus of a component equals the surplus of the interiors that
//!   run through it (one extra black for a segment whose head is white, zero otherwise).

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::topology::{distinct_neighbors, order, NodeId};

pub(crate) const MAX_SOLVER_DIM: usize = 3;

pub(crate) struct CubeGraph {
    pub adj: Vec<u64>,
    pub black: u64,
}

impl CubeGraph {
    fn build(n: usize) -> Self {
        let size = order(n);
        let mut adj = vec![0u64; size];
        let mut black = 0u64;
        for (idx, mask) in adj.iter_mut().enumerate() {
            let u = NodeId::from_index(idx, n);
            if u.is_black() {
                black |= 1 << idx;
            }
            for v in distinct_neighbors(&u) {
                *mask |= 1 << v.index();
            }
        }
        CubeGraph { adj, black }
    }
}

pub(crate) fn cube_graph(n: usize) -> &'static CubeGraph {
    static GRAPHS: OnceLock<Vec<CubeGraph>> = OnceLock::new();
    assert!((1..=MAX_SOLVER_DIM).contains(&n), "solver scope BH_{n} unsupported");
    &GRAPHS.get_or_init(|| (1..=MAX_SOLVER_DIM).map(CubeGraph::build).collect())[n - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SearchFailure {
    Unsat,
    Budget(u64),
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Finds paths `src[j] -> dst[j]` that are vertex-disjoint and cover all `4^n` vertices.
/// Sources must be black and sinks white; the caller checks that.
///
/// Runs a sequence of complete searches with growing expansion caps and reshuffled
/// tie-breaking, so one unlucky early choice cannot stall the whole call. An attempt that
/// finishes under its cap is conclusive either way.
pub(crate) fn search(
    n: usize,
    src: &[usize],
    dst: &[usize],
    budget: u64,
) -> Result<(Vec<Vec<usize>>, u64), SearchFailure> {
    let mut spent = 0u64;
    let mut cap = FIRST_CAP;
    for attempt in 0u64.. {
        let remaining = budget.saturating_sub(spent);
        let rank = tie_break(n, attempt);
        match search_once(n, src, dst, cap.min(remaining), &rank) {
            Err(SearchFailure::Budget(used)) => {
                spent = spent.saturating_add(used - 1);
                if cap >= remaining {
                    return Err(SearchFailure::Budget(spent + 1));
                }
                cap = cap.saturating_mul(2);
            }
            Ok((paths, used)) => return Ok((paths, spent + used)),
            Err(SearchFailure::Unsat) => return Err(SearchFailure::Unsat),
        }
    }
    unreachable!()
}

const FIRST_CAP: u64 = 4096;

/// Vertex ranks used to break ties between equally constrained moves; attempt 0 keeps
/// the index order.
fn tie_break(n: usize, attempt: u64) -> Vec<u8> {
    let mut rank: Vec<u8> = (0..order(n) as u8).collect();
    if attempt > 0 {
        rank.shuffle(&mut ChaCha8Rng::seed_from_u64(attempt));
    }
    rank
}

fn search_once(
    n: usize,
    src: &[usize],
    dst: &[usize],
    budget: u64,
    rank: &[u8],
) -> Result<(Vec<Vec<usize>>, u64), SearchFailure> {
    let g = cube_graph(n);
    let size = order(n);
    let all = if size == 64 { u64::MAX } else { bit(size) - 1 };
    let terminals = src.iter().chain(dst).fold(0u64, |m, &v| m | bit(v));
    let mut dfs = Dfs {
        g,
        src,
        dst,
        free: all & !terminals,
        paths: src.iter().map(|&s| vec![s]).collect(),
        expansions: 0,
        budget,
        rank,
    };
    match dfs.grow(0, src[0])? {
        true => Ok((dfs.paths, dfs.expansions)),
        false => Err(SearchFailure::Unsat),
    }
}

struct Dfs<'a> {
    g: &'a CubeGraph,
    src: &'a [usize],
    dst: &'a [usize],
    free: u64,
    paths: Vec<Vec<usize>>,
    expansions: u64,
    budget: u64,
    rank: &'a [u8],
}

impl Dfs<'_> {
    fn grow(&mut self, j: usize, head: usize) -> Result<bool, SearchFailure> {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(SearchFailure::Budget(self.expansions));
        }
        if !self.feasible(j, head) {
            return Ok(false);
        }
        let adj = self.g.adj[head];
        let sink = self.dst[j];
        if adj & bit(sink) != 0 {
            self.paths[j].push(sink);
            let done = if j + 1 == self.src.len() {
                self.free == 0
            } else {
                self.grow(j + 1, self.src[j + 1])?
            };
            if done {
                return Ok(true);
            }
            self.paths[j].pop();
        }
        let mut moves: Vec<(u32, u8, usize)> = bits(adj & self.free)
            .map(|m| ((self.g.adj[m] & self.free).count_ones(), self.rank[m], m))
            .collect();
        moves.sort_unstable();
        for (_, _, m) in moves {
            self.free &= !bit(m);
            self.paths[j].push(m);
            if self.grow(j, m)? {
                return Ok(true);
            }
            self.paths[j].pop();
            self.free |= bit(m);
        }
        Ok(false)
    }

    fn feasible(&self, j: usize, head: usize) -> bool {
        let g = self.g;
        let free = self.free;
        let mut segments: Vec<(usize, usize, i32)> = Vec::with_capacity(3);
        let head_surplus = if g.black & bit(head) == 0 { 1 } else { 0 };
        segments.push((head, self.dst[j], head_surplus));
        for jj in j + 1..self.src.len() {
            segments.push((self.src[jj], self.dst[jj], 0));
        }
        let ports = segments.iter().fold(0u64, |m, &(x, y, _)| m | bit(x) | bit(y));
        let usable = free | ports;
        if bits(free).any(|v| (g.adj[v] & usable).count_ones() < 2) {
            return false;
        }

        let mut comps: Vec<u64> = Vec::with_capacity(3);
        let mut rest = free;
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let reach = bits(frontier).fold(0u64, |m, v| m | g.adj[v]) & rest & !comp;
                comp |= reach;
                frontier = reach;
            }
            rest &= !comp;
            comps.push(comp);
            if comps.len() > segments.len() {
                return false;
            }
        }

        let surplus: Vec<i32> = comps
            .iter()
            .map(|&c| (c & g.black).count_ones() as i32 - (c & !g.black).count_ones() as i32)
            .collect();
        // options[s]: bitmask of components segment s may run through; bit 7 = direct edge
        const DIRECT: u8 = 1 << 7;
        let mut options = Vec::with_capacity(segments.len());
        for &(x, y, seg_surplus) in &segments {
            let mut opt = 0u8;
            for (ci, &c) in comps.iter().enumerate() {
                if g.adj[x] & c != 0 && g.adj[y] & c != 0 {
                    opt |= 1 << ci;
                }
            }
            if seg_surplus == 0 && g.adj[x] & bit(y) != 0 {
                opt |= DIRECT;
            }
            if opt == 0 {
                return false;
            }
            options.push(opt);
        }
        let mut load = vec![(0u32, 0i32); comps.len()];
        assign(&segments, &options, 0, &mut load, &surplus)
    }
}

fn assign(
    segments: &[(usize, usize, i32)],
    options: &[u8],
    s: usize,
    load: &mut [(u32, i32)],
    surplus: &[i32],
) -> bool {
    if s == segments.len() {
        return load.iter().zip(surplus).all(|(&(count, sum), &want)| count > 0 && sum == want);
    }
    let opt = options[s];
    if opt & (1 << 7) != 0 && assign(segments, options, s + 1, load, surplus) {
        return true;
    }
    for ci in 0..load.len() {
        if opt & (1 << ci) != 0 {
            load[ci].0 += 1;
            load[ci].1 += segments[s].2;
            let ok = assign(segments, options, s + 1, load, surplus);
            load[ci].0 -= 1;
            load[ci].1 -= segments[s].2;
            if ok {
                return true;
            }
        }
    }
    false
}
