//! Constructions for profiles with at most one subcube met by all three pairs.

use std::collections::{HashMap, HashSet};

use crate::pathengine::{Path, PathEngine};
use crate::topology::{NodeId, Partition};

use super::{CaseProfile, CrossingChain, Ctx, Dpc3Error, PathCover, Subcase, TerminalSpec};

/// Pairwise distinct helper chains avoiding the terminals, taking the first free white
/// vertex and crossing neighbor for every hop. Solvability of the subcubes is not checked.
pub fn select_chains(spec: &TerminalSpec, profile: &CaseProfile) -> Result<Vec<CrossingChain>, Dpc3Error> {
    let part = profile.partition(spec.n());
    let mut used: HashSet<NodeId> = spec.sources().iter().chain(spec.sinks()).cloned().collect();
    let mut chains = Vec::with_capacity(3);
    for j in 0..3 {
        let cubes = profile.interval(j);
        let mut nodes = Vec::new();
        for &i in &cubes[..cubes.len() - 1] {
            let (a, b) = hop_candidates(&part, i)
                .find(|(a, b)| !used.contains(a) && !used.contains(b))
                .ok_or_else(|| Dpc3Error::ChoiceExhausted(format!("no free crossing edge from subcube {i}")))?;
            used.insert(a.clone());
            used.insert(b.clone());
            nodes.push(a);
            nodes.push(b);
        }
        chains.push(CrossingChain { pair: j, nodes });
    }
    Ok(chains)
}

/// Every crossing edge `(a, b)` with white `a` in subcube `cube`, in vertex order.
fn hop_candidates(part: &Partition, cube: u8) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
    part.subcube_nodes(cube)
        .into_iter()
        .filter(NodeId::is_white)
        .flat_map(move |a| part.crossing_neighbors(&a).map(|b| (a.clone(), b)))
}

/// Cover for profiles where every subcube meets some pair. The given chains are tried
/// first; other helper vertices are searched when a subcube has no cover for them.
pub fn construct_case1(
    spec: &TerminalSpec,
    profile: &CaseProfile,
    chains: &[CrossingChain],
    engine: &PathEngine,
) -> Result<PathCover, Dpc3Error> {
    if profile.f[0] != 0 {
        return Err(Dpc3Error::InvalidSpec(format!("subcase {} has an empty subcube", profile.subcase())));
    }
    let mut search = HopSearch::new(spec, profile, chains, engine, false);
    let nodes = search
        .run()?
        .ok_or_else(|| Dpc3Error::ChoiceExhausted(format!("no chains give coverable subcubes for {spec}")))?;
    PathCover::from_nodes(spec, nodes)
}

/// Cover for profiles with an empty subcube: the chain construction on the busiest
/// subcube, with one edge `(x, y)` of its cover replaced by a detour through the other
/// three subcubes.
pub fn construct_case1_detour(
    spec: &TerminalSpec,
    profile: &CaseProfile,
    chains: &[CrossingChain],
    engine: &PathEngine,
) -> Result<PathCover, Dpc3Error> {
    if profile.subcase() != Subcase::S13 {
        return Err(Dpc3Error::InvalidSpec(format!("subcase {} needs no detour", profile.subcase())));
    }
    let mut search = HopSearch::new(spec, profile, chains, engine, true);
    let nodes = search.run()?.ok_or_else(|| Dpc3Error::DetourInfeasible(spec.to_string()))?;
    PathCover::from_nodes(spec, nodes)
}

type Hop = (NodeId, NodeId);

struct HopSearch<'a> {
    spec: &'a TerminalSpec,
    profile: &'a CaseProfile,
    part: Partition,
    ctx: Ctx<'a>,
    /// `(pair, cube)`: pair `j` leaves subcube `cube` for `cube + 1`.
    hops: Vec<(usize, u8)>,
    hop_index: HashMap<(usize, u8), usize>,
    assigned: Vec<Option<Hop>>,
    preferred: Vec<Option<Hop>>,
    used: HashSet<NodeId>,
    detour: bool,
}

impl<'a> HopSearch<'a> {
    fn new(
        spec: &'a TerminalSpec,
        profile: &'a CaseProfile,
        chains: &[CrossingChain],
        engine: &'a PathEngine,
        detour: bool,
    ) -> Self {
        let part = profile.partition(spec.n());
        let mut hops = Vec::new();
        let mut preferred = Vec::new();
        for j in 0..3 {
            let cubes = profile.interval(j);
            let chain: Vec<Hop> = chains
                .iter()
                .find(|c| c.pair == j)
                .map(|c| c.hops().map(|(a, b)| (a.clone(), b.clone())).collect())
                .unwrap_or_default();
            for (k, &i) in cubes[..cubes.len() - 1].iter().enumerate() {
                hops.push((j, i));
                preferred.push(chain.get(k).cloned());
            }
        }
        // hops leaving the same subcube are adjacent so subcubes complete early
        let mut order: Vec<usize> = (0..hops.len()).collect();
        order.sort_by_key(|&k| (hops[k].1, hops[k].0));
        let hops: Vec<(usize, u8)> = order.iter().map(|&k| hops[k]).collect();
        let preferred: Vec<Option<Hop>> = order.iter().map(|&k| preferred[k].clone()).collect();
        let hop_index = hops.iter().enumerate().map(|(k, &h)| (h, k)).collect();
        HopSearch {
            spec,
            profile,
            part,
            ctx: Ctx::new(engine, part),
            assigned: vec![None; hops.len()],
            hops,
            hop_index,
            preferred,
            used: spec.sources().iter().chain(spec.sinks()).cloned().collect(),
            detour,
        }
    }

    fn hop(&self, j: usize, cube: u8) -> Option<&Hop> {
        self.assigned[self.hop_index[&(j, cube)]].as_ref()
    }

    /// The chain-induced pairs of subcube `i`, or `None` while a needed hop is open.
    fn cube_pairs(&self, i: u8) -> Option<Vec<(NodeId, NodeId)>> {
        let mut pairs = Vec::new();
        for j in 0..3 {
            if !self.profile.covers(j, i) {
                continue;
            }
            let s = if i == self.profile.g[j] {
                self.spec.sources()[j].clone()
            } else {
                self.hop(j, (i + 3) % 4)?.1.clone()
            };
            let t = if i == self.profile.h[j] {
                self.spec.sinks()[j].clone()
            } else {
                self.hop(j, i)?.0.clone()
            };
            pairs.push((s, t));
        }
        Some(pairs)
    }

    /// Subcubes whose cover is checked while hops are being chosen.
    fn checked(&self, i: u8) -> bool {
        if self.detour {
            i == self.profile.busiest()
        } else {
            true
        }
    }

    fn cube_ok(&mut self, i: u8) -> Result<bool, Dpc3Error> {
        if !self.checked(i) {
            return Ok(true);
        }
        match self.cube_pairs(i) {
            Some(pairs) if !pairs.is_empty() => Ok(self.ctx.solve(i, &pairs)?.is_some()),
            _ => Ok(true),
        }
    }

    fn run(&mut self) -> Result<Option<Vec<Vec<NodeId>>>, Dpc3Error> {
        for i in 0..4 {
            if !self.cube_ok(i)? {
                return Ok(None);
            }
        }
        self.extend(0)
    }

    fn extend(&mut self, k: usize) -> Result<Option<Vec<Vec<NodeId>>>, Dpc3Error> {
        if k == self.hops.len() {
            return if self.detour { self.splice_detour() } else { self.finish() };
        }
        let (_, i) = self.hops[k];
        let candidates: Vec<Hop> = self.preferred[k].iter().cloned().chain(hop_candidates(&self.part, i)).collect();
        for (a, b) in candidates {
            if self.used.contains(&a) || self.used.contains(&b) {
                continue;
            }
            self.used.insert(a.clone());
            self.used.insert(b.clone());
            self.assigned[k] = Some((a.clone(), b.clone()));
            if self.cube_ok(i)? && self.cube_ok((i + 1) % 4)? {
                if let Some(found) = self.extend(k + 1)? {
                    return Ok(Some(found));
                }
            }
            self.assigned[k] = None;
            self.used.remove(&a);
            self.used.remove(&b);
        }
        Ok(None)
    }

    /// Concatenates each pair's subcube segments along its interval.
    fn stitch(&self, covers: &[Vec<Path>]) -> Vec<Vec<NodeId>> {
        (0..3)
            .map(|j| {
                let mut nodes = Vec::new();
                for i in self.profile.interval(j) {
                    let slot = (0..j).filter(|&jj| self.profile.covers(jj, i)).count();
                    nodes.extend_from_slice(covers[i as usize][slot].nodes());
                }
                nodes
            })
            .collect()
    }

    fn finish(&mut self) -> Result<Option<Vec<Vec<NodeId>>>, Dpc3Error> {
        let mut covers = Vec::with_capacity(4);
        for i in 0..4 {
            let pairs = self.cube_pairs(i).expect("all hops assigned");
            match self.ctx.solve(i, &pairs)? {
                Some(paths) => covers.push(paths),
                None => return Ok(None),
            }
        }
        Ok(Some(self.stitch(&covers)))
    }

    fn splice_detour(&mut self) -> Result<Option<Vec<Vec<NodeId>>>, Dpc3Error> {
        let p = self.profile.busiest();
        let base: Vec<Vec<(NodeId, NodeId)>> = (0..4).map(|i| self.cube_pairs(i).expect("all hops assigned")).collect();
        let Some(home) = self.ctx.solve(p, &base[p as usize])? else {
            return Ok(None);
        };
        for (q, path) in home.iter().enumerate() {
            for w in path.nodes().windows(2) {
                let (x, y) = (&w[0], &w[1]);
                let step = if x.is_white() { 1 } else { 3 };
                let cubes = [1, 2, 3].map(|k| (p + k * step) % 4);
                let mut covers: Vec<Option<Vec<Path>>> = vec![None; 4];
                covers[p as usize] = Some(home.clone());
                let mut ring = Vec::new();
                if self.ring(&base, &cubes, 0, x, y, &mut covers, &mut ring)? {
                    let covers: Vec<Vec<Path>> = covers.into_iter().map(|c| c.expect("every subcube covered")).collect();
                    let mut nodes = self.stitch(&covers);
                    let j = (0..3).filter(|&j| self.profile.covers(j, p)).nth(q).expect("path belongs to a pair");
                    let at = nodes[j].iter().position(|u| u == x).expect("split edge on its path");
                    nodes[j].splice(at + 1..at + 1, ring);
                    return Ok(Some(nodes));
                }
            }
        }
        Ok(None)
    }

    /// Chooses entry and exit vertices for the detour in `cubes[k..]`, covering each
    /// subcube with its chain pairs plus the detour segment.
    #[allow(clippy::too_many_arguments)]
    fn ring(
        &mut self,
        base: &[Vec<(NodeId, NodeId)>],
        cubes: &[u8; 3],
        k: usize,
        prev: &NodeId,
        y: &NodeId,
        covers: &mut Vec<Option<Vec<Path>>>,
        ring: &mut Vec<NodeId>,
    ) -> Result<bool, Dpc3Error> {
        if k == 3 {
            return Ok(true);
        }
        let cube = cubes[k];
        for e in self.part.crossing_neighbors(prev) {
            if self.used.contains(&e) {
                continue;
            }
            let exits: Vec<NodeId> = if k == 2 {
                self.part.crossing_neighbors(y).to_vec()
            } else {
                self.part.subcube_nodes(cube).into_iter().filter(|o| o.color() != e.color()).collect()
            };
            for o in exits {
                if self.used.contains(&o) {
                    continue;
                }
                let mut pairs = base[cube as usize].clone();
                pairs.push(if e.is_black() { (e.clone(), o.clone()) } else { (o.clone(), e.clone()) });
                let Some(cover) = self.ctx.solve(cube, &pairs)? else {
                    continue;
                };
                let last = cover.last().expect("detour segment");
                let segment = if e.is_black() { last.clone() } else { last.reversed() };
                let mark = ring.len();
                ring.extend_from_slice(segment.nodes());
                covers[cube as usize] = Some(cover);
                self.used.insert(e.clone());
                self.used.insert(o.clone());
                if self.ring(base, cubes, k + 1, &o, y, covers, ring)? {
                    return Ok(true);
                }
                self.used.remove(&e);
                self.used.remove(&o);
                covers[cube as usize] = None;
                ring.truncate(mark);
            }
        }
        Ok(false)
    }
}
