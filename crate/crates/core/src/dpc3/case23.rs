//! Construction for one empty subcube and two subcubes met by all three pairs.
//!
//! Name the subcubes `z` (empty), `q1 = z + 1`, `q2`, `q3`. All sources lie in `q1` and
//! every sink in `q2` or `q3`. A Hamiltonian cycle of `q1` reading `s*, a, b, c, d, ...`
//! (with `a, b, c, d` a 4-cycle of symmetric pairs) is cut at the sources into three
//! stretches, each walked backwards from its source. The stretch ending at `d` continues
//! `d, a, a2, c, b` through the common crossing neighbor `a2` of `a` and `c`, then sweeps
//! `z`, `q3` and returns to `q2` at the successor `b2` of `a2` on its `q2` segment.

use crate::pathengine::{Path, PathEngine, Scope};
use crate::topology::{NodeId, Partition};

use super::{CaseProfile, Ctx, Dpc3Error, PathCover, Subcase, TerminalSpec};

pub fn construct_case23(
    spec: &TerminalSpec,
    profile: &CaseProfile,
    engine: &PathEngine,
) -> Result<PathCover, Dpc3Error> {
    if profile.subcase() != Subcase::S23 {
        return Err(Dpc3Error::InvalidSpec(format!("subcase {} is not 2.3", profile.subcase())));
    }
    let z = profile.beta.iter().position(|&b| b == 0).expect("one empty subcube") as u8;
    let [q1, q2, q3] = [1, 2, 3].map(|k| (z + k) % 4);
    if profile.g.iter().any(|&g| g != q1) || profile.h.iter().any(|&h| h != q2 && h != q3) {
        return Err(Dpc3Error::UnreachableCase { subcase: Subcase::S23, beta: profile.beta });
    }
    let part = profile.partition(spec.n());
    let mut route = Route { spec, part, ctx: Ctx::new(engine, part), z, q: [q1, q2, q3], ends_in_q3: [false; 3] };
    route.ends_in_q3 = [0, 1, 2].map(|j| profile.h[j] == q3);

    for star in 0..3 {
        let local = part.to_local(&spec.sources()[star]);
        for cert in engine.five_path_pair(&local)? {
            let cycle: Vec<NodeId> = cert.cycle.nodes().iter().map(|u| part.to_global(q1, u)).collect();
            if spec.sources().contains(&cycle[2]) {
                continue;
            }
            if let Some(nodes) = route.try_cycle(star, &cycle)? {
                return PathCover::from_nodes(spec, nodes);
            }
        }
    }
    Err(Dpc3Error::ChoiceExhausted(format!("no certificate cycle routes {spec}")))
}

struct Route<'a> {
    spec: &'a TerminalSpec,
    part: Partition,
    ctx: Ctx<'a>,
    z: u8,
    q: [u8; 3],
    ends_in_q3: [bool; 3],
}

/// The three stretches of the `q1` cycle, by pair index, and the vertices they hand off.
struct Cut {
    /// Pair whose stretch ends at `d`, then the other two in cycle order, then `s*`.
    order: [usize; 3],
    stretch: [Vec<NodeId>; 3],
    /// Last vertex of each stretch, in `order`: `a`, `u`, `v`.
    exit: [NodeId; 3],
    b: NodeId,
}

impl Route<'_> {
    fn cut(&self, star: usize, cycle: &[NodeId]) -> Cut {
        let sources = self.spec.sources();
        let mut others: Vec<(usize, usize)> = (0..3)
            .filter(|&j| j != star)
            .map(|j| (cycle.iter().position(|u| *u == sources[j]).expect("sources share q1"), j))
            .collect();
        others.sort_unstable();
        let [(pa, ja), (pb, jb)] = [others[0], others[1]];
        let mut first: Vec<NodeId> = cycle[4..=pa].iter().rev().cloned().collect();
        first.extend([cycle[1].clone(), cycle[2].clone(), cycle[3].clone()]);
        let second: Vec<NodeId> = cycle[pa + 1..=pb].iter().rev().cloned().collect();
        let mut third = vec![cycle[0].clone()];
        third.extend(cycle[pb + 1..].iter().rev().cloned());
        Cut {
            order: [ja, jb, star],
            exit: [cycle[1].clone(), cycle[pa + 1].clone(), cycle[pb + 1].clone()],
            b: cycle[2].clone(),
            stretch: [first, second, third],
        }
    }

    fn try_cycle(&mut self, star: usize, cycle: &[NodeId]) -> Result<Option<Vec<Vec<NodeId>>>, Dpc3Error> {
        let cut = self.cut(star, cycle);
        let [q1, q2, _] = self.q;
        debug_assert!(cycle.iter().all(|u| self.part.subcube_of(u) == q1));
        let [ea, eu, ev] = cut.exit.clone().map(|x| self.part.crossing_neighbors(&x));
        for a2 in &ea {
            for u2 in &eu {
                for v2 in &ev {
                    if a2 == u2 || a2 == v2 || u2 == v2 {
                        continue;
                    }
                    let heads = [a2.clone(), u2.clone(), v2.clone()];
                    let free_sinks = self.free_sink_choices(&cut.order, q2);
                    for sinks in free_sinks {
                        let pairs: Vec<(NodeId, NodeId)> =
                            heads.iter().cloned().zip(sinks.iter().cloned()).collect();
                        let Some(cover2) = self.ctx.solve(q2, &pairs)? else {
                            continue;
                        };
                        if let Some(found) = self.finish(&cut, &cover2)? {
                            return Ok(Some(found));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Sinks of the three `q2` segments in `order`: the pair's own sink, or a free white
    /// vertex from which the pair crosses on to `q3`.
    fn free_sink_choices(&self, order: &[usize; 3], q2: u8) -> Vec<Vec<NodeId>> {
        let whites: Vec<NodeId> = self
            .part
            .subcube_nodes(q2)
            .into_iter()
            .filter(|w| w.is_white() && !self.spec.is_terminal(w))
            .collect();
        let mut out = vec![Vec::new()];
        for &j in order {
            let mut next = Vec::new();
            for partial in &out {
                if self.ends_in_q3[j] {
                    for w in &whites {
                        if !partial.contains(w) {
                            let mut grown = partial.clone();
                            grown.push(w.clone());
                            next.push(grown);
                        }
                    }
                } else {
                    let mut grown = partial.clone();
                    grown.push(self.spec.sinks()[j].clone());
                    next.push(grown);
                }
            }
            out = next;
        }
        out
    }

    fn finish(&mut self, cut: &Cut, cover2: &[Path]) -> Result<Option<Vec<Vec<NodeId>>>, Dpc3Error> {
        let [_, _, q3] = self.q;
        let b2 = cover2[0].nodes()[1].clone();
        // pairs continuing into q3, by position in `order`
        let onward: Vec<usize> = (0..3).filter(|&r| self.ends_in_q3[cut.order[r]]).collect();
        let whites3: Vec<NodeId> = self
            .part
            .subcube_nodes(q3)
            .into_iter()
            .filter(|w| w.is_white() && !self.spec.is_terminal(w))
            .collect();
        for b3 in self.part.crossing_neighbors(&b2) {
            for entries in self.entry_choices(cover2, &onward) {
                if entries.contains(&b3) {
                    continue;
                }
                for a3 in &whites3 {
                    let mut pairs = vec![(b3.clone(), a3.clone())];
                    for (&r, x) in onward.iter().zip(&entries) {
                        pairs.push((x.clone(), self.spec.sinks()[cut.order[r]].clone()));
                    }
                    let Some(cover3) = self.ctx.solve(q3, &pairs)? else {
                        continue;
                    };
                    for a0 in self.part.crossing_neighbors(&cut.b) {
                        for b0 in self.part.crossing_neighbors(a3) {
                            let scope = Scope::Subcube(self.part, self.z);
                            let Ok(sweep) = self.ctx.engine.ham_path(scope, &a0, &b0) else {
                                continue;
                            };
                            return Ok(Some(self.assemble(cut, cover2, &cover3, &onward, &sweep)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// For each onward pair, one of the two `q3` crossing neighbors of its `q2` exit.
    fn entry_choices(&self, cover2: &[Path], onward: &[usize]) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new()];
        for &r in onward {
            let exit = cover2[r].last();
            let mut next = Vec::new();
            for partial in &out {
                for x in self.part.crossing_neighbors(exit) {
                    if !partial.contains(&x) {
                        let mut grown = partial.clone();
                        grown.push(x);
                        next.push(grown);
                    }
                }
            }
            out = next;
        }
        out
    }

    fn assemble(
        &self,
        cut: &Cut,
        cover2: &[Path],
        cover3: &[Path],
        onward: &[usize],
        sweep: &Path,
    ) -> Vec<Vec<NodeId>> {
        let mut nodes: Vec<Vec<NodeId>> = vec![Vec::new(); 3];
        for r in 0..3 {
            let mut path = cut.stretch[r].clone();
            if r == 0 {
                // ..., d, a, b, c from the cut becomes ..., d, a, a2, c, b
                let c = path.pop().expect("c");
                let b = path.pop().expect("b");
                path.push(cover2[0].first().clone());
                path.push(c);
                path.push(b);
                path.extend_from_slice(sweep.nodes());
                path.extend(cover3[0].reversed().into_nodes());
                path.extend_from_slice(&cover2[0].nodes()[1..]);
            } else {
                path.extend_from_slice(cover2[r].nodes());
            }
            if let Some(slot) = onward.iter().position(|&o| o == r) {
                path.extend_from_slice(cover3[1 + slot].nodes());
            }
            nodes[cut.order[r]] = path;
        }
        nodes
    }
}
