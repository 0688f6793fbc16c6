//! 8-cycles with one edge per subcube, and the five-path certificates.

use crate::topology::{are_adjacent, distinct_neighbors, translate, DimEdge, NodeId, Partition};

use super::{Cycle, EngineError, PathEngine, Scope};

/// A Hamiltonian cycle of `BH_n` that begins `s, a, b, c, d` where `a, b, c, d` is a
/// 4-cycle with `a`, `c` and `b`, `d` symmetric pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FivePathCertificate {
    pub s: NodeId,
    pub cycle: Cycle,
}

impl FivePathCertificate {
    /// `[s, a, b, c, d]`.
    pub fn path(&self) -> &[NodeId] {
        &self.cycle.nodes()[..5]
    }

    /// `[a, b, c, d]`.
    pub fn four_cycle(&self) -> &[NodeId] {
        &self.cycle.nodes()[1..5]
    }

    pub fn check(&self) -> Result<(), EngineError> {
        let bad = |msg: &str| Err(EngineError::InvalidPath(format!("certificate for {}: {msg}", self.s)));
        let nodes = self.cycle.nodes();
        let n = self.s.dim();
        if nodes.len() != crate::topology::order(n) {
            return bad("cycle is not Hamiltonian");
        }
        if nodes[0] != self.s || !self.s.is_black() {
            return bad("cycle does not start at the black source");
        }
        let [a, b, c, d] = [&nodes[1], &nodes[2], &nodes[3], &nodes[4]];
        if *a != c.symmetric() || *b != d.symmetric() {
            return bad("opposite corners are not symmetric");
        }
        if !are_adjacent(d, a) {
            return bad("a, b, c, d does not close");
        }
        Ok(())
    }
}

/// An 8-cycle through `edge` using exactly one edge inside each subcube of `part`; the
/// other four edges cross between subcubes. Starts `edge.u, edge.v`.
pub(crate) fn find_8cycle(edge: &DimEdge, part: &Partition) -> Result<Cycle, EngineError> {
    let n = part.dim();
    if edge.u.dim() != n || !are_adjacent(&edge.u, &edge.v) {
        return Err(EngineError::InvalidTerminals(format!("{} - {} is not an edge of BH_{n}", edge.u, edge.v)));
    }
    let mut walk = vec![edge.u.clone(), edge.v.clone()];
    let mut inner = [0u8; 4];
    let mut crossing = 0u8;
    add_edge(part, &edge.u, &edge.v, &mut inner, &mut crossing, 1);
    if extend(part, &mut walk, &mut inner, &mut crossing) {
        return Ok(Cycle::new(walk).expect("8-cycle search yields a cycle"));
    }
    Err(EngineError::NotFound(format!("8-cycle through {} - {}", edge.u, edge.v)))
}

fn add_edge(part: &Partition, x: &NodeId, y: &NodeId, inner: &mut [u8; 4], crossing: &mut u8, delta: i8) -> bool {
    if part.is_crossing(x, y) {
        *crossing = crossing.wrapping_add_signed(delta);
        *crossing <= 4
    } else {
        let k = &mut inner[part.subcube_of(x) as usize];
        *k = k.wrapping_add_signed(delta);
        *k <= 1
    }
}

fn extend(part: &Partition, walk: &mut Vec<NodeId>, inner: &mut [u8; 4], crossing: &mut u8) -> bool {
    let last = walk[walk.len() - 1].clone();
    if walk.len() == 8 {
        if !are_adjacent(&last, &walk[0]) {
            return false;
        }
        let ok = add_edge(part, &last, &walk[0], inner, crossing, 1);
        let done = ok && *crossing == 4 && inner.iter().all(|&k| k == 1);
        add_edge(part, &last, &walk[0], inner, crossing, -1);
        return done;
    }
    for next in distinct_neighbors(&last) {
        if walk.contains(&next) {
            continue;
        }
        let ok = add_edge(part, &last, &next, inner, crossing, 1);
        if ok {
            walk.push(next.clone());
            if extend(part, walk, inner, crossing) {
                return true;
            }
            walk.pop();
        }
        add_edge(part, &last, &next, inner, crossing, -1);
    }
    false
}

fn base_cycles() -> [Vec<NodeId>; 2] {
    const C1: [(u8, u8); 16] = [
        (1, 0), (0, 0), (1, 1), (2, 0), (3, 1), (0, 1), (1, 2), (2, 1),
        (3, 2), (2, 2), (1, 3), (0, 2), (3, 3), (2, 3), (3, 0), (0, 3),
    ];
    const C2: [(u8, u8); 16] = [
        (1, 0), (0, 3), (3, 3), (2, 3), (1, 3), (2, 2), (3, 2), (0, 2),
        (1, 2), (2, 1), (3, 1), (0, 1), (1, 1), (2, 0), (3, 0), (0, 0),
    ];
    let lift = |c: &[(u8, u8)]| c.iter().map(|&(x, y)| NodeId::from_digits(vec![x, y])).collect();
    [lift(&C1), lift(&C2)]
}

pub(crate) fn five_path_pair(engine: &PathEngine, s: &NodeId) -> Result<[FivePathCertificate; 2], EngineError> {
    let n = s.dim();
    if n < 2 || !s.is_black() {
        return Err(EngineError::InvalidTerminals(format!("{s} must be black in BH_n, n >= 2")));
    }
    let cycles = if n == 2 {
        // the listed cycles start at (1,0); (3,0) is its symmetric twin and digit 1 translates
        base_cycles().map(|c| {
            c.iter()
                .map(|u| {
                    let u = if s.inner() == 3 { u.symmetric() } else { u.clone() };
                    translate(&u, 1, s.digit(1))
                })
                .collect::<Vec<_>>()
        })
    } else {
        let part = Partition::new(n, n - 1)?;
        let cube = part.subcube_of(s);
        let inner = five_path_pair(engine, &part.to_local(s))?;
        let mut out: [Vec<NodeId>; 2] = Default::default();
        for (slot, cert) in out.iter_mut().zip(inner) {
            let base: Vec<NodeId> = cert.cycle.nodes().iter().map(|u| part.to_global(cube, u)).collect();
            *slot = lift_cycle(engine, &part, &base)?;
        }
        out
    };
    let make = |nodes: Vec<NodeId>| -> Result<FivePathCertificate, EngineError> {
        let cert = FivePathCertificate { s: s.clone(), cycle: Cycle::new(nodes)? };
        cert.check()?;
        Ok(cert)
    };
    let [c1, c2] = cycles;
    Ok([make(c1)?, make(c2)?])
}

/// Extends a Hamiltonian cycle of one subcube, starting `s, a, b, c, d`, to all of `BH_n`.
fn lift_cycle(engine: &PathEngine, part: &Partition, base: &[NodeId]) -> Result<Vec<NodeId>, EngineError> {
    // base[5], base[6] is the first white-first edge clear of s, a, b, c, d
    let i = 5;
    let (u, v) = (&base[i], &base[i + 1]);
    debug_assert!(u.is_white() && v.is_black());
    let edge = DimEdge::new(u.clone(), v.clone())?;
    let mut ring = find_8cycle(&edge, part)?.nodes().to_vec();
    // orient as u, w1, ..., w6, v so that u leaves through its crossing edge
    if ring[1] == *v {
        ring[1..].reverse();
    }
    let mut out: Vec<NodeId> = base[i + 1..].iter().chain(&base[..=i]).cloned().collect();
    for k in 0..3 {
        let (x, y) = (&ring[1 + 2 * k], &ring[2 + 2 * k]);
        debug_assert_eq!(part.subcube_of(x), part.subcube_of(y));
        let scope = Scope::Subcube(*part, part.subcube_of(x));
        out.extend(engine.ham_path(scope, x, y)?.into_nodes());
    }
    let start = out.iter().position(|x| *x == base[0]).expect("source on the cycle");
    out.rotate_left(start);
    Ok(out)
}
