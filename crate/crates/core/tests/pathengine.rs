mod common;

use bhdpc_core::pathengine::{EngineError, Path, PathEngine, Scope};
use bhdpc_core::topology::{BalancedHypercube, DimEdge, NodeId, Partition};
use bhdpc_core::verify::verify_paths;
use common::{node, pairs};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn ham_path_every_pair_bh2_verifies() {
    let engine = PathEngine::new();
    for s in common::blacks(2) {
        for t in common::whites(2) {
            let p = engine.ham_path(Scope::Whole(2), &s, &t).unwrap();
            let report = verify_paths(2, &[(s.clone(), t.clone())], &[p]);
            assert!(report.passed(), "{s} -> {t}: {:?}", report.problems());
        }
    }
}

#[test]
fn ham_path_from_listed_cycle() {
    // the 16-cycle through (1,0),(0,0),(1,1),... minus its edge (1,0)-(0,0)
    let cycle = [
        "(1,0)", "(0,0)", "(1,1)", "(2,0)", "(3,1)", "(0,1)", "(1,2)", "(2,1)",
        "(3,2)", "(2,2)", "(1,3)", "(0,2)", "(3,3)", "(2,3)", "(3,0)", "(0,3)",
    ];
    let mut nodes: Vec<NodeId> = cycle[1..].iter().map(|t| node(t)).collect();
    nodes.push(node("(1,0)"));
    nodes.reverse();
    let witness = Path::new(nodes).unwrap();
    let report = verify_paths(2, &[(node("(1,0)"), node("(0,0)"))], &[witness]);
    assert!(report.passed());
}

#[test]
fn pruned_search_agrees_with_reference() {
    let engine = PathEngine::unbounded();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut answers = [0usize; 2];
    for n in 1..=2 {
        for k in 1..=3 {
            if n == 1 && k == 3 {
                continue;
            }
            for _ in 0..40 {
                let ps = common::random_pairs(&mut rng, n, k);
                let reference = common::reference_kdpc(n, &ps);
                let pruned = engine.solve_kdpc(Scope::Whole(n), &ps);
                match (&reference, &pruned) {
                    (Some(_), Ok(paths)) => {
                        assert!(verify_paths(n, &ps, paths).passed());
                        answers[0] += 1;
                    }
                    (None, Err(EngineError::Unsat)) => answers[1] += 1,
                    _ => panic!("disagreement on {ps:?}: reference {reference:?}, solver {pruned:?}"),
                }
            }
        }
    }
    assert!(answers[0] > 0 && answers[1] > 0, "{answers:?}");
}

#[test]
fn two_dpc_random_bh2() {
    let engine = PathEngine::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let ps = common::random_pairs(&mut rng, 2, 2);
        let (p, q) = engine.two_dpc(Scope::Whole(2), (&ps[0].0, &ps[0].1), (&ps[1].0, &ps[1].1)).unwrap();
        assert_eq!(p.len() + q.len(), 16);
        assert!(verify_paths(2, &ps, &[p, q]).passed());
    }
}

#[test]
fn two_dpc_bh3_subcube() {
    let engine = PathEngine::new();
    let part = Partition::new(4, 3).unwrap();
    let ps = pairs(&[("(1,0,0,2)", "(0,1,3,2)"), ("(3,2,1,2)", "(2,0,0,2)")]);
    let (p, q) = engine.two_dpc(Scope::Subcube(part, 2), (&ps[0].0, &ps[0].1), (&ps[1].0, &ps[1].1)).unwrap();
    assert_eq!(p.len() + q.len(), 64);
    assert!(p.nodes().iter().chain(q.nodes()).all(|u| u.digit(3) == 2));
}

#[test]
fn budget_exhaustion_is_not_unsat() {
    let engine = PathEngine::with_budget(3);
    let r = engine.ham_path(Scope::Whole(3), &node("(1,0,0)"), &node("(0,0,0)"));
    assert!(matches!(r, Err(EngineError::BudgetExceeded { .. })), "{r:?}");
}

#[test]
fn solver_is_deterministic() {
    let engine = PathEngine::new();
    let ps = pairs(&[("(1,0,0)", "(0,3,2)"), ("(3,1,1)", "(2,2,0)"), ("(1,2,3)", "(0,0,1)")]);
    let a = engine.solve_kdpc(Scope::Whole(3), &ps).unwrap();
    let b = engine.solve_kdpc(Scope::Whole(3), &ps).unwrap();
    assert_eq!(a, b);
    assert!(verify_paths(3, &ps, &a).passed());
}

/// One edge inside each subcube and four crossing edges, checked from coordinates.
fn one_edge_per_subcube(cycle: &[NodeId], l: usize) -> bool {
    let mut inside = [0; 4];
    let mut crossing = 0;
    for k in 0..cycle.len() {
        let (u, v) = (&cycle[k], &cycle[(k + 1) % cycle.len()]);
        assert!(common::adjacent(u, v));
        if u.digit(l) == v.digit(l) {
            inside[u.digit(l) as usize] += 1;
        } else {
            crossing += 1;
        }
    }
    inside == [1; 4] && crossing == 4
}

#[test]
fn eight_cycles_every_bh2_edge() {
    let engine = PathEngine::new();
    let cube = BalancedHypercube::new(2).unwrap();
    let part = cube.partition_along(1).unwrap();
    assert_eq!(cube.edges().len(), 32);
    for e in cube.edges() {
        let c = engine.find_8cycle(&e, &part).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c.has_edge(&e.u, &e.v));
        assert!(one_edge_per_subcube(c.nodes(), 1));
    }
}

#[test]
fn eight_cycles_bh3_both_splits() {
    let engine = PathEngine::new();
    let cube = BalancedHypercube::new(3).unwrap();
    for l in 1..3 {
        let part = cube.partition_along(l).unwrap();
        for e in cube.edges().iter().step_by(3) {
            let c = engine.find_8cycle(e, &part).unwrap();
            assert!(one_edge_per_subcube(c.nodes(), l), "{e:?}");
        }
    }
}

#[test]
fn find_8cycle_rejects_non_edges() {
    let part = Partition::new(2, 1).unwrap();
    let bogus = DimEdge { u: node("(0,0)"), v: node("(2,0)"), dim: 0 };
    assert!(PathEngine::new().find_8cycle(&bogus, &part).is_err());
}

#[test]
fn five_path_certificates_bh2() {
    let engine = PathEngine::new();
    for s in common::blacks(2) {
        let [c1, c2] = engine.five_path_pair(&s).unwrap();
        for c in [&c1, &c2] {
            c.check().unwrap();
            assert_eq!(c.path()[0], s);
            assert!(c.cycle.contains_segment(c.path()));
        }
        assert!(c1.four_cycle().iter().all(|u| !c2.four_cycle().contains(u)), "{s}");
    }
}

#[test]
fn five_path_rejects_white_source() {
    assert!(PathEngine::new().five_path_pair(&node("(0,0)")).is_err());
    assert!(PathEngine::new().five_path_pair(&node("(1)")).is_err());
}
