//! Graphviz output for `BH_n` and for covers.

use std::fmt::Write;

use bhdpc_core::topology::{BalancedHypercube, NodeId, Partition};

pub const MAX_EXPORT_DIM: usize = 6;

const PATH_COLORS: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];

fn node_line(out: &mut String, indent: &str, u: &NodeId, extra: &str) {
    let fill = if u.is_white() { "fillcolor=white" } else { "fillcolor=gray30, fontcolor=white" };
    writeln!(out, "{indent}\"{u}\" [style=filled, {fill}{extra}];").unwrap();
}

/// The whole graph, clustered by subcube and with dashed crossing edges when `part` is set.
pub fn graph(cube: &BalancedHypercube, part: Option<&Partition>) -> String {
    let mut out = format!("graph BH_{} {{\n  node [shape=circle];\n", cube.dim());
    match part {
        Some(part) => {
            for i in 0..4u8 {
                writeln!(out, "  subgraph cluster_{i} {{\n    label=\"subcube {i}\";").unwrap();
                for u in part.subcube_nodes(i) {
                    node_line(&mut out, "    ", &u, "");
                }
                out.push_str("  }\n");
            }
        }
        None => {
            for u in cube.nodes() {
                node_line(&mut out, "  ", &u, "");
            }
        }
    }
    for e in cube.edges() {
        let style = match part {
            Some(part) if e.dim == part.split() => " [style=dashed]",
            _ => "",
        };
        writeln!(out, "  \"{}\" -- \"{}\"{style};", e.u, e.v).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Every edge of `BH_n` in light gray, path edges drawn over it in one color per path.
pub fn cover(cube: &BalancedHypercube, paths: &[Vec<NodeId>]) -> String {
    let mut out = format!("graph cover_BH_{} {{\n  node [shape=circle];\n", cube.dim());
    for u in cube.nodes() {
        let owner = paths.iter().position(|p| p.contains(&u));
        let extra = owner.map_or(String::new(), |j| format!(", color={}, penwidth=2", PATH_COLORS[j % 6]));
        node_line(&mut out, "  ", &u, &extra);
    }
    for e in cube.edges() {
        let on_path = paths
            .iter()
            .any(|p| p.windows(2).any(|w| (w[0] == e.u && w[1] == e.v) || (w[0] == e.v && w[1] == e.u)));
        if !on_path {
            writeln!(out, "  \"{}\" -- \"{}\" [color=gray85];", e.u, e.v).unwrap();
        }
    }
    for (j, p) in paths.iter().enumerate() {
        for w in p.windows(2) {
            writeln!(out, "  \"{}\" -- \"{}\" [color={}, penwidth=3];", w[0], w[1], PATH_COLORS[j % 6]).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
