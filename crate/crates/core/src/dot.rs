//! Graphviz export. Edges are drawn without arrowheads unless a tree uses them.

use std::fmt::Write;

use crate::graph::MixedGraph;
use crate::pipeline::MixedPacking;

const PALETTE: [&str; 8] = ["red", "blue", "green4", "orange", "purple", "brown", "magenta", "cyan4"];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn tree_color(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

pub fn export_dot(g: &MixedGraph, roots: &[usize], packing: Option<&MixedPacking>) -> String {
    let mut arc_tree = vec![None; g.arcs().len()];
    let mut edge_tree = vec![None; g.edges().len()];
    if let Some(p) = packing {
        for (i, t) in p.trees.iter().enumerate() {
            for &a in &t.arcs {
                if let Some(slot) = arc_tree.get_mut(a) {
                    *slot = Some(i);
                }
            }
            for oe in &t.edges {
                if let Some(slot) = edge_tree.get_mut(oe.edge) {
                    *slot = Some((i, oe.tail, oe.head));
                }
            }
        }
    }

    let mut out = String::from("digraph mixed {\n  node [shape=circle];\n");
    for v in 0..g.vertex_count() {
        let indices: Vec<String> = roots
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r == v)
            .map(|(i, _)| (i + 1).to_string())
            .collect();
        if indices.is_empty() {
            writeln!(out, "  {};", quote(g.name(v))).unwrap();
        } else {
            writeln!(
                out,
                "  {} [shape=doublecircle, xlabel={}];",
                quote(g.name(v)),
                quote(&format!("r{}", indices.join(",")))
            )
            .unwrap();
        }
    }
    for (a, arc) in g.arcs().iter().enumerate() {
        let style = match arc_tree[a] {
            Some(i) => format!(", color={}, penwidth=2", tree_color(i)),
            None => String::new(),
        };
        writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(g.name(arc.tail)),
            quote(g.name(arc.head)),
            quote(&arc.id)
        )
        .unwrap();
    }
    for (e, edge) in g.edges().iter().enumerate() {
        match edge_tree[e] {
            Some((i, tail, head)) => writeln!(
                out,
                "  {} -> {} [label={}, color={}, penwidth=2];",
                quote(g.name(tail)),
                quote(g.name(head)),
                quote(&edge.id),
                tree_color(i)
            ),
            None => writeln!(
                out,
                "  {} -> {} [label={}, dir=none, style=dashed];",
                quote(g.name(edge.ends.0)),
                quote(g.name(edge.ends.1)),
                quote(&edge.id)
            ),
        }
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::parse_mixed_graph;
    use crate::pipeline::{solve, Solution, SolveOptions};

    #[test]
    fn plain_graph() {
        let inst = parse_mixed_graph("vertex r\nvertex \"q\nedge r \"q e\narc r \"q\nroot r\n").unwrap();
        let dot = export_dot(&inst.graph, &inst.roots, None);
        assert!(dot.starts_with("digraph mixed {\n"));
        assert!(dot.contains("\"r\" [shape=doublecircle, xlabel=\"r1\"];"));
        assert!(dot.contains("\"\\\"q\";"));
        assert!(dot.contains("[label=\"e\", dir=none, style=dashed]"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn packing_colors_every_tree_element() {
        let inst = fig1();
        let Solution::Packed { packing, .. } = solve(&inst.graph, &inst.roots, &SolveOptions::default()).unwrap()
        else {
            panic!()
        };
        let dot = export_dot(&inst.graph, &inst.roots, Some(&packing));
        assert_eq!(dot.matches("color=red").count(), 5);
        assert_eq!(dot.matches("color=blue").count(), 4);
        // v2-v5 is left over
        assert_eq!(dot.matches("dir=none").count(), 1);
        assert!(dot.contains("\"v2\" -> \"v5\" [label=\"e6\", dir=none"));
    }
}
