use std::fmt::Write as _;

use crate::ribbon_graph::RibbonGraph;

/// Undirected DOT graph. Each vertex is a record node whose fields are its
/// half-edges in rotation order; each external leg is a leaf node.
pub fn export_dot(graph: &RibbonGraph) -> String {
    let mut out = String::from("graph ribbon {\n");
    writeln!(out, "  node [shape=record];").unwrap();
    for (v, rot) in graph.rotations().iter().enumerate() {
        let fields: Vec<String> = rot.iter().map(|h| format!("<h{0}> {0}", h.0)).collect();
        writeln!(out, "  v{v} [label=\"{{v{v}|{{{}}}}}\"];", fields.join("|")).unwrap();
    }
    for (h, l) in graph.externals() {
        writeln!(out, "  x{l} [shape=plaintext, label=\"{l}\"];").unwrap();
        writeln!(out, "  v{}:h{} -- x{l};", graph.vertex_of(h), h.0).unwrap();
    }
    for (a, b) in graph.edges() {
        writeln!(
            out,
            "  v{}:h{} -- v{}:h{};",
            graph.vertex_of(a),
            a.0,
            graph.vertex_of(b),
            b.0
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon_graph::fixtures::*;

    #[test]
    fn one_node_per_vertex_and_leg() {
        let g = triangle_two_broken();
        let dot = export_dot(&g);
        let nodes = dot
            .lines()
            .filter(|l| l.contains("label=") && !l.contains("--"))
            .count();
        assert_eq!(nodes, g.vertex_count() + g.external_count());
        let lines = dot.lines().filter(|l| l.contains("--")).count();
        assert_eq!(lines, g.internal_line_count() + g.external_count());
        assert!(dot.starts_with("graph ribbon {") && dot.ends_with("}\n"));
    }
}
