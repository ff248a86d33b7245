//! Graphviz DOT rendering of dual graphs and covers.

use std::fmt::Write;

use crate::curve_graph::DualGraph;
use crate::graph_cover::GraphCover;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_graph(
    out: &mut String,
    g: &DualGraph,
    prefix: &str,
    color: &str,
    edge_label: impl Fn(&str) -> Option<String>,
) {
    for (v, genus) in g.vertices() {
        let _ = writeln!(
            out,
            "    {} [label={}, color={color}];",
            quote(&format!("{prefix}{v}")),
            quote(&format!("{v}\\ng={genus}"))
        );
    }
    for (e, [a, b]) in g.edges() {
        let label = match edge_label(e.as_str()) {
            Some(extra) => format!("{e} {extra}"),
            None => e.to_string(),
        };
        let _ = writeln!(
            out,
            "    {} -- {} [label={}, color={color}];",
            quote(&format!("{prefix}{a}")),
            quote(&format!("{prefix}{b}")),
            quote(&label)
        );
    }
    for (l, v) in g.legs() {
        let id = quote(&format!("{prefix}leg:{l}"));
        let _ = writeln!(
            out,
            "    {id} [shape=point, xlabel={}, color={color}];",
            quote(l.as_str())
        );
        let _ = writeln!(
            out,
            "    {} -- {id} [color={color}];",
            quote(&format!("{prefix}{v}"))
        );
    }
}

/// A dual graph as an undirected DOT graph.
pub fn graph_to_dot(g: &DualGraph) -> String {
    let mut out = String::from("graph curve {\n    node [shape=circle];\n");
    write_graph(&mut out, g, "", "black", |_| None);
    out.push_str("}\n");
    out
}

/// A cover as two clusters, source in blue with node indices, target in
/// red, and dotted lines for the map on components.
pub fn cover_to_dot(c: &GraphCover) -> String {
    let mut out = format!(
        "graph cover {{\n    label={};\n    node [shape=circle];\n",
        quote(&format!("degree {}", c.degree()))
    );
    out.push_str("  subgraph cluster_source {\n    label=\"source\";\n");
    write_graph(&mut out, c.source(), "s:", "blue", |e| {
        let e = crate::ids::EdgeId::new(e);
        let index = c.edge_index().get(&e)?;
        let image = c.edge_map().get(&e)?;
        Some(format!("e={index} -> {image}"))
    });
    out.push_str("  }\n  subgraph cluster_target {\n    label=\"target\";\n");
    write_graph(&mut out, c.target(), "t:", "red", |_| None);
    out.push_str("  }\n");
    for (v, w) in c.vertex_map() {
        let _ = writeln!(
            out,
            "  {} -- {} [style=dotted, label={}];",
            quote(&format!("s:{v}")),
            quote(&format!("t:{w}")),
            quote(&format!("d={}", c.datum(v).degree))
        );
    }
    out.push_str("}\n");
    out
}
