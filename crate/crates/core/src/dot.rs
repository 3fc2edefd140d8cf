//! DOT export of the constructed region, with levels pinned to ranks so the
//! triangle renders recognizably and 0/1 edge labels colored distinctly.

use std::fmt::Write as _;

use crate::diagram::{Diagram, DiagramKind, Vertex};
use crate::error::Result;
use crate::orders::OrderAssignment;

fn node_id(v: Vertex) -> String {
    format!("v_{}_{}", v.level, v.index).replace('-', "m")
}

fn node_label(d: &Diagram, v: Vertex) -> String {
    match d.kind() {
        DiagramKind::PascalStandard => {
            let (i, j) = v.pascal_coords();
            format!("({i},{j})")
        }
        _ => format!("{}", v.index),
    }
}

fn write_ranks(out: &mut String, d: &Diagram) {
    for level in 0..=d.depth() {
        let ids: Vec<String> = d.vertices_at_level(level).map(node_id).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
    for level in 0..=d.depth() {
        for v in d.vertices_at_level(level) {
            let _ = writeln!(
                out,
                "  {} [label=\"{}\"];",
                node_id(v),
                node_label(d, v)
            );
        }
    }
}

/// Renders the bare diagram: one node per vertex, one edge per incidence.
pub fn diagram_dot(d: &Diagram) -> Result<String> {
    let mut out = String::from("digraph pascal_bratteli {\n  rankdir=TB;\n  node [shape=plaintext];\n");
    write_ranks(&mut out, d);
    for level in 0..d.depth() {
        for v in d.vertices_at_level(level).collect::<Vec<_>>() {
            for e in d.children(v)? {
                let _ = writeln!(out, "  {} -> {};", node_id(e.source), node_id(e.range));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Renders an ordered diagram: 0-labeled edges blue, 1-labeled edges red,
/// with the label attached.
pub fn order_dot(order: &OrderAssignment) -> Result<String> {
    let d = order.diagram();
    let mut out = String::from("digraph pascal_bratteli {\n  rankdir=TB;\n  node [shape=plaintext];\n");
    write_ranks(&mut out, d);
    for level in 0..d.depth() {
        for v in d.vertices_at_level(level).collect::<Vec<_>>() {
            for e in d.children(v)? {
                let (color, label) = match order.label(&e) {
                    Some(0) => ("blue", "0"),
                    Some(_) => ("red", "1"),
                    None => ("gray", "?"),
                };
                let _ = writeln!(
                    out,
                    "  {} -> {} [color={color}, label=\"{label}\"];",
                    node_id(e.source),
                    node_id(e.range)
                );
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
