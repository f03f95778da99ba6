//! Graphviz export.

use std::fmt::Write as _;

use crate::embed::Embedding;
use crate::orient::Orientation;
use crate::potential::PotentialMap;

/// DOT text for `e`. Edges are directed when an orientation is given; face
/// ids, boundaries and potential values go into comments.
pub fn to_dot(e: &Embedding, d: Option<&Orientation>, potential: Option<&PotentialMap>) -> String {
    let mut s = String::from("digraph alphaflip {\n");
    let _ = writeln!(s, "  // mode {}", e.mode());
    if let Some(outer) = e.outer_face() {
        let _ = writeln!(s, "  // outer face {outer}");
    }
    for face in e.faces() {
        let walk: Vec<String> = face
            .boundary
            .iter()
            .map(|&h| e.vertex_label(e.tail(h)).to_string())
            .collect();
        let _ = write!(s, "  // face {} boundary {}", face.id, walk.join(" "));
        if let Some(z) = potential.and_then(|p| p.get(face.id)) {
            let _ = write!(s, " potential {z}");
        }
        s.push('\n');
    }
    for v in 0..e.num_vertices() {
        let label = e.vertex_label(v);
        let _ = writeln!(s, "  v{label} [label=\"{label}\"];");
    }
    for edge in 0..e.num_edges() {
        let (h, extra) = match d {
            Some(d) => (d.arc(edge), ""),
            None => (crate::embed::HalfEdge::new(edge, false), ", dir=none"),
        };
        let _ = writeln!(
            s,
            "  v{} -> v{} [label=\"{}\"{extra}];",
            e.vertex_label(e.tail(h)),
            e.vertex_label(e.head(h)),
            e.edge_label(edge)
        );
    }
    s.push_str("}\n");
    s
}
