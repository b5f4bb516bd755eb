//! Graphviz export of the 1-skeleton.

use std::fmt::Write as _;

use crate::graph::KGraph;

const STYLES: [&str; 4] = ["solid", "dashed", "dotted", "bold"];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Edges point from source to range. Colors beyond the fourth reuse `bold`.
pub fn export_dot(g: &KGraph) -> String {
    let mut out = String::from("digraph skeleton {\n");
    for v in g.vertices() {
        writeln!(out, "  {};", quote(g.vertex_name(v))).unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "  {} -> {} [label={}, style={}];",
            quote(g.vertex_name(e.source)),
            quote(g.vertex_name(e.range)),
            quote(&e.name),
            STYLES[e.color.min(STYLES.len() - 1)]
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::Degree;
    use crate::fixtures::{omega_finite, triv};

    #[test]
    fn omega_skeleton() {
        let dot = export_dot(&omega_finite(&Degree::new(vec![2, 2])));
        assert_eq!(dot.matches("style=solid").count(), 6);
        assert_eq!(dot.matches("style=dashed").count(), 6);
        assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with("\";")).count(), 9);
    }

    #[test]
    fn single_node() {
        assert_eq!(export_dot(&triv()), "digraph skeleton {\n  \"v\";\n}\n");
    }
}
