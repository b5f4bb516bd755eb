//! The line-oriented `.kg` format.
//!
//! ```text
//! k 2
//! vertex v
//! edge f 1 v w
//! square f g = g2 f2
//! incomplete v 1
//! generator omega 2 inf,inf
//! ```
//!
//! Colors are 1-based. `#` starts a comment. `incomplete` marks a rim vertex
//! of a window in the given color.

use std::fmt::Write as _;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::fixtures::Generator;
use crate::graph::{KGraph, KGraphBuilder};

/// A parsed `.kg` file: an explicit graph or a lazy generator.
#[derive(Clone, Debug)]
pub enum KgDocument {
    Graph(KGraph),
    Generator(Generator),
}

impl KgDocument {
    /// The graph itself, or the generator materialized at `window`.
    pub fn materialize(&self, window: Option<&Degree>) -> Result<KGraph> {
        match self {
            KgDocument::Graph(g) => Ok(g.clone()),
            KgDocument::Generator(gen) => {
                let w = window.cloned().unwrap_or_else(|| Degree::new(vec![3; gen.rank()]));
                gen.materialize(&w)
            }
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_color(line: usize, s: &str, k: usize) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(c) if c >= 1 && c <= k => Ok(c - 1),
        _ => Err(err(line, format!("color `{s}` not in 1..={k}"))),
    }
}

pub fn parse_kg(text: &str) -> Result<KgDocument> {
    let mut builder: Option<KGraphBuilder> = None;
    let mut generator = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        if words[0] == "generator" {
            if builder.is_some() || generator.is_some() {
                return Err(err(line, "generator must be the only directive"));
            }
            let name = words.get(1).ok_or_else(|| err(line, "generator needs a name"))?;
            generator = Some(Generator::parse(name, &words[2..]).map_err(|e| match e {
                Error::Parse { message, .. } => err(line, message),
                other => err(line, other.to_string()),
            })?);
            continue;
        }
        if generator.is_some() {
            return Err(err(line, "generator must be the only directive"));
        }
        if words[0] == "k" {
            if builder.is_some() {
                return Err(err(line, "rank declared twice"));
            }
            let k: usize = match words.as_slice() {
                [_, k] => k.parse().map_err(|_| err(line, "bad rank"))?,
                _ => return Err(err(line, "expected `k <rank>`")),
            };
            if k == 0 {
                return Err(err(line, "rank must be positive"));
            }
            builder = Some(KGraphBuilder::new(k));
            continue;
        }
        let b = builder.as_mut().ok_or_else(|| err(line, "`k <rank>` must come first"))?;
        let k = b.rank();
        match words.as_slice() {
            ["vertex", name] => {
                if b.has_vertex(name) {
                    return Err(err(line, format!("duplicate vertex `{name}`")));
                }
                b.vertex(name);
            }
            ["edge", name, color, range, source] => {
                let c = parse_color(line, color, k)?;
                let r = b.vertex_id(range).ok_or_else(|| err(line, format!("unknown vertex `{range}`")))?;
                let s = b.vertex_id(source).ok_or_else(|| err(line, format!("unknown vertex `{source}`")))?;
                b.edge(name, c, r, s).map_err(|e| err(line, e.to_string()))?;
            }
            ["square", f, g, "=", g2, f2] => {
                b.square_by_name(f, g, g2, f2).map_err(|e| err(line, e.to_string()))?;
            }
            ["incomplete", v, color] => {
                let c = parse_color(line, color, k)?;
                let id = b.vertex_id(v).ok_or_else(|| err(line, format!("unknown vertex `{v}`")))?;
                b.mark_incomplete(id, c);
            }
            _ => return Err(err(line, format!("cannot parse `{content}`"))),
        }
    }
    if let Some(g) = generator {
        return Ok(KgDocument::Generator(g));
    }
    let b = builder.ok_or_else(|| err(0, "empty file"))?;
    Ok(KgDocument::Graph(b.build()?))
}

/// Parses a file that must describe an explicit graph.
pub fn parse_graph(text: &str) -> Result<KGraph> {
    match parse_kg(text)? {
        KgDocument::Graph(g) => Ok(g),
        KgDocument::Generator(_) => Err(err(0, "expected an explicit graph, found a generator")),
    }
}

pub fn write_kg(g: &KGraph) -> String {
    let mut out = String::new();
    writeln!(out, "k {}", g.rank()).unwrap();
    for v in g.vertices() {
        writeln!(out, "vertex {}", g.vertex_name(v)).unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "edge {} {} {} {}",
            e.name,
            e.color + 1,
            g.vertex_name(e.range),
            g.vertex_name(e.source)
        )
        .unwrap();
    }
    for [f, h, h2, f2] in g.square_list() {
        let n = |e| &g.edge(e).name;
        writeln!(out, "square {} {} = {} {}", n(f), n(h), n(h2), n(f2)).unwrap();
    }
    for &(v, c) in g.incomplete() {
        writeln!(out, "incomplete {} {}", g.vertex_name(v), c + 1).unwrap();
    }
    out
}

pub fn write_generator(gen: &Generator) -> String {
    format!("generator {}\n", gen.spec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{omega_finite, paper_ex};

    #[test]
    fn round_trip() {
        for g in [paper_ex(3), omega_finite(&Degree::new(vec![1, 2, 1]))] {
            let text = write_kg(&g);
            let h = parse_graph(&text).unwrap();
            assert_eq!(write_kg(&h), text);
        }
    }

    #[test]
    fn errors_cite_lines() {
        let text = "k 1\nvertex v\n\nedge e 1 v w\n";
        match parse_kg(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        match parse_kg("vertex v\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match parse_kg("k 2\nvertex v\nedge e 3 v v\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_square_is_rejected() {
        let text = write_kg(&paper_ex(2)).replace("square x_0 f_1 = f_0 t_0\n", "");
        assert!(matches!(parse_kg(&text), Err(Error::MissingSquare { .. })));
    }

    #[test]
    fn generators() {
        let doc = parse_kg("# lazy\ngenerator omega 2 inf,inf\n").unwrap();
        let g = doc.materialize(Some(&Degree::new(vec![2, 2]))).unwrap();
        assert_eq!(g.vertex_count(), 9);
        let KgDocument::Generator(gen) = doc else { panic!() };
        assert!(matches!(parse_kg(&write_generator(&gen)).unwrap(), KgDocument::Generator(h) if h == gen));
        assert!(parse_kg("generator nope\n").is_err());
    }
}
