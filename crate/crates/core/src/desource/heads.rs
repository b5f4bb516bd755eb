//! Comparison with the classical construction for 1-graphs: a head
//! `… → v^(2) → v^(1) → v` is attached at every source `v`.

use std::collections::HashMap;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::genpath::GeneralizedPath;
use crate::graph::{KGraph, KGraphBuilder};
use crate::path::{EdgeId, Path, VertexId};
use crate::tails::SearchTails;

use super::{materialize_window, DMorph, Desource, DesourcedWindow};

pub fn head_vertex_name(g: &KGraph, v: VertexId, n: u32) -> String {
    format!("{}^{n}", g.vertex_name(v))
}

pub fn head_edge_name(g: &KGraph, v: VertexId, n: u32) -> String {
    format!("h_{}^{n}", g.vertex_name(v))
}

/// The 1-graph with heads of `length` edges added at each source. The far
/// end of each head is marked as a rim vertex.
pub fn add_heads(g: &KGraph, length: u32) -> Result<KGraph> {
    if g.rank() != 1 {
        return Err(Error::NotRank1(g.rank()));
    }
    let mut b = KGraphBuilder::new(1);
    for v in g.vertices() {
        b.vertex(g.vertex_name(v));
    }
    for e in g.edges() {
        b.edge(&e.name, 0, e.range, e.source)?;
    }
    for v in g.vertices().filter(|&v| g.is_total_source(v)) {
        let mut prev = v;
        for n in 1..=length {
            let next = b.vertex(&head_vertex_name(g, v, n));
            b.edge(&head_edge_name(g, v, n), 0, prev, next)?;
            prev = next;
        }
        if length > 0 {
            b.mark_incomplete(prev, 0);
        }
    }
    b.build()
}

/// A verified isomorphism between a window of `Λ̃` and the head graph.
#[derive(Clone, Debug)]
pub struct HeadsIso {
    pub heads: KGraph,
    pub tilde: DesourcedWindow,
    /// `η` on vertices, indexed by the vertices of the window.
    pub eta_vertices: Vec<VertexId>,
    /// `η` on edges, indexed by the edges of the window.
    pub eta_edges: Vec<EdgeId>,
    pub paths_checked: usize,
    pub mismatches: Vec<String>,
}

impl HeadsIso {
    pub fn verified(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `ξ` on a path `ν` of the head graph.
fn xi(ds: &Desource, g: &KGraph, f: &KGraph, nu: &Path) -> Result<DMorph> {
    let base = g.vertex_count() as VertexId;
    let in_base = |v: VertexId| v < base;
    let head_of = |v: VertexId| -> Result<(VertexId, u32)> {
        let name = f.vertex_name(v);
        let (root, n) = name.rsplit_once('^').ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
        Ok((g.vertex_by_name(root)?, n.parse().map_err(|_| Error::UnknownVertex(name.to_string()))?))
    };
    let len = nu.degree().get(0);
    let zero = Degree::zero(1);
    let total = Degree::new(vec![len]);
    if in_base(nu.range()) && in_base(nu.source()) {
        let lambda = g.path_from_word(nu.range(), nu.edges())?;
        return ds.embed_iota(&lambda);
    }
    if in_base(nu.range()) {
        let inside: Vec<EdgeId> = nu.edges().iter().copied().take_while(|&e| (e as usize) < g.edge_count()).collect();
        let lambda = g.path_from_word(nu.range(), &inside)?;
        return ds.canon_morph(&GeneralizedPath::Finite(lambda), &zero, &total);
    }
    let (root, q) = head_of(nu.range())?;
    let q = Degree::new(vec![q]);
    ds.canon_morph(&GeneralizedPath::Finite(g.vertex_path(root)), &q, &q.add(&total))
}

/// Builds `Λ̃` up to offset `window` and the head graph with heads of the
/// same length, and checks that `η` is a degree-preserving isomorphism with
/// inverse `ξ` on every path of length at most `window`.
pub fn add_heads_iso_1graph(g: &KGraph, window: u32) -> Result<HeadsIso> {
    if g.rank() != 1 {
        return Err(Error::NotRank1(g.rank()));
    }
    let oracle = SearchTails;
    let ds = Desource::new(g, &oracle);
    let w = Degree::new(vec![window]);
    let tilde = materialize_window(&ds, &w, &Degree::new(vec![1]))?;
    let heads = add_heads(g, window)?;
    let mut mismatches = Vec::new();

    let mut eta_vertices = Vec::new();
    for dv in &tilde.vertices {
        let c = dv.c.get(0);
        let name = if c == 0 { g.vertex_name(dv.v).to_string() } else { head_vertex_name(g, dv.v, c) };
        match heads.vertex_id(&name) {
            Some(id) => eta_vertices.push(id),
            None => {
                mismatches.push(format!("no vertex {name} for ({}, {})", g.vertex_name(dv.v), dv.c));
                eta_vertices.push(VertexId::MAX);
            }
        }
    }
    let mut eta_edges = Vec::new();
    for m in &tilde.edges {
        let name = if m.lambda.is_vertex() {
            head_edge_name(g, m.lambda.range(), m.a.get(0) + 1)
        } else {
            g.edge(m.lambda.edges()[0]).name.clone()
        };
        match heads.edge_id(&name) {
            Some(id) => eta_edges.push(id),
            None => {
                mismatches.push(format!("no edge {name}"));
                eta_edges.push(EdgeId::MAX);
            }
        }
    }
    if !mismatches.is_empty() {
        return Ok(HeadsIso { heads, tilde, eta_vertices, eta_edges, paths_checked: 0, mismatches });
    }

    // Bijectivity and incidence.
    let mut seen_v = vec![false; heads.vertex_count()];
    for &v in &eta_vertices {
        seen_v[v as usize] = true;
    }
    if seen_v.iter().any(|s| !s) || eta_vertices.len() != heads.vertex_count() {
        mismatches.push("η is not onto the vertices".into());
    }
    let mut inverse: HashMap<EdgeId, EdgeId> = HashMap::new();
    for (id, &e) in eta_edges.iter().enumerate() {
        if inverse.insert(e, id as EdgeId).is_some() {
            mismatches.push(format!("η is not injective at {}", heads.edge(e).name));
        }
        let (te, fe) = (tilde.graph.edge(id as EdgeId), heads.edge(e));
        if eta_vertices[te.range as usize] != fe.range || eta_vertices[te.source as usize] != fe.source {
            mismatches.push(format!("η does not preserve the ends of {}", fe.name));
        }
    }
    if inverse.len() != heads.edge_count() {
        mismatches.push("η is not onto the edges".into());
    }

    // ξ inverts η on paths of length at most the window.
    let mut paths_checked = 0;
    for v in tilde.graph.vertices() {
        let cap = w.sub(&tilde.vertices[v as usize].c);
        let paths = match tilde.graph.paths_up_to(v, &cap) {
            Ok(p) => p,
            Err(Error::WindowExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        for p in paths {
            let image: Vec<EdgeId> = p.edges().iter().map(|&e| eta_edges[e as usize]).collect();
            let nu = heads.path_from_word(eta_vertices[p.range() as usize], &image)?;
            let expected = tilde.morph_of_path(&ds, &p)?;
            let back = xi(&ds, g, &heads, &nu)?;
            if back != expected || back.b != *nu.degree() {
                mismatches.push(format!("ξ(η({})) differs", tilde.graph.format_path(&p)));
            }
            paths_checked += 1;
        }
    }
    Ok(HeadsIso { heads, tilde, eta_vertices, eta_edges, paths_checked, mismatches })
}
