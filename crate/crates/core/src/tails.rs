//! Boundary tails: boundary paths from a vertex that stay put in chosen coordinates.

use crate::alignment::{boundary_paths, leq_infty_membership};
use crate::degree::Degree;
use crate::error::Result;
use crate::genpath::GeneralizedPath;
use crate::graph::KGraph;
use crate::path::{Path, VertexId};

/// Answer to "is there `z ∈ v∂Λ` with `d(z)_i = 0` for every dead `i`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// A witness; `exact` is false when its boundary status is only known up
    /// to a window.
    Found { path: GeneralizedPath, exact: bool },
    /// No such boundary path exists.
    Absent,
    /// The search ended without a decision.
    Pending,
}

impl Tail {
    pub fn path(&self) -> Option<&GeneralizedPath> {
        match self {
            Tail::Found { path, .. } => Some(path),
            _ => None,
        }
    }
}

/// Supplies boundary tails for a graph or a family of windows of one.
pub trait TailOracle: Sync {
    fn tail(&self, g: &KGraph, v: VertexId, dead: &[bool]) -> Result<Tail>;

    /// `{ω(0, w ∧ d(ω)) : ω ∈ v∂Λ}`, when the oracle can list it.
    fn boundary_prefixes(&self, _g: &KGraph, _v: VertexId, _w: &Degree) -> Result<Option<Vec<Path>>> {
        Ok(None)
    }

    /// Whether every path of `vΛ^{≤cap}` and its source lie inside the window.
    fn guarded(&self, g: &KGraph, v: VertexId, cap: &Degree) -> bool {
        base_guarded(g, v, cap)
    }
}

pub fn base_guarded(g: &KGraph, v: VertexId, cap: &Degree) -> bool {
    match g.paths_up_to(v, cap) {
        Ok(paths) => paths.iter().all(|p| (0..g.rank()).all(|i| !g.is_incomplete(p.source(), i))),
        Err(_) => false,
    }
}

fn allowed_cap(g: &KGraph, dead: &[bool], depth: u32) -> Degree {
    Degree::new((0..g.rank()).map(|i| if dead[i] { 0 } else { depth }).collect())
}

/// Tails for finite graphs found by bounded search.
///
/// Exact on acyclic graphs, whose boundary paths all end at vertices that
/// receive no edges, and on 1-graphs, where every vertex reaches a source or
/// a cycle. Periodic witnesses are accepted only when certified to lie in
/// `Λ^{≤∞}`.
#[derive(Clone, Debug, Default)]
pub struct SearchTails;

impl TailOracle for SearchTails {
    fn tail(&self, g: &KGraph, v: VertexId, dead: &[bool]) -> Result<Tail> {
        if g.is_windowed() {
            return Ok(Tail::Pending);
        }
        let depth = g.vertex_count() as u32;
        let cap = allowed_cap(g, dead, depth);
        let paths = g.paths_up_to(v, &cap)?;
        if let Some(p) = paths.iter().find(|p| g.is_total_source(p.source())) {
            return Ok(Tail::Found { path: GeneralizedPath::Finite(p.clone()), exact: true });
        }
        if g.is_acyclic() {
            return Ok(Tail::Absent);
        }
        for p in &paths {
            let s = p.source();
            for c in g.paths_up_to(s, &cap)? {
                if c.is_vertex() || c.source() != s {
                    continue;
                }
                let x = GeneralizedPath::periodic(p.clone(), c)?;
                let verdict = leq_infty_membership(g, &x)?;
                if verdict.member && verdict.exact {
                    return Ok(Tail::Found { path: x, exact: true });
                }
            }
        }
        Ok(if g.rank() == 1 { Tail::Absent } else { Tail::Pending })
    }

    fn boundary_prefixes(&self, g: &KGraph, v: VertexId, w: &Degree) -> Result<Option<Vec<Path>>> {
        if g.is_windowed() || !g.is_acyclic() {
            return Ok(None);
        }
        let mut out = Vec::new();
        for x in boundary_paths(g)? {
            if x.range() == v {
                out.push(g.segment(&x, &Degree::zero(g.rank()), &x.degree().meet(w))?);
            }
        }
        out.sort();
        out.dedup();
        Ok(Some(out))
    }
}
