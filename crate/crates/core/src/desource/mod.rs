//! The desourcification `Λ̃`: a source-free k-graph containing `Λ`.
//!
//! A vertex of `Λ̃` is stored as its canonical pair `(v, c)`: the vertex
//! `x(m ∧ d(x))` reached by a boundary path together with the overshoot
//! `c = m − m ∧ d(x)`. A morphism is the canonical triple `(λ, a, b)` with
//! `λ = x(m ∧ d(x), n ∧ d(x))`, `a = m − m ∧ d(x)` and `b = n − m`. Both
//! carry a witness boundary path; equality and hashing ignore it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use crate::alignment::{boundary_status, BoundaryOptions, BoundaryVerdict};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::genpath::{compose_paths, shift_path, GeneralizedPath};
use crate::graph::{KGraph, KGraphBuilder};
use crate::path::{EdgeId, Path, VertexId};
use crate::tails::{Tail, TailOracle};

pub mod checks;
pub mod heads;

/// `(v, c)`: the canonical form of a vertex of `Λ̃`.
pub type VertexKey = (VertexId, Degree);

#[derive(Clone, Debug)]
pub struct DVertex {
    pub v: VertexId,
    pub c: Degree,
    /// A boundary path `z` with `[z; c]` equal to this vertex.
    pub witness: GeneralizedPath,
}

impl DVertex {
    pub fn key(&self) -> VertexKey {
        (self.v, self.c.clone())
    }

    pub fn is_embedded(&self) -> bool {
        self.c.is_zero()
    }
}

impl PartialEq for DVertex {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.c == other.c
    }
}

impl Eq for DVertex {}

impl Hash for DVertex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state);
        self.c.hash(state);
    }
}

#[derive(Clone, Debug)]
pub struct DMorph {
    pub lambda: Path,
    pub a: Degree,
    pub b: Degree,
    /// A boundary path `y` with `r(y) = r(λ)` and `[y; (a, a + b)]` equal to
    /// this morphism.
    pub witness: GeneralizedPath,
}

impl DMorph {
    pub fn key(&self) -> (&Path, &Degree, &Degree) {
        (&self.lambda, &self.a, &self.b)
    }

    pub fn degree(&self) -> &Degree {
        &self.b
    }

    pub fn range(&self) -> VertexKey {
        (self.lambda.range(), self.a.clone())
    }

    pub fn source(&self) -> VertexKey {
        (self.lambda.source(), self.a.add(&self.b).sub(self.lambda.degree()))
    }

    pub fn is_vertex(&self) -> bool {
        self.b.is_zero()
    }

    /// Lies in `ι(Λ)`.
    pub fn is_embedded(&self) -> bool {
        self.a.is_zero() && self.lambda.degree() == &self.b
    }
}

impl PartialEq for DMorph {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for DMorph {}

impl Hash for DMorph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for DMorph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DMorph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// `π`: the part of a morphism that lies in `Λ`.
pub fn project_pi(m: &DMorph) -> &Path {
    &m.lambda
}

/// Coordinates `i` with `c_i > 0`.
fn support_mask(c: &Degree) -> Vec<bool> {
    c.entries().iter().map(|&x| x > 0).collect()
}

/// Result of an admissibility query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissible<T> {
    Yes(T),
    No,
    /// The tail oracle could not decide.
    Pending,
}

/// Class operations of `Λ̃` over a graph and a source of boundary tails.
#[derive(Clone, Copy)]
pub struct Desource<'a> {
    pub graph: &'a KGraph,
    pub oracle: &'a dyn TailOracle,
}

impl<'a> Desource<'a> {
    pub fn new(graph: &'a KGraph, oracle: &'a dyn TailOracle) -> Self {
        Desource { graph, oracle }
    }

    fn tail(&self, v: VertexId, dead: &[bool]) -> Result<Admissible<GeneralizedPath>> {
        Ok(match self.oracle.tail(self.graph, v, dead)? {
            Tail::Found { path, .. } => Admissible::Yes(path),
            Tail::Absent => Admissible::No,
            Tail::Pending => Admissible::Pending,
        })
    }

    /// `[x; m]` in canonical form. `x` is trusted to be a boundary path.
    pub fn canon_vertex(&self, x: &GeneralizedPath, m: &Degree) -> Result<DVertex> {
        let low = x.degree().meet(m);
        let witness = shift_path(self.graph, x, &low)?;
        Ok(DVertex { v: witness.range(), c: m.sub(&low), witness })
    }

    /// `[x; (m, n)]` in canonical form. `x` is trusted to be a boundary path.
    pub fn canon_morph(&self, x: &GeneralizedPath, m: &Degree, n: &Degree) -> Result<DMorph> {
        if !m.leq(n) {
            return Err(Error::OutOfRange { q: format!("{m}..{n}"), degree: "m <= n".into() });
        }
        let d = x.degree();
        let (lo, hi) = (d.meet(m), d.meet(n));
        let witness = shift_path(self.graph, x, &lo)?;
        let lambda = witness.segment(self.graph, &Degree::zero(m.rank()), &hi.sub(&lo))?;
        Ok(DMorph { lambda, a: m.sub(&lo), b: n.sub(m), witness })
    }

    fn check_boundary(&self, x: &GeneralizedPath, opts: &BoundaryOptions) -> Result<()> {
        match boundary_status(self.graph, x, opts)? {
            BoundaryVerdict::Refuted { n, .. } => Err(Error::NotBoundary(format!("refuted at {n}"))),
            _ => Ok(()),
        }
    }

    /// [`Self::canon_vertex`] after checking that `x` is not refuted as a
    /// boundary path.
    pub fn canon_vertex_checked(&self, x: &GeneralizedPath, m: &Degree, opts: &BoundaryOptions) -> Result<DVertex> {
        self.check_boundary(x, opts)?;
        self.canon_vertex(x, m)
    }

    pub fn canon_morph_checked(
        &self,
        x: &GeneralizedPath,
        m: &Degree,
        n: &Degree,
        opts: &BoundaryOptions,
    ) -> Result<DMorph> {
        self.check_boundary(x, opts)?;
        self.canon_morph(x, m, n)
    }

    pub fn identity(&self, v: &DVertex) -> DMorph {
        DMorph {
            lambda: self.graph.vertex_path(v.v),
            a: v.c.clone(),
            b: Degree::zero(self.graph.rank()),
            witness: v.witness.clone(),
        }
    }

    pub fn range_vertex(&self, m: &DMorph) -> DVertex {
        let (v, c) = m.range();
        DVertex { v, c, witness: m.witness.clone() }
    }

    pub fn source_vertex(&self, m: &DMorph) -> Result<DVertex> {
        let n = m.a.add(&m.b);
        self.canon_vertex(&m.witness, &n)
    }

    /// `A ∘ B` via `z = x(0, n ∧ d(x)) σ^{p ∧ d(y)} y` and `[z; (m, n + q − p)]`.
    pub fn compose_d(&self, first: &DMorph, second: &DMorph) -> Result<DMorph> {
        if first.source() != second.range() {
            return Err(Error::NotComposable(format!(
                "source {:?} of the first does not match range {:?} of the second",
                first.source(),
                second.range()
            )));
        }
        let g = self.graph;
        let n = first.a.add(&first.b);
        let head = first.witness.prefix(g, &first.witness.degree().meet(&n))?;
        let tail = shift_path(g, &second.witness, &second.witness.degree().meet(&second.a))?;
        let z = compose_paths(g, &head, &tail)?;
        self.canon_morph(&z, &first.a, &n.add(&second.b))
    }

    /// The factor of `A` between degrees `p ≤ q ≤ d(A)`.
    pub fn segment_d(&self, m: &DMorph, p: &Degree, q: &Degree) -> Result<DMorph> {
        if !p.leq(q) || !q.leq(&m.b) {
            return Err(Error::OutOfRange { q: format!("{p}..{q}"), degree: m.b.to_string() });
        }
        self.canon_morph(&m.witness, &m.a.add(p), &m.a.add(q))
    }

    /// `ι(λ) = [λx; (0, d(λ))]` for any `x ∈ s(λ)∂Λ`.
    pub fn embed_iota(&self, lambda: &Path) -> Result<DMorph> {
        let none = vec![false; self.graph.rank()];
        match self.tail(lambda.source(), &none)? {
            Admissible::Yes(z) => {
                let y = compose_paths(self.graph, lambda, &z)?;
                Ok(DMorph { lambda: lambda.clone(), a: Degree::zero(self.graph.rank()), b: lambda.degree().clone(), witness: y })
            }
            _ => Err(Error::NoWitnessInWindow(format!(
                "no boundary path from {}",
                self.graph.vertex_name(lambda.source())
            ))),
        }
    }

    pub fn embed_vertex(&self, v: VertexId) -> Result<DVertex> {
        let m = self.embed_iota(&self.graph.vertex_path(v))?;
        Ok(self.range_vertex(&m))
    }

    /// Whether `(v, c)` is a vertex of `Λ̃`: some `z ∈ v∂Λ` has `d(z)_i = 0`
    /// wherever `c_i > 0`.
    pub fn vertex_admissible(&self, v: VertexId, c: &Degree) -> Result<Admissible<DVertex>> {
        Ok(match self.tail(v, &support_mask(c))? {
            Admissible::Yes(z) => Admissible::Yes(DVertex { v, c: c.clone(), witness: z }),
            Admissible::No => Admissible::No,
            Admissible::Pending => Admissible::Pending,
        })
    }

    /// Whether `(λ, a, b)` is a morphism of `Λ̃`.
    ///
    /// Needs `d(λ) ≤ b`, `d(λ)_i = 0` wherever `a_i > 0`, and a boundary path
    /// `z` at `s(λ)` that stops in every coordinate where `a_i > 0` or
    /// `d(λ)_i < b_i`.
    pub fn morph_admissible(&self, lambda: &Path, a: &Degree, b: &Degree) -> Result<Admissible<DMorph>> {
        let d = lambda.degree();
        let k = self.graph.rank();
        if !d.leq(b) || (0..k).any(|i| a.get(i) > 0 && d.get(i) > 0) {
            return Ok(Admissible::No);
        }
        let dead: Vec<bool> = (0..k).map(|i| a.get(i) > 0 || d.get(i) < b.get(i)).collect();
        Ok(match self.tail(lambda.source(), &dead)? {
            Admissible::Yes(z) => {
                let y = compose_paths(self.graph, lambda, &z)?;
                Admissible::Yes(DMorph { lambda: lambda.clone(), a: a.clone(), b: b.clone(), witness: y })
            }
            Admissible::No => Admissible::No,
            Admissible::Pending => Admissible::Pending,
        })
    }

    /// All morphisms of degree `b` with range `(v, a)`, listed directly from
    /// the admissibility conditions. Pending candidates are returned apart.
    pub fn morphs_from(&self, v: VertexId, a: &Degree, b: &Degree) -> Result<(Vec<DMorph>, Vec<Path>)> {
        let k = self.graph.rank();
        let cap = Degree::new((0..k).map(|i| if a.get(i) > 0 { 0 } else { b.get(i) }).collect());
        let mut found = Vec::new();
        let mut pending = Vec::new();
        for lambda in self.graph.paths_up_to(v, &cap)? {
            match self.morph_admissible(&lambda, a, b)? {
                Admissible::Yes(m) => found.push(m),
                Admissible::No => {}
                Admissible::Pending => pending.push(lambda),
            }
        }
        found.sort();
        Ok((found, pending))
    }

    /// `ι(π(A))`.
    pub fn project(&self, m: &DMorph) -> Result<DMorph> {
        self.embed_iota(project_pi(m))
    }
}

/// A finite piece of `Λ̃`: every vertex with offset at most the window and
/// every edge between them, presented as an ordinary [`KGraph`].
///
/// Vertices `(v, c)` with `c` on the rim of the window in color `i` that
/// continue beyond it are marked incomplete in color `i`, as are the
/// vertices over rim vertices of a windowed base graph.
#[derive(Clone, Debug)]
pub struct DesourcedWindow {
    pub graph: KGraph,
    pub window: Degree,
    pub guard: Degree,
    pub vertices: Vec<DVertex>,
    pub edges: Vec<DMorph>,
    /// Candidate vertices the tail oracle could not decide.
    pub pending: Vec<VertexKey>,
    guarded: Vec<bool>,
    vertex_index: HashMap<VertexKey, VertexId>,
    edge_index: HashMap<(Path, Degree, Degree), EdgeId>,
}

fn vertex_label(g: &KGraph, v: &DVertex) -> String {
    if v.c.is_zero() {
        g.vertex_name(v.v).to_string()
    } else {
        format!("{}@{}", g.vertex_name(v.v), v.c)
    }
}

fn edge_label(g: &KGraph, m: &DMorph) -> String {
    if m.lambda.is_vertex() {
        let color = m.b.entries().iter().position(|&x| x == 1).expect("edge degree");
        format!("{}@{}+e{}", g.vertex_name(m.lambda.range()), m.a, color + 1)
    } else {
        let e = g.edge(m.lambda.edges()[0]);
        if m.a.is_zero() {
            e.name.clone()
        } else {
            format!("{}@{}", e.name, m.a)
        }
    }
}

/// Builds the window `{(v, c) : c ≤ window}` of `Λ̃`.
///
/// Edges of color `i` come in two kinds: `(g, a, e_i)` for an edge `g` of
/// color `i` with `a_i = 0`, and the head edges `(v, a, e_i)`. Squares are
/// read off by composing a bicolored pair and refactoring it.
pub fn materialize_window(ds: &Desource, window: &Degree, guard: &Degree) -> Result<DesourcedWindow> {
    let g = ds.graph;
    let k = g.rank();
    let mut vertices = Vec::new();
    let mut pending = Vec::new();
    let mut vertex_index = HashMap::new();
    let offsets = window.box_below();
    for v in g.vertices() {
        for c in &offsets {
            match ds.vertex_admissible(v, c)? {
                Admissible::Yes(dv) => {
                    vertex_index.insert(dv.key(), vertices.len() as VertexId);
                    vertices.push(dv);
                }
                Admissible::No => {}
                Admissible::Pending => pending.push((v, c.clone())),
            }
        }
    }

    let mut edges: Vec<DMorph> = Vec::new();
    for dv in &vertices {
        let (v, a) = (dv.v, &dv.c);
        for i in 0..k {
            let unit = Degree::unit(k, i);
            let mut candidates = vec![g.vertex_path(v)];
            if a.get(i) == 0 {
                candidates.extend(g.edges_into(v, i).iter().map(|&e| g.edge_path(e)));
            }
            for lambda in candidates {
                if let Admissible::Yes(m) = ds.morph_admissible(&lambda, a, &unit)? {
                    if vertex_index.contains_key(&m.source()) {
                        edges.push(m);
                    }
                }
            }
        }
    }
    edges.sort();

    let mut builder = KGraphBuilder::new(k);
    for dv in &vertices {
        builder.vertex(&vertex_label(g, dv));
    }
    let mut edge_index = HashMap::new();
    for (id, m) in edges.iter().enumerate() {
        let color = m.b.entries().iter().position(|&x| x == 1).expect("edge degree");
        let r = vertex_index[&m.range()];
        let s = vertex_index[&m.source()];
        builder.edge(&edge_label(g, m), color, r, s)?;
        edge_index.insert((m.lambda.clone(), m.a.clone(), m.b.clone()), id as EdgeId);
    }
    let lookup = |m: &DMorph| edge_index.get(&(m.lambda.clone(), m.a.clone(), m.b.clone())).copied();

    // Index edges by range vertex to find composable pairs.
    let mut by_range: BTreeMap<VertexKey, Vec<usize>> = BTreeMap::new();
    for (id, m) in edges.iter().enumerate() {
        by_range.entry(m.range()).or_default().push(id);
    }
    for (f_id, f) in edges.iter().enumerate() {
        let Some(next) = by_range.get(&f.source()) else { continue };
        for &g_id in next {
            let h = &edges[g_id];
            if h.b == f.b {
                continue;
            }
            let composite = match ds.compose_d(f, h) {
                Ok(c) => c,
                Err(Error::WindowExceeded(_)) => continue,
                Err(e) => return Err(e),
            };
            let first = ds.segment_d(&composite, &Degree::zero(k), &h.b)?;
            let second = ds.segment_d(&composite, &h.b, &composite.b)?;
            if let (Some(g2), Some(f2)) = (lookup(&first), lookup(&second)) {
                builder.square(f_id as EdgeId, g_id as EdgeId, g2, f2);
            }
        }
    }

    for dv in &vertices {
        let id = vertex_index[&dv.key()];
        for i in 0..k {
            let beyond = dv.c.get(i) == window.get(i)
                && matches!(ds.vertex_admissible(dv.v, &dv.c.add(&Degree::unit(k, i)))?, Admissible::Yes(_) | Admissible::Pending);
            if beyond || g.is_incomplete(dv.v, i) {
                builder.mark_incomplete(id, i);
            }
        }
    }
    let graph = builder.build()?;
    let guarded = vertices
        .iter()
        .map(|dv| dv.c.add(guard).leq(window) && ds.oracle.guarded(g, dv.v, guard))
        .collect();
    Ok(DesourcedWindow {
        graph,
        window: window.clone(),
        guard: guard.clone(),
        vertices,
        edges,
        pending,
        guarded,
        vertex_index,
        edge_index,
    })
}

impl DesourcedWindow {
    pub fn vertex_of(&self, key: &VertexKey) -> Option<VertexId> {
        self.vertex_index.get(key).copied()
    }

    /// The copy `(v, 0)` of a vertex of `Λ`.
    pub fn embedded(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_of(&(v, Degree::zero(self.window.rank())))
    }

    pub fn edge_of(&self, m: &DMorph) -> Option<EdgeId> {
        self.edge_index.get(&(m.lambda.clone(), m.a.clone(), m.b.clone())).copied()
    }

    pub fn is_guarded(&self, v: VertexId) -> bool {
        self.guarded[v as usize]
    }

    pub fn is_embedded_vertex(&self, v: VertexId) -> bool {
        self.vertices[v as usize].is_embedded()
    }

    /// The morphism of `Λ̃` that a path of the window presents.
    pub fn morph_of_path(&self, ds: &Desource, p: &Path) -> Result<DMorph> {
        let mut acc = ds.identity(&self.vertices[p.range() as usize]);
        for &e in p.edges() {
            acc = ds.compose_d(&acc, &self.edges[e as usize])?;
        }
        Ok(acc)
    }

    /// The window path presenting a morphism, factored in normal order.
    pub fn path_of_morph(&self, ds: &Desource, m: &DMorph) -> Result<Path> {
        let k = self.window.rank();
        let range = self
            .vertex_of(&m.range())
            .ok_or_else(|| Error::WindowExceeded(format!("range {:?} outside the window", m.range())))?;
        let mut at = Degree::zero(k);
        let mut word = Vec::new();
        for color in m.b.color_word() {
            let next = at.add(&Degree::unit(k, color));
            let step = ds.segment_d(m, &at, &next)?;
            let e = self
                .edge_of(&step)
                .ok_or_else(|| Error::WindowExceeded(format!("edge {:?} outside the window", step.key())))?;
            word.push(e);
            at = next;
        }
        self.graph.path_from_word(range, &word)
    }

    pub fn label_morph(&self, base: &KGraph, m: &DMorph) -> String {
        format!("({}, {}, {})", base.format_path(&m.lambda), m.a, m.b)
    }
}

/// `π` of a window path from an embedded vertex, with `p_x`, the largest
/// degree whose prefix stays inside `ι(Λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowProjection {
    pub prefix: Path,
    pub p_x: Degree,
}

/// The window form of `π` on infinite paths: a window path `x` of `Λ̃` from
/// `ι(v)` determines the boundary prefix `ω(0, d(x) ∧ d(ω))` of the unique
/// `ω` with `π(x) = ι(ω)`.
pub fn project_pi_infinite(ds: &Desource, dw: &DesourcedWindow, x: &Path) -> Result<WindowProjection> {
    if !dw.is_embedded_vertex(x.range()) {
        return Err(Error::RangeOutsideEmbedding);
    }
    let m = dw.morph_of_path(ds, x)?;
    let k = dw.window.rank();
    let mut p_x = Degree::zero(k);
    for p in x.degree().box_below() {
        if ds.segment_d(&m, &Degree::zero(k), &p)?.is_embedded() {
            p_x = p_x.join(&p);
        }
    }
    Ok(WindowProjection { prefix: m.lambda, p_x })
}

/// A `Λ^{≤∞}` path representing the same morphism as a boundary path.
#[derive(Clone, Debug)]
pub struct LeqInftyRepresentative {
    pub y: GeneralizedPath,
    pub q: Degree,
    /// Colors in which `x` has stopped at `x(q)` although edges continue.
    pub stalled: Vec<usize>,
    /// A path at `x(q)` with no common extension with any stalled edge.
    pub mu: Path,
}

/// Given `x ∈ ∂Λ ∖ Λ^{≤∞}` and `m ≤ n`, builds `y = x(0, q) μ z ∈ Λ^{≤∞}`
/// with `[x; (m, n)] = [y; (m, n)]`.
///
/// `q ≥ n ∧ d(x)` is a base point where `x` stops in the colors of a
/// nonempty set `J` while `x(q)` still receives edges of those colors; `μ` at
/// `x(q)` has no common extension with any such edge, and `z` is a
/// `Λ^{≤∞}` tail at `s(μ)`. Paths are searched up to `cap`.
pub fn leqinfty_representative(
    ds: &Desource,
    x: &GeneralizedPath,
    m: &Degree,
    n: &Degree,
    cap: &Degree,
) -> Result<LeqInftyRepresentative> {
    use crate::alignment::{has_common_extension, leq_infty_membership};
    let g = ds.graph;
    let k = g.rank();
    let verdict = leq_infty_membership(g, x)?;
    if verdict.member && verdict.exact {
        return Ok(LeqInftyRepresentative { y: x.clone(), q: x.degree().meet(n), stalled: Vec::new(), mu: g.vertex_path(x.range()) });
    }
    let d = x.degree();
    let low = d.meet(n);
    let known = x.known_degree().unwrap_or_else(|| low.join(cap));
    let target = ds.canon_morph(x, m, n)?;
    for extra in cap.box_below() {
        let q = low.add(&extra);
        if !d.dominates(&q) || !q.leq(&known) {
            continue;
        }
        let v = x.vertex_at(g, &q)?;
        let stalled: Vec<usize> = (0..k)
            .filter(|&i| d.get(i) == crate::degree::Ext::Fin(q.get(i)) && !g.edges_into(v, i).is_empty())
            .collect();
        if stalled.is_empty() {
            continue;
        }
        let blockers: Vec<Path> = stalled.iter().flat_map(|&i| g.edges_into(v, i).iter().map(|&e| g.edge_path(e))).collect();
        for mu in g.paths_up_to(v, cap)? {
            let mut clear = true;
            for nu in &blockers {
                match has_common_extension(g, &mu, nu) {
                    Ok(false) => {}
                    _ => {
                        clear = false;
                        break;
                    }
                }
            }
            if !clear {
                continue;
            }
            let head = g.compose(&x.prefix(g, &q)?, &mu)?;
            for tail in leq_infty_tails(ds, mu.source())? {
                let y = compose_paths(g, &head, &tail)?;
                let check = leq_infty_membership(g, &y)?;
                if check.member && check.exact && ds.canon_morph(&y, m, n)? == target {
                    return Ok(LeqInftyRepresentative { y, q, stalled, mu });
                }
            }
        }
    }
    Err(Error::NoWitnessInWindow(format!("no Λ^(≤∞) representative up to {cap}")))
}

/// Boundary tails at `v` for every dead set, in order of the dead set.
fn leq_infty_tails(ds: &Desource, v: VertexId) -> Result<Vec<GeneralizedPath>> {
    let k = ds.graph.rank();
    let mut out = Vec::new();
    for mask in 0u32..(1 << k) {
        let dead: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
        if let Tail::Found { path, .. } = ds.oracle.tail(ds.graph, v, &dead)? {
            if !out.contains(&path) {
                out.push(path);
            }
        }
    }
    Ok(out)
}

/// Output of [`g_lambda_fe`].
#[derive(Clone, Debug)]
pub struct GLambda {
    /// `λ' = A(d(π(A)), d(A))`.
    pub tail: DMorph,
    /// Embedded edges at `s(π(A))` with no common extension with `λ'`.
    pub set: Vec<DMorph>,
    pub verdict: crate::alignment::ExhaustiveVerdict,
}

/// Builds `G_λ` and checks that `G_λ ∪ {λ'}` is exhaustive in the window.
pub fn g_lambda_fe(ds: &Desource, dw: &DesourcedWindow, a: &DMorph, bound: &Degree) -> Result<GLambda> {
    use crate::alignment::{has_common_extension, is_exhaustive};
    if !a.a.is_zero() {
        return Err(Error::RangeOutsideEmbedding);
    }
    let g = ds.graph;
    let k = g.rank();
    let tail = ds.segment_d(a, a.lambda.degree(), &a.b)?;
    let tail_path = dw.path_of_morph(ds, &tail)?;
    let s = a.lambda.source();
    let mut set = Vec::new();
    for i in 0..k {
        for &e in g.edges_into(s, i) {
            let alpha = ds.embed_iota(&g.edge_path(e))?;
            let alpha_path = dw.path_of_morph(ds, &alpha)?;
            if !has_common_extension(&dw.graph, &alpha_path, &tail_path)? {
                set.push(alpha);
            }
        }
    }
    set.sort();
    let mut family: Vec<Path> = set.iter().map(|m| dw.path_of_morph(ds, m)).collect::<Result<_>>()?;
    family.push(tail_path.clone());
    let verdict = is_exhaustive(&dw.graph, tail_path.range(), &family, bound)?;
    Ok(GLambda { tail, set, verdict })
}
