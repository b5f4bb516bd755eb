//! Built-in graphs, lazy generators and random graph families.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::degree::{Degree, Ext, ExtDegree};
use crate::error::{Error, Result};
use crate::genpath::GeneralizedPath;
use crate::graph::{KGraph, KGraphBuilder};
use crate::path::{Path, VertexId};
use crate::tails::{SearchTails, Tail, TailOracle};

/// A single vertex and no edges.
pub fn triv() -> KGraph {
    let mut b = KGraphBuilder::new(1);
    b.vertex("v");
    b.build().expect("valid")
}

/// Two vertices and one edge `e` with `r(e) = v`, `s(e) = w`.
pub fn src1() -> KGraph {
    let mut b = KGraphBuilder::new(1);
    let v = b.vertex("v");
    let w = b.vertex("w");
    b.edge("e", 0, v, w).expect("valid");
    b.build().expect("valid")
}

/// A 2-graph with one edge of each color into `v` and nothing composable.
pub fn nlc() -> KGraph {
    let mut b = KGraphBuilder::new(2);
    let u = b.vertex("u");
    let v = b.vertex("v");
    let w = b.vertex("w");
    b.edge("lambda", 0, v, w).expect("valid");
    b.edge("mu", 1, v, u).expect("valid");
    b.build().expect("valid")
}

/// A centre `v` receiving one edge from each of the sources `a` and `b`.
pub fn star() -> KGraph {
    let mut b = KGraphBuilder::new(1);
    let v = b.vertex("v");
    let a = b.vertex("a");
    let s = b.vertex("b");
    b.edge("e_a", 0, v, a).expect("valid");
    b.edge("e_b", 0, v, s).expect("valid");
    b.build().expect("valid")
}

/// One vertex with loops `f_1, …, f_n`.
pub fn loop_graph(n: usize) -> KGraph {
    let mut b = KGraphBuilder::new(1);
    let v = b.vertex("v");
    for i in 1..=n {
        b.edge(&format!("f_{i}"), 0, v, v).expect("valid");
    }
    b.build().expect("valid")
}

/// `v_0 ← v_1 ← … ← v_n` with edges `e_i : v_{i+1} → v_i`.
pub fn chain(n: usize) -> KGraph {
    let mut b = KGraphBuilder::new(1);
    let vs: Vec<VertexId> = (0..=n).map(|i| b.vertex(&format!("v_{i}"))).collect();
    for i in 0..n {
        b.edge(&format!("e_{i}"), 0, vs[i], vs[i + 1]).expect("valid");
    }
    b.build().expect("valid")
}

pub fn omega_vertex_name(p: &Degree) -> String {
    p.to_string()
}

pub fn omega_edge_name(p: &Degree, q: &Degree) -> String {
    format!("{p}-{q}")
}

/// `Ω_{k,m}`, with infinite coordinates cut at `window`.
///
/// Vertices are the `p ≤ m` and the edge `(p, p + e_i)` has range `p`.
/// A vertex sitting on the cut of an infinite coordinate is marked as a rim
/// vertex in that color.
pub fn omega(m: &ExtDegree, window: &Degree) -> Result<KGraph> {
    let k = m.rank();
    let top = Degree::new((0..k).map(|i| m.get(i).min_with(window.get(i))).collect());
    let mut b = KGraphBuilder::new(k);
    let points = top.box_below();
    for p in &points {
        b.vertex(&omega_vertex_name(p));
    }
    let id = |b: &KGraphBuilder, p: &Degree| b.vertex_id(&omega_vertex_name(p)).expect("present");
    for p in &points {
        for i in 0..k {
            let q = p.add(&Degree::unit(k, i));
            if q.leq(&top) {
                let (r, s) = (id(&b, p), id(&b, &q));
                b.edge(&omega_edge_name(p, &q), i, r, s)?;
            } else if !m.get(i).is_finite() {
                let v = id(&b, p);
                b.mark_incomplete(v, i);
            }
        }
    }
    for p in &points {
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let (ei, ej) = (Degree::unit(k, i), Degree::unit(k, j));
                let corner = p.add(&ei).add(&ej);
                if !corner.leq(&top) {
                    continue;
                }
                let f = omega_edge_name(p, &p.add(&ei));
                let g = omega_edge_name(&p.add(&ei), &corner);
                let g2 = omega_edge_name(p, &p.add(&ej));
                let f2 = omega_edge_name(&p.add(&ej), &corner);
                b.square_by_name(&f, &g, &g2, &f2)?;
            }
        }
    }
    b.build()
}

/// `Ω_{k,m}` for finite `m`.
pub fn omega_finite(m: &Degree) -> KGraph {
    omega(&ExtDegree::from(m), m).expect("valid")
}

/// The non-locally-convex 2-graph with columns `0..=n`.
///
/// Column `j` has vertices `v_j`, `u_j`, `w_j`; color-1 edges
/// `x_j : v_{j+1} → v_j`, `t_j : u_{j+1} → u_j`, `omega_j : w_j → v_j` and the
/// color-2 edge `f_j : u_j → v_j`, with squares `x_j f_{j+1} = f_j t_j`.
/// With `lazy` set the graph continues to the right, so `v_n` and `u_n`
/// are rim vertices in color 1.
pub fn paper_ex_builder(n: usize, lazy: bool) -> KGraphBuilder {
    let mut b = KGraphBuilder::new(2);
    for j in 0..=n {
        b.vertex(&format!("v_{j}"));
        b.vertex(&format!("u_{j}"));
        b.vertex(&format!("w_{j}"));
    }
    let id = |b: &KGraphBuilder, s: String| b.vertex_id(&s).expect("present");
    for j in 0..=n {
        let (v, u, w) = (id(&b, format!("v_{j}")), id(&b, format!("u_{j}")), id(&b, format!("w_{j}")));
        if j < n {
            let v1 = id(&b, format!("v_{}", j + 1));
            b.edge(&format!("x_{j}"), 0, v, v1).expect("valid");
        }
        b.edge(&format!("omega_{j}"), 0, v, w).expect("valid");
        b.edge(&format!("f_{j}"), 1, v, u).expect("valid");
        if j < n {
            let u1 = id(&b, format!("u_{}", j + 1));
            b.edge(&format!("t_{j}"), 0, u, u1).expect("valid");
        }
    }
    for j in 0..n {
        b.square_by_name(&format!("x_{j}"), &format!("f_{}", j + 1), &format!("f_{j}"), &format!("t_{j}"))
            .expect("valid");
    }
    if lazy {
        let (v, u) = (id(&b, format!("v_{n}")), id(&b, format!("u_{n}")));
        b.mark_incomplete(v, 0);
        b.mark_incomplete(u, 0);
    }
    b
}

/// The window of the infinite example graph with columns `0..=n`.
pub fn paper_ex(n: usize) -> KGraph {
    paper_ex_builder(n, true).build().expect("valid")
}

/// The finite graph obtained by cutting the example at column `n`.
pub fn paper_ex_truncated(n: usize) -> KGraph {
    paper_ex_builder(n, false).build().expect("valid")
}

/// The path `x = x_0 x_1 …` of the example graph, known up to the last column.
pub fn paper_ex_x(g: &KGraph) -> Result<GeneralizedPath> {
    let top = last_column(g);
    let p = word(g, "v_0", &PaperExTails::xs(0, top))?;
    GeneralizedPath::windowed(p, ExtDegree::new(vec![Ext::Inf, Ext::Fin(0)]))
}

/// The finite path `x_0 … x_{n-1} omega_n`.
pub fn paper_ex_omega(g: &KGraph, n: usize) -> Result<Path> {
    let mut names = PaperExTails::xs(0, n);
    names.push(format!("omega_{n}"));
    word(g, "v_0", &names)
}

fn split_index(name: &str) -> Option<(&str, usize)> {
    let (head, tail) = name.rsplit_once('_')?;
    Some((head, tail.parse().ok()?))
}

fn last_column(g: &KGraph) -> usize {
    let mut n = 0;
    while g.vertex_id(&format!("v_{}", n + 1)).is_some() {
        n += 1;
    }
    n
}

fn word(g: &KGraph, range: &str, names: &[String]) -> Result<Path> {
    let ids = names.iter().map(|s| g.edge_by_name(s)).collect::<Result<Vec<_>>>()?;
    g.path_from_word(g.vertex_by_name(range)?, &ids)
}

/// Boundary tails of the example graph, read off its structure.
///
/// From `v_n` the boundary paths are `x = x_n x_{n+1} …` of degree `(∞, 0)`,
/// `y = f_n t_n t_{n+1} …` of degree `(∞, 1)` and `x_n … x_{m-1} omega_m`;
/// from `u_n` only `t_n t_{n+1} …`; from `w_n` only `w_n`.
#[derive(Clone, Debug, Default)]
pub struct PaperExTails;

impl PaperExTails {
    fn xs(from: usize, to: usize) -> Vec<String> {
        (from..to).map(|j| format!("x_{j}")).collect()
    }
}

impl TailOracle for PaperExTails {
    fn tail(&self, g: &KGraph, v: VertexId, dead: &[bool]) -> Result<Tail> {
        let name = g.vertex_name(v).to_string();
        let (kind, n) = split_index(&name).ok_or_else(|| Error::UnknownVertex(name.clone()))?;
        let top = last_column(g);
        let infinite = ExtDegree::new(vec![Ext::Inf, Ext::Fin(0)]);
        Ok(match kind {
            "w" => Tail::Found { path: GeneralizedPath::Finite(g.vertex_path(v)), exact: true },
            "u" if dead[0] => Tail::Absent,
            "u" => {
                let ts: Vec<String> = (n..top).map(|j| format!("t_{j}")).collect();
                Tail::Found { path: GeneralizedPath::windowed(word(g, &name, &ts)?, infinite)?, exact: true }
            }
            "v" if dead[0] => Tail::Absent,
            "v" if dead[1] => {
                let p = word(g, &name, &[format!("omega_{n}")])?;
                Tail::Found { path: GeneralizedPath::Finite(p), exact: true }
            }
            "v" => {
                let p = word(g, &name, &Self::xs(n, top))?;
                Tail::Found { path: GeneralizedPath::windowed(p, infinite)?, exact: true }
            }
            _ => return Err(Error::UnknownVertex(name)),
        })
    }

    fn boundary_prefixes(&self, g: &KGraph, v: VertexId, w: &Degree) -> Result<Option<Vec<Path>>> {
        let name = g.vertex_name(v).to_string();
        let (kind, n) = split_index(&name).ok_or_else(|| Error::UnknownVertex(name.clone()))?;
        let (w0, w1) = (w.get(0) as usize, w.get(1));
        if n + w0 > last_column(g) {
            return Ok(None);
        }
        let mut out = Vec::new();
        match kind {
            "w" => out.push(g.vertex_path(v)),
            "u" => {
                let ts: Vec<String> = (n..n + w0).map(|j| format!("t_{j}")).collect();
                out.push(word(g, &name, &ts)?);
            }
            "v" => {
                let xs = Self::xs(n, n + w0);
                out.push(word(g, &name, &xs)?);
                if w1 > 0 {
                    let mut ys = xs.clone();
                    ys.push(format!("f_{}", n + w0));
                    out.push(word(g, &name, &ys)?);
                }
                for m in n..n + w0 {
                    let mut ws = Self::xs(n, m);
                    ws.push(format!("omega_{m}"));
                    out.push(word(g, &name, &ws)?);
                }
            }
            _ => return Err(Error::UnknownVertex(name)),
        }
        out.sort();
        out.dedup();
        Ok(Some(out))
    }
}

/// Boundary tails of `Ω_{k,m}`: from `p` the only boundary path is `(p, m)`.
#[derive(Clone, Debug)]
pub struct OmegaTails {
    pub m: ExtDegree,
}

impl OmegaTails {
    fn point(g: &KGraph, v: VertexId) -> Result<Degree> {
        g.vertex_name(v).parse()
    }
}

impl TailOracle for OmegaTails {
    fn tail(&self, g: &KGraph, v: VertexId, dead: &[bool]) -> Result<Tail> {
        let p = Self::point(g, v)?;
        let k = g.rank();
        for (i, &is_dead) in dead.iter().enumerate() {
            if is_dead && self.m.get(i) != Ext::Fin(p.get(i)) {
                return Ok(Tail::Absent);
            }
        }
        // Walk to the far corner of the materialized box.
        let mut at = p.clone();
        let mut edges = Vec::new();
        for i in 0..k {
            loop {
                let next = at.add(&Degree::unit(k, i));
                match g.edge_id(&omega_edge_name(&at, &next)) {
                    Some(e) => {
                        edges.push(e);
                        at = next;
                    }
                    None => break,
                }
            }
        }
        let prefix = g.path_from_word(v, &edges)?;
        let degree = ExtDegree::new(
            (0..k)
                .map(|i| match self.m.get(i) {
                    Ext::Fin(mi) => Ext::Fin(mi - p.get(i)),
                    Ext::Inf => Ext::Inf,
                })
                .collect(),
        );
        Ok(Tail::Found { path: GeneralizedPath::windowed(prefix, degree)?, exact: true })
    }

    fn boundary_prefixes(&self, g: &KGraph, v: VertexId, w: &Degree) -> Result<Option<Vec<Path>>> {
        let Tail::Found { path, .. } = self.tail(g, v, &vec![false; g.rank()])? else {
            return Ok(Some(Vec::new()));
        };
        let q = path.degree().meet(w);
        match path.prefix(g, &q) {
            Ok(p) => Ok(Some(vec![p])),
            Err(Error::WindowExceeded(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Lazy fixtures that can be named in `.kg` files and on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Omega(ExtDegree),
    PaperEx,
    Loop(usize),
    Chain(usize),
}

impl Generator {
    pub fn parse(name: &str, params: &[&str]) -> Result<Self> {
        let bad = |m: &str| Error::Parse { line: 0, message: m.to_string() };
        match name {
            "omega" => {
                let m = params.last().ok_or_else(|| bad("omega needs a degree"))?;
                let m: ExtDegree = m.parse()?;
                if params.len() == 2 {
                    let k: usize = params[0].parse().map_err(|_| bad("bad rank"))?;
                    if k != m.rank() {
                        return Err(bad("omega rank does not match its degree"));
                    }
                }
                Ok(Generator::Omega(m))
            }
            "paper-ex" => Ok(Generator::PaperEx),
            "loop" => Ok(Generator::Loop(params.first().unwrap_or(&"1").parse().map_err(|_| bad("bad loop count"))?)),
            "chain" => Ok(Generator::Chain(params.first().unwrap_or(&"1").parse().map_err(|_| bad("bad chain length"))?)),
            other => Err(bad(&format!("unknown generator `{other}`"))),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Generator::Omega(m) => m.rank(),
            Generator::PaperEx => 2,
            Generator::Loop(_) | Generator::Chain(_) => 1,
        }
    }

    pub fn spec(&self) -> String {
        match self {
            Generator::Omega(m) => format!("omega {} {}", m.rank(), m.to_string().trim_matches(|c| c == '(' || c == ')')),
            Generator::PaperEx => "paper-ex".into(),
            Generator::Loop(n) => format!("loop {n}"),
            Generator::Chain(n) => format!("chain {n}"),
        }
    }

    /// Materializes every degree up to `window`. Monotone in the window.
    pub fn materialize(&self, window: &Degree) -> Result<KGraph> {
        match self {
            Generator::Omega(m) => omega(m, window),
            Generator::PaperEx => Ok(paper_ex(window.get(0) as usize)),
            Generator::Loop(n) => Ok(loop_graph(*n)),
            Generator::Chain(n) => Ok(chain(*n)),
        }
    }

    pub fn oracle(&self) -> Box<dyn TailOracle> {
        match self {
            Generator::Omega(m) if !m.is_finite() => Box::new(OmegaTails { m: m.clone() }),
            Generator::PaperEx => Box::new(PaperExTails),
            _ => Box::new(SearchTails),
        }
    }
}

/// Edges `(range, source)` of a random acyclic 1-graph on `0..n`, with
/// `range < source` and occasional parallel edges.
pub fn random_dag_edges<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..n {
        for s in r + 1..n {
            if rng.gen_bool(density) {
                out.push((r, s));
                if rng.gen_bool(0.15) {
                    out.push((r, s));
                }
            }
        }
    }
    out
}

/// A random acyclic 1-graph.
pub fn random_dag_1graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> KGraph {
    one_graph_from_edges(n, &random_dag_edges(rng, n, density))
}

/// A random 1-graph on at most `n` vertices, loops and cycles allowed.
pub fn random_1graph<R: Rng>(rng: &mut R, n: usize) -> KGraph {
    let n = rng.gen_range(1..=n);
    let m = rng.gen_range(0..=2 * n);
    let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    one_graph_from_edges(n, &edges)
}

fn one_graph_from_edges(n: usize, edges: &[(usize, usize)]) -> KGraph {
    let mut b = KGraphBuilder::new(1);
    let vs: Vec<VertexId> = (0..n).map(|i| b.vertex(&format!("v{i}"))).collect();
    for (i, &(r, s)) in edges.iter().enumerate() {
        b.edge(&format!("e{i}"), 0, vs[r], vs[s]).expect("valid");
    }
    b.build().expect("valid")
}

/// Parameters of the random 2-graph family.
#[derive(Clone, Debug)]
pub struct ProductOptions {
    pub n1: usize,
    pub n2: usize,
    pub density: f64,
    /// Choose a random bijection in every commuting cell instead of the
    /// identity of the cartesian product.
    pub twist: bool,
    /// Delete every vertex that reaches a randomly chosen seed vertex.
    pub restrict: bool,
}

/// A random acyclic 2-graph built from two random acyclic 1-graphs.
///
/// Color-1 edges are `(e, b)` and color-2 edges `(a, f)`. The bicolored paths
/// between two vertices correspond to pairs `(e, f)`, and any bijection
/// between the two orders of each such pair set is a valid square list
/// because a 2-graph has no associativity condition.
///
/// Restriction removes the set `H` of all sources of paths into a seed.
/// Every path whose source survives runs entirely outside `H`, so the
/// remaining vertices carry a 2-graph; removing `H` typically breaks local
/// convexity.
pub fn random_product_2graph<R: Rng>(rng: &mut R, opts: &ProductOptions) -> KGraph {
    let e1 = random_dag_edges(rng, opts.n1, opts.density);
    let e2 = random_dag_edges(rng, opts.n2, opts.density);
    let mut cells: BTreeMap<(usize, usize, usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (ei, &(r1, s1)) in e1.iter().enumerate() {
        for (fi, &(r2, s2)) in e2.iter().enumerate() {
            cells.entry((r1, r2, s1, s2)).or_default().push((ei, fi));
        }
    }
    let mut removed = vec![vec![false; opts.n2]; opts.n1];
    if opts.restrict {
        let seed = (rng.gen_range(0..opts.n1), rng.gen_range(0..opts.n2));
        // Vertices reaching the seed: go from ranges to sources.
        let mut stack = vec![seed];
        removed[seed.0][seed.1] = true;
        while let Some((a, b)) = stack.pop() {
            let nexts = e1
                .iter()
                .filter(|(r, _)| *r == a)
                .map(|&(_, s)| (s, b))
                .chain(e2.iter().filter(|(r, _)| *r == b).map(|&(_, s)| (a, s)))
                .collect::<Vec<_>>();
            for (x, y) in nexts {
                if !removed[x][y] {
                    removed[x][y] = true;
                    stack.push((x, y));
                }
            }
        }
    }
    let keep = |a: usize, b: usize| !removed[a][b];
    let mut builder = KGraphBuilder::new(2);
    let mut vid = vec![vec![None; opts.n2]; opts.n1];
    for a in 0..opts.n1 {
        for b in 0..opts.n2 {
            if keep(a, b) {
                vid[a][b] = Some(builder.vertex(&format!("p{a}.{b}")));
            }
        }
    }
    let h = |e: usize, b: usize| format!("a{e}.{b}");
    let d = |a: usize, f: usize| format!("b{a}.{f}");
    for (ei, &(r, s)) in e1.iter().enumerate() {
        for b in 0..opts.n2 {
            if let (Some(rv), Some(sv)) = (vid[r][b], vid[s][b]) {
                builder.edge(&h(ei, b), 0, rv, sv).expect("valid");
            }
        }
    }
    for (fi, &(r, s)) in e2.iter().enumerate() {
        for a in 0..opts.n1 {
            if let (Some(rv), Some(sv)) = (vid[a][r], vid[a][s]) {
                builder.edge(&d(a, fi), 1, rv, sv).expect("valid");
            }
        }
    }
    for ((r1, r2, s1, s2), pairs) in &cells {
        if !(keep(*r1, *r2) && keep(*s1, *s2)) {
            continue;
        }
        let mut image = pairs.clone();
        if opts.twist {
            image.shuffle(rng);
        }
        for (&(ei, fi), &(ej, fj)) in pairs.iter().zip(&image) {
            // f g = g' f' with f = (e, r2), g = (s1, f), g' = (r1, f'), f' = (e', s2).
            builder
                .square_by_name(&h(ei, *r2), &d(*s1, fi), &d(*r1, fj), &h(ej, *s2))
                .expect("valid");
        }
    }
    builder.build().expect("product squares are complete")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::check_shape_properties;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn omega_counts() {
        let g = omega_finite(&Degree::new(vec![2, 2]));
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.all_paths().unwrap().len(), 36);
    }

    #[test]
    fn lazy_omega_marks_rim() {
        let m: ExtDegree = "inf,1".parse().unwrap();
        let g = omega(&m, &Degree::new(vec![3, 3])).unwrap();
        assert_eq!(g.vertex_count(), 8);
        let rim = g.vertex_by_name("(3,0)").unwrap();
        assert!(g.is_incomplete(rim, 0));
        assert!(!g.is_incomplete(rim, 1));
    }

    #[test]
    fn paper_ex_shape() {
        let g = paper_ex_truncated(3);
        let report = check_shape_properties(&g);
        assert!(!report.locally_convex);
        assert!(report.finitely_aligned);
        let (v, a, b) = report.convexity_witness.unwrap();
        assert_eq!(g.vertex_name(v), "v_0");
        assert_eq!(g.edge(a).name, "omega_0");
        assert_eq!(g.edge(b).name, "f_0");
    }

    #[test]
    fn paper_ex_tails() {
        let g = paper_ex(4);
        let v0 = g.vertex_by_name("v_0").unwrap();
        let t = PaperExTails.tail(&g, v0, &[false, true]).unwrap();
        assert_eq!(g.format_path(t.path().unwrap().as_finite().unwrap()), "omega_0");
        assert_eq!(PaperExTails.tail(&g, v0, &[true, false]).unwrap(), Tail::Absent);
        let pre = PaperExTails.boundary_prefixes(&g, v0, &Degree::new(vec![3, 1])).unwrap().unwrap();
        let mut names: Vec<String> = pre.iter().map(|p| g.format_path(p)).collect();
        names.sort();
        assert_eq!(names, ["omega_0", "x_0 omega_1", "x_0 x_1 omega_2", "x_0 x_1 x_2", "x_0 x_1 x_2 f_3"]);
    }

    #[test]
    fn random_products_build() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let opts = ProductOptions { n1: 4, n2: 3, density: 0.5, twist: true, restrict: true };
            let g = random_product_2graph(&mut rng, &opts);
            assert!(g.is_acyclic());
            assert!(check_shape_properties(&g).finitely_aligned);
        }
    }
}
