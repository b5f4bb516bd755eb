//! Minimal common extensions, exhaustive sets, and the tests for `Λ^{≤∞}` and `∂Λ`.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::degree::{Degree, Ext};
use crate::error::{Error, Result};
use crate::genpath::{shift_path, GeneralizedPath};
use crate::graph::KGraph;
use crate::path::{EdgeId, Path, VertexId};

/// `Λ^min(λ, μ)` together with the extensions `λα = μβ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MceResult {
    pub pairs: Vec<(Path, Path)>,
    pub extensions: Vec<Path>,
}

pub fn lambda_min(g: &KGraph, lambda: &Path, mu: &Path) -> Result<MceResult> {
    if lambda.range() != mu.range() {
        return Err(Error::RangeMismatch);
    }
    let join = lambda.degree().join(mu.degree());
    let mut pairs = Vec::new();
    let mut extensions = Vec::new();
    for alpha in g.enumerate_paths(lambda.source(), &join.sub(lambda.degree()))? {
        let gamma = g.compose(lambda, &alpha)?;
        if g.has_prefix(&gamma, mu)? {
            let beta = g.segment(&gamma, mu.degree(), &join)?;
            pairs.push((alpha, beta));
            extensions.push(gamma);
        }
    }
    Ok(MceResult { pairs, extensions })
}

/// `MCE(λ, μ)`.
pub fn mce(g: &KGraph, lambda: &Path, mu: &Path) -> Result<Vec<Path>> {
    Ok(lambda_min(g, lambda, mu)?.extensions)
}

/// `MCE(λ, μ) ≠ ∅`, with early exits for comparable degrees.
pub fn has_common_extension(g: &KGraph, lambda: &Path, mu: &Path) -> Result<bool> {
    if lambda.range() != mu.range() {
        return Ok(false);
    }
    if mu.degree().leq(lambda.degree()) {
        return g.has_prefix(lambda, mu);
    }
    if lambda.degree().leq(mu.degree()) {
        return g.has_prefix(mu, lambda);
    }
    let join = lambda.degree().join(mu.degree());
    for alpha in g.enumerate_paths(lambda.source(), &join.sub(lambda.degree()))? {
        if g.has_prefix(&g.compose(lambda, &alpha)?, mu)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn sorted_unique(mut v: Vec<Path>) -> Vec<Path> {
    v.sort_by(|a, b| a.degree().total().cmp(&b.degree().total()).then_with(|| a.cmp(b)));
    v.dedup();
    v
}

/// `MCE(F)`: the common extensions of every member of `F` of degree `⋁ d(F)`.
pub fn mce_set(g: &KGraph, family: &[Path]) -> Result<Vec<Path>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    if family.iter().any(|p| p.range() != first.range()) {
        return Err(Error::RangeMismatch);
    }
    let mut current = vec![first.clone()];
    for mu in &family[1..] {
        let mut next = Vec::new();
        for gamma in &current {
            next.extend(mce(g, gamma, mu)?);
        }
        current = sorted_unique(next);
        if current.is_empty() {
            break;
        }
    }
    Ok(current)
}

/// `∨F = ⋃_{∅ ≠ G ⊂ F} MCE(G)`.
pub fn vee_closure(g: &KGraph, family: &[Path]) -> Result<Vec<Path>> {
    let n = family.len();
    assert!(n < 20, "vee closure is exponential in |F|");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let sub: Vec<Path> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| family[i].clone()).collect();
        out.extend(mce_set(g, &sub)?);
    }
    Ok(sorted_unique(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub row_finite: bool,
    /// Pairs `(v, i)` with `vΛ^{e_i} = ∅`.
    pub sources: Vec<(VertexId, usize)>,
    pub locally_convex: bool,
    /// `(v, λ, μ)` with `λ ∈ vΛ^{e_i}`, `μ ∈ vΛ^{e_j}` and `s(λ)Λ^{e_j} = ∅`.
    pub convexity_witness: Option<(VertexId, EdgeId, EdgeId)>,
    pub finitely_aligned: bool,
    /// False when rim vertices of a window were skipped.
    pub exact: bool,
}

impl ShapeReport {
    pub fn has_sources(&self) -> bool {
        !self.sources.is_empty()
    }
}

/// Row-finiteness, sources, local convexity and finite alignment.
///
/// A materialized graph is finite, so it is row-finite and finitely aligned.
/// Vertices with window marks are skipped where the answer depends on the
/// missing edges.
pub fn check_shape_properties(g: &KGraph) -> ShapeReport {
    let k = g.rank();
    let mut sources = Vec::new();
    let mut exact = true;
    for v in g.vertices() {
        for i in 0..k {
            if g.is_incomplete(v, i) {
                exact = false;
            } else if g.edges_into(v, i).is_empty() {
                sources.push((v, i));
            }
        }
    }
    let mut witness = None;
    'outer: for v in g.vertices() {
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for &lam in g.edges_into(v, i) {
                    let s = g.edge(lam).source;
                    if g.is_incomplete(s, j) {
                        exact = false;
                        continue;
                    }
                    if !g.edges_into(s, j).is_empty() {
                        continue;
                    }
                    if let Some(&mu) = g.edges_into(v, j).first() {
                        witness = Some((v, lam, mu));
                        break 'outer;
                    }
                }
            }
        }
    }
    ShapeReport {
        row_finite: true,
        sources,
        locally_convex: witness.is_none(),
        convexity_witness: witness,
        finitely_aligned: true,
        exact,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhaustiveVerdict {
    Yes,
    No(Path),
    UnknownUpTo(Degree),
}

impl ExhaustiveVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, ExhaustiveVerdict::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, ExhaustiveVerdict::No(_))
    }
}

/// Decides whether `E ⊂ vΛ` is exhaustive.
///
/// Paths of `vΛ` are explored breadth first. A path extending a member of
/// `E` is settled together with all its extensions, so only the remaining
/// paths are tested against `E`. A failing path is an exact `No`; `Yes`
/// requires the exploration to finish inside `bound` without meeting window
/// marks.
pub fn is_exhaustive(g: &KGraph, v: VertexId, family: &[Path], bound: &Degree) -> Result<ExhaustiveVerdict> {
    if family.iter().any(|p| p.range() != v) {
        return Err(Error::RangeMismatch);
    }
    if family.iter().any(|p| p.is_vertex()) {
        return Ok(ExhaustiveVerdict::Yes);
    }
    let mut open = false;
    let start = g.vertex_path(v);
    let mut seen: HashSet<Path> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(mu) = queue.pop_front() {
        let mut settled = false;
        for lam in family {
            if lam.degree().leq(mu.degree()) && g.has_prefix(&mu, lam)? {
                settled = true;
                break;
            }
        }
        if settled {
            continue;
        }
        let mut met = false;
        for lam in family {
            match has_common_extension(g, lam, &mu) {
                Ok(true) => {
                    met = true;
                    break;
                }
                Ok(false) => {}
                Err(Error::WindowExceeded(_)) => {
                    open = true;
                    met = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !met {
            return Ok(ExhaustiveVerdict::No(mu));
        }
        for c in 0..g.rank() {
            let s = mu.source();
            let edges = g.edges_into(s, c);
            if g.is_incomplete(s, c) {
                open = true;
            }
            if edges.is_empty() {
                continue;
            }
            if mu.degree().get(c) >= bound.get(c) {
                open = true;
                continue;
            }
            for &e in edges {
                match g.compose(&mu, &g.edge_path(e)) {
                    Ok(next) => {
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                    Err(Error::WindowExceeded(_)) => open = true,
                    Err(err) => return Err(err),
                }
            }
        }
    }
    Ok(if open { ExhaustiveVerdict::UnknownUpTo(bound.clone()) } else { ExhaustiveVerdict::Yes })
}

/// Inclusion-minimal exhaustive subsets of `vΛ^{≤cap}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeFamily {
    pub sets: Vec<Vec<Path>>,
    /// Minimal candidates whose exhaustiveness could not be decided.
    pub undecided: Vec<Vec<Path>>,
}

impl FeFamily {
    pub fn is_exact(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Minimal transversals of a hypergraph on `0..n`, by Berge's algorithm.
fn minimal_transversals(constraints: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut current: Vec<Vec<usize>> = vec![Vec::new()];
    for c in constraints {
        let mut next: Vec<Vec<usize>> = Vec::new();
        for t in &current {
            if t.iter().any(|x| c.contains(x)) {
                next.push(t.clone());
            } else {
                for &x in c {
                    let mut u = t.clone();
                    u.push(x);
                    u.sort_unstable();
                    next.push(u);
                }
            }
        }
        next.sort();
        next.dedup();
        let minimal: Vec<Vec<usize>> = next
            .iter()
            .filter(|t| !next.iter().any(|u| u != *t && u.len() < t.len() && u.iter().all(|x| t.contains(x))))
            .cloned()
            .collect();
        current = minimal;
    }
    current
}

/// All inclusion-minimal exhaustive subsets of `vΛ^{≤cap}`.
///
/// Each path `μ` imposes the constraint that `E` meets
/// `{λ : MCE(λ, μ) ≠ ∅}`. Constraints are added from the counterexamples
/// returned by [`is_exhaustive`] until every minimal transversal is
/// exhaustive; the minimal transversals are then exactly the minimal sets.
pub fn enumerate_min_fe(g: &KGraph, v: VertexId, cap: &Degree, bound: &Degree) -> Result<FeFamily> {
    let universe = g.paths_up_to(v, cap)?;
    let mut constraints: Vec<Vec<usize>> = Vec::new();
    loop {
        let transversals = minimal_transversals(&constraints);
        let mut refined = false;
        let mut sets = Vec::new();
        let mut undecided = Vec::new();
        for t in &transversals {
            let members: Vec<Path> = t.iter().map(|&i| universe[i].clone()).collect();
            match is_exhaustive(g, v, &members, bound)? {
                ExhaustiveVerdict::Yes => sets.push(members),
                ExhaustiveVerdict::UnknownUpTo(_) => undecided.push(members),
                ExhaustiveVerdict::No(mu) => {
                    let mut c = Vec::new();
                    for (i, lam) in universe.iter().enumerate() {
                        if has_common_extension(g, lam, &mu)? {
                            c.push(i);
                        }
                    }
                    constraints.push(c);
                    refined = true;
                    break;
                }
            }
        }
        if !refined {
            let order = |s: &mut Vec<Vec<Path>>| {
                s.sort_by_cached_key(|set| {
                    let mut names: Vec<String> = set.iter().map(|p| g.format_path(p)).collect();
                    names.sort();
                    names
                });
            };
            order(&mut sets);
            order(&mut undecided);
            return Ok(FeFamily { sets, undecided });
        }
    }
}

/// Outcome of the `Λ^{≤∞}` test with the violations found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeqInftyVerdict {
    pub member: bool,
    pub exact: bool,
    /// `(n, i, e)`: `n_i = d(x)_i` and `e ∈ x(n)Λ^{e_i}`.
    pub witnesses: Vec<(Degree, usize, EdgeId)>,
}

fn violations_at(
    g: &KGraph,
    x: &GeneralizedPath,
    n: &Degree,
    finite: &[Option<u32>],
    out: &mut Vec<(Degree, usize, EdgeId)>,
    exact: &mut bool,
) -> Result<()> {
    let v = x.vertex_at(g, n)?;
    for (i, di) in finite.iter().enumerate() {
        if *di != Some(n.get(i)) {
            continue;
        }
        if g.is_incomplete(v, i) {
            *exact = false;
        }
        if let Some(&e) = g.edges_into(v, i).first() {
            out.push((n.clone(), i, e));
        }
    }
    Ok(())
}

/// Decides `x ∈ Λ^{≤∞}`.
///
/// Finite paths are decided at `n = d(x)`. Periodic paths are checked over one
/// period of base points after the prefix; a violation recurs with the
/// period, so `false` is exact, and `true` is exact when the cycle moves in a
/// single coordinate. Windowed paths are checked at every base point of the
/// known prefix.
pub fn leq_infty_membership(g: &KGraph, x: &GeneralizedPath) -> Result<LeqInftyVerdict> {
    let d = x.degree();
    let finite: Vec<Option<u32>> = d
        .entries()
        .iter()
        .map(|e| match e {
            Ext::Fin(n) => Some(*n),
            Ext::Inf => None,
        })
        .collect();
    let mut witnesses = Vec::new();
    let mut exact = true;
    match x {
        GeneralizedPath::Finite(p) => {
            violations_at(g, x, p.degree(), &finite, &mut witnesses, &mut exact)?;
        }
        GeneralizedPath::Periodic { prefix, cycle } => {
            let moving = cycle.degree().support().iter().filter(|b| **b).count();
            if moving > 1 {
                exact = false;
            }
            let span = Degree::new(cycle.degree().entries().iter().map(|&c| c.saturating_sub(1)).collect());
            for r in span.box_below() {
                let n = prefix.degree().add(&r);
                violations_at(g, x, &n, &finite, &mut witnesses, &mut exact)?;
            }
        }
        GeneralizedPath::Windowed { prefix, .. } => {
            exact = false;
            for n in prefix.degree().box_below() {
                violations_at(g, x, &n, &finite, &mut witnesses, &mut exact)?;
            }
        }
    }
    witnesses.sort();
    let member = witnesses.is_empty();
    Ok(LeqInftyVerdict { member, exact: exact || !member, witnesses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryVerdict {
    Boundary,
    /// `E ∈ x(n)FE(Λ)` containing no segment `x(n, m)`.
    Refuted { n: Degree, set: Vec<Path> },
    NotRefutedUpTo(Degree),
}

impl BoundaryVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, BoundaryVerdict::Refuted { .. })
    }
}

/// The candidates used at each base point and how far exploration may go.
#[derive(Clone, Debug)]
pub struct BoundaryOptions {
    /// Degree cap on the members of candidate exhaustive sets.
    pub cap: Degree,
    /// Degree bound for exhaustiveness exploration.
    pub bound: Degree,
}

impl BoundaryOptions {
    pub fn new(cap: Degree) -> Self {
        BoundaryOptions { bound: cap.clone(), cap }
    }

    /// A cap that covers every path of an acyclic graph.
    pub fn exhaustive_for(g: &KGraph) -> Self {
        Self::new(Degree::new(vec![g.vertex_count().saturating_sub(1) as u32; g.rank()]))
    }
}

fn greedy_minimal(g: &KGraph, v: VertexId, set: Vec<Path>, bound: &Degree) -> Result<Vec<Path>> {
    let mut kept = set;
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if is_exhaustive(g, v, &trial, bound)?.is_yes() {
            kept = trial;
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// Searches for `n ≤ d(x)` and `E ∈ x(n)FE(Λ)` missing every segment `x(n, m)`.
///
/// At a base point `n` the candidates are `x(n)Λ^{≤cap}` without the
/// segments of `x`; some finite exhaustive set avoids the segments exactly
/// when this candidate set is exhaustive. Base points are visited from the
/// top down.
pub fn boundary_status(g: &KGraph, x: &GeneralizedPath, opts: &BoundaryOptions) -> Result<BoundaryVerdict> {
    let (points, mut exact) = match x {
        GeneralizedPath::Finite(p) => (p.degree().box_below(), true),
        GeneralizedPath::Periodic { prefix, cycle } => (prefix.degree().add(cycle.degree()).box_below(), false),
        GeneralizedPath::Windowed { prefix, .. } => (prefix.degree().box_below(), false),
    };
    for n in points.iter().rev() {
        let v = x.vertex_at(g, n)?;
        let tail = shift_path(g, x, n)?;
        let universe = match g.paths_up_to(v, &opts.cap) {
            Ok(u) => u,
            Err(Error::WindowExceeded(_)) => {
                exact = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        let reaches_cap = universe.iter().any(|p| {
            (0..g.rank()).any(|c| p.degree().get(c) >= opts.cap.get(c) && !g.edges_into(p.source(), c).is_empty())
        });
        if reaches_cap {
            exact = false;
        }
        let mut candidates = Vec::new();
        for p in universe {
            let on_x = match tail.in_cylinder(g, &p) {
                Ok(b) => b,
                Err(Error::WindowExceeded(_)) => {
                    exact = false;
                    true
                }
                Err(e) => return Err(e),
            };
            if !on_x {
                candidates.push(p);
            }
        }
        match is_exhaustive(g, v, &candidates, &opts.bound)? {
            ExhaustiveVerdict::Yes => {
                let set = greedy_minimal(g, v, candidates, &opts.bound)?;
                return Ok(BoundaryVerdict::Refuted { n: n.clone(), set });
            }
            ExhaustiveVerdict::No(_) => {}
            ExhaustiveVerdict::UnknownUpTo(_) => exact = false,
        }
    }
    Ok(if exact { BoundaryVerdict::Boundary } else { BoundaryVerdict::NotRefutedUpTo(opts.cap.clone()) })
}

/// `∂Λ` of a finite acyclic graph without window marks.
///
/// Every `vΛ` is finite here, so `x(n)Λ` minus the segments of `x` is itself
/// a candidate exhaustive set. It fails to be exhaustive exactly when some
/// `x(m)`, `m ≥ n`, has only segments of `x` in `x(m)Λ`. At `n = d(x)` this
/// forces `s(x)` to receive no edges, and that condition serves every `n`.
pub fn boundary_paths(g: &KGraph) -> Result<Vec<Path>> {
    if g.is_windowed() {
        return Err(Error::InfiniteBoundary("graph is a window of a larger graph".into()));
    }
    if !g.is_acyclic() {
        return Err(Error::InfiniteBoundary("graph has a cycle".into()));
    }
    let mut out = Vec::new();
    for v in g.vertices() {
        for p in g.all_paths_from(v)? {
            if g.is_total_source(p.source()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}
