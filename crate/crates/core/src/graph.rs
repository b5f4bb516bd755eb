//! k-graphs presented by a colored skeleton and a complete list of squares.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::path::{EdgeId, Path, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    /// 0-based color.
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

/// A validated k-graph.
///
/// `into[v][i]` lists the edges of color `i` with range `v`, which is the set
/// `vΛ^{e_i}`. Squares are stored in both directions. A pair `(v, i)` in
/// `incomplete` marks a vertex at the rim of a materialized window whose
/// color-`i` edges are not all present.
#[derive(Clone, Debug)]
pub struct KGraph {
    k: usize,
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    into: Vec<Vec<Vec<EdgeId>>>,
    squares: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    unresolved: HashSet<(EdgeId, EdgeId)>,
    incomplete: BTreeSet<(VertexId, usize)>,
}

#[derive(Clone, Debug, Default)]
pub struct KGraphBuilder {
    k: usize,
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    squares: Vec<[EdgeId; 4]>,
    incomplete: BTreeSet<(VertexId, usize)>,
}

impl KGraphBuilder {
    pub fn new(k: usize) -> Self {
        KGraphBuilder { k, ..Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    /// Returns the id of `name`, creating the vertex if needed.
    pub fn vertex(&mut self, name: &str) -> VertexId {
        if let Some(&v) = self.vertex_index.get(name) {
            return v;
        }
        let id = self.vertex_names.len() as VertexId;
        self.vertex_names.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        id
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name)
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn edge(
        &mut self,
        name: &str,
        color: usize,
        range: VertexId,
        source: VertexId,
    ) -> Result<EdgeId> {
        if color >= self.k {
            return Err(Error::InvalidEdge(format!("{name} has color {} > k = {}", color + 1, self.k)));
        }
        let n = self.vertex_names.len() as VertexId;
        if range >= n || source >= n {
            return Err(Error::InvalidEdge(format!("{name} has an unknown endpoint")));
        }
        if self.edge_index.contains_key(name) {
            return Err(Error::InvalidEdge(format!("duplicate edge name {name}")));
        }
        let id = self.edges.len() as EdgeId;
        self.edges.push(Edge { name: name.to_string(), color, range, source });
        self.edge_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Records the rule `f g = g2 f2`.
    pub fn square(&mut self, f: EdgeId, g: EdgeId, g2: EdgeId, f2: EdgeId) {
        self.squares.push([f, g, g2, f2]);
    }

    pub fn square_by_name(&mut self, f: &str, g: &str, g2: &str, f2: &str) -> Result<()> {
        let look = |s: &str| self.edge_id(s).ok_or_else(|| Error::UnknownEdge(s.to_string()));
        let ids = [look(f)?, look(g)?, look(g2)?, look(f2)?];
        self.square(ids[0], ids[1], ids[2], ids[3]);
        Ok(())
    }

    pub fn mark_incomplete(&mut self, v: VertexId, color: usize) {
        self.incomplete.insert((v, color));
    }

    pub fn build(self) -> Result<KGraph> {
        let k = self.k;
        let nv = self.vertex_names.len();
        let mut into = vec![vec![Vec::new(); k]; nv];
        for (id, e) in self.edges.iter().enumerate() {
            into[e.range as usize][e.color].push(id as EdgeId);
        }
        let name = |e: EdgeId| self.edges[e as usize].name.clone();
        let mut squares: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)> = HashMap::new();
        for &[f, g, g2, f2] in &self.squares {
            let (ef, eg, eg2, ef2) = (
                &self.edges[f as usize],
                &self.edges[g as usize],
                &self.edges[g2 as usize],
                &self.edges[f2 as usize],
            );
            let detail = || format!("{} {} = {} {}", ef.name, eg.name, eg2.name, ef2.name);
            if ef.color == eg.color || eg2.color != eg.color || ef2.color != ef.color {
                return Err(Error::InvalidSquare { detail: format!("{}: colors do not swap", detail()) });
            }
            if ef.source != eg.range
                || eg2.source != ef2.range
                || ef.range != eg2.range
                || eg.source != ef2.source
            {
                return Err(Error::InvalidSquare { detail: format!("{}: endpoints disagree", detail()) });
            }
            for (key, val) in [((f, g), (g2, f2)), ((g2, f2), (f, g))] {
                match squares.get(&key) {
                    Some(&old) if old != val => {
                        return Err(Error::AmbiguousSquare { f: name(key.0), g: name(key.1) })
                    }
                    _ => {
                        squares.insert(key, val);
                    }
                }
            }
        }

        let mut unresolved = HashSet::new();
        // Pairs whose first edge has the larger color are checked first so the
        // reported pair is the one read right to left in the skeleton.
        for descending in [true, false] {
            for (a, ea) in self.edges.iter().enumerate() {
                for j in 0..k {
                    if j == ea.color || (j < ea.color) != descending {
                        continue;
                    }
                    for &b in &into[ea.source as usize][j] {
                        let a = a as EdgeId;
                        if squares.contains_key(&(a, b)) {
                            continue;
                        }
                        let rim = self.incomplete.contains(&(ea.range, j))
                            || into[ea.range as usize][j].iter().any(|&g2| {
                                let s = self.edges[g2 as usize].source;
                                self.incomplete.contains(&(s, ea.color))
                            });
                        if rim {
                            unresolved.insert((a, b));
                        } else {
                            return Err(Error::MissingSquare { f: name(a), g: name(b) });
                        }
                    }
                }
            }
        }

        let graph = KGraph {
            k,
            vertex_names: self.vertex_names,
            vertex_index: self.vertex_index,
            edges: self.edges,
            edge_index: self.edge_index,
            into,
            squares,
            unresolved,
            incomplete: self.incomplete,
        };
        if k >= 3 {
            graph.check_associativity()?;
        }
        Ok(graph)
    }
}

impl KGraph {
    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertex_names.len() as VertexId
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.vertex_id(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edge_id(name).ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// `vΛ^{e_i}`.
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.into[v as usize][color]
    }

    pub fn is_incomplete(&self, v: VertexId, color: usize) -> bool {
        self.incomplete.contains(&(v, color))
    }

    pub fn incomplete(&self) -> &BTreeSet<(VertexId, usize)> {
        &self.incomplete
    }

    pub fn is_windowed(&self) -> bool {
        !self.incomplete.is_empty()
    }

    /// The same graph read as a standalone finite k-graph: rim marks are
    /// dropped, so rim vertices become genuine sources.
    pub fn truncated(&self) -> Result<KGraph> {
        if let Some(&(a, b)) = self.unresolved.iter().next() {
            return Err(Error::MissingSquare { f: self.edge(a).name.clone(), g: self.edge(b).name.clone() });
        }
        let mut g = self.clone();
        g.incomplete.clear();
        Ok(g)
    }

    /// A vertex with `vΛ^{e_i} = ∅` for every color, all colors complete.
    pub fn is_total_source(&self, v: VertexId) -> bool {
        (0..self.k).all(|i| self.into[v as usize][i].is_empty() && !self.is_incomplete(v, i))
    }

    /// The rule `f g = g' f'` for a bicolored composable pair, in either order.
    pub fn square(&self, f: EdgeId, g: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.squares.get(&(f, g)).copied()
    }

    /// Squares listed once each, with the first edge of smaller color.
    pub fn square_list(&self) -> Vec<[EdgeId; 4]> {
        let mut out: Vec<[EdgeId; 4]> = self
            .squares
            .iter()
            .filter(|((f, g), _)| self.edge(*f).color < self.edge(*g).color)
            .map(|(&(f, g), &(g2, f2))| [f, g, g2, f2])
            .collect();
        out.sort();
        out
    }

    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path::from_parts(v, v, Vec::new(), Degree::zero(self.k))
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let edge = self.edge(e);
        Path::from_parts(edge.range, edge.source, vec![e], Degree::unit(self.k, edge.color))
    }

    fn degree_of(&self, word: &[EdgeId]) -> Degree {
        let mut d = vec![0u32; self.k];
        for &e in word {
            d[self.edge(e).color] += 1;
        }
        Degree::new(d)
    }

    fn swap_pair(&self, a: EdgeId, b: EdgeId) -> Result<(EdgeId, EdgeId)> {
        match self.squares.get(&(a, b)) {
            Some(&p) => Ok(p),
            None if self.unresolved.contains(&(a, b)) => Err(Error::WindowExceeded(format!(
                "square for ({}, {}) lies outside the window",
                self.edge(a).name,
                self.edge(b).name
            ))),
            None => Err(Error::MissingSquare {
                f: self.edge(a).name.clone(),
                g: self.edge(b).name.clone(),
            }),
        }
    }

    /// Rewrites a composable word to color-normal form by adjacent swaps.
    pub fn normalize(&self, word: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let mut w = word.to_vec();
        loop {
            let pos = (0..w.len().saturating_sub(1))
                .find(|&i| self.edge(w[i]).color > self.edge(w[i + 1]).color);
            match pos {
                None => return Ok(w),
                Some(i) => {
                    let (g2, f2) = self.swap_pair(w[i], w[i + 1])?;
                    w[i] = g2;
                    w[i + 1] = f2;
                }
            }
        }
    }

    /// Rewrites a composable word so its colors read `target`.
    pub fn reorder(&self, word: &[EdgeId], target: &[usize]) -> Result<Vec<EdgeId>> {
        debug_assert_eq!(word.len(), target.len());
        let mut w = word.to_vec();
        for t in 0..target.len() {
            let j = (t..w.len())
                .find(|&j| self.edge(w[j]).color == target[t])
                .expect("target colors match the word degree");
            for s in (t..j).rev() {
                let (g2, f2) = self.swap_pair(w[s], w[s + 1])?;
                w[s] = g2;
                w[s + 1] = f2;
            }
        }
        Ok(w)
    }

    fn check_word(&self, range: VertexId, word: &[EdgeId]) -> Result<VertexId> {
        let mut at = range;
        for &e in word {
            let edge = self.edge(e);
            if edge.range != at {
                return Err(Error::NotComposable(format!(
                    "edge {} does not start at {}",
                    edge.name,
                    self.vertex_name(at)
                )));
            }
            at = edge.source;
        }
        Ok(at)
    }

    /// Builds the path of a composable edge word starting at `range`.
    pub fn path_from_word(&self, range: VertexId, word: &[EdgeId]) -> Result<Path> {
        let source = self.check_word(range, word)?;
        let normal = self.normalize(word)?;
        Ok(Path::from_parts(range, source, normal, self.degree_of(word)))
    }

    /// Parses a whitespace separated edge word or a single vertex name.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Parse { line: 0, message: "empty path".into() });
        }
        if tokens.len() == 1 {
            if let Some(v) = self.vertex_id(tokens[0]) {
                return Ok(self.vertex_path(v));
            }
        }
        let word = tokens.iter().map(|t| self.edge_by_name(t)).collect::<Result<Vec<_>>>()?;
        let range = self.edge(word[0]).range;
        self.path_from_word(range, &word)
    }

    pub fn format_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            self.vertex_name(p.range()).to_string()
        } else {
            p.edges().iter().map(|&e| self.edge(e).name.as_str()).collect::<Vec<_>>().join(" ")
        }
    }

    pub fn compose(&self, a: &Path, b: &Path) -> Result<Path> {
        if a.source() != b.range() {
            return Err(Error::NotComposable(format!(
                "s({}) != r({})",
                self.format_path(a),
                self.format_path(b)
            )));
        }
        let mut word = a.edges().to_vec();
        word.extend_from_slice(b.edges());
        let normal = self.normalize(&word)?;
        Ok(Path::from_parts(a.range(), b.source(), normal, a.degree().add(b.degree())))
    }

    fn vertex_in_word(&self, range: VertexId, word: &[EdgeId], t: usize) -> VertexId {
        if t < word.len() {
            self.edge(word[t]).range
        } else if let Some(&last) = word.last() {
            self.edge(last).source
        } else {
            range
        }
    }

    /// The segment `λ(p, q)`.
    pub fn segment(&self, lambda: &Path, p: &Degree, q: &Degree) -> Result<Path> {
        let d = lambda.degree();
        if !(p.leq(q) && q.leq(d)) {
            return Err(Error::OutOfRange { q: format!("{p}..{q}"), degree: d.to_string() });
        }
        if p.is_zero() && q == d {
            return Ok(lambda.clone());
        }
        let mut target = p.color_word();
        target.extend(q.sub(p).color_word());
        target.extend(d.sub(q).color_word());
        let w = self.reorder(lambda.edges(), &target)?;
        let (lo, hi) = (p.total() as usize, q.total() as usize);
        let mid = w[lo..hi].to_vec();
        let range = self.vertex_in_word(lambda.range(), &w, lo);
        let source = self.vertex_in_word(lambda.range(), &w, hi);
        Ok(Path::from_parts(range, source, mid, q.sub(p)))
    }

    /// The vertex `λ(p)`.
    pub fn vertex_at(&self, lambda: &Path, p: &Degree) -> Result<VertexId> {
        Ok(self.segment(lambda, p, p)?.range())
    }

    /// `μ` is a prefix of `λ`.
    pub fn has_prefix(&self, lambda: &Path, mu: &Path) -> Result<bool> {
        if lambda.range() != mu.range() || !mu.degree().leq(lambda.degree()) {
            return Ok(false);
        }
        Ok(&self.segment(lambda, &Degree::zero(self.k), mu.degree())? == mu)
    }

    fn need(&self, v: VertexId, color: usize) -> Result<&[EdgeId]> {
        if self.is_incomplete(v, color) {
            return Err(Error::WindowExceeded(format!(
                "{} has color-{} edges outside the window",
                self.vertex_name(v),
                color + 1
            )));
        }
        Ok(&self.into[v as usize][color])
    }

    /// `vΛ^m`, in lexicographic order of edge ids.
    pub fn enumerate_paths(&self, v: VertexId, m: &Degree) -> Result<Vec<Path>> {
        let colors = m.color_word();
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(colors.len());
        self.enumerate_rec(v, v, &colors, &mut word, &mut out)?;
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        range: VertexId,
        at: VertexId,
        colors: &[usize],
        word: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) -> Result<()> {
        if word.len() == colors.len() {
            out.push(Path::from_parts(range, at, word.clone(), self.degree_of(word)));
            return Ok(());
        }
        for &e in self.need(at, colors[word.len()])? {
            word.push(e);
            self.enumerate_rec(range, self.edge(e).source, colors, word, out)?;
            word.pop();
        }
        Ok(())
    }

    /// `vΛ^{≤cap}`, all paths from `v` of degree at most `cap`.
    pub fn paths_up_to(&self, v: VertexId, cap: &Degree) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        let mut word = Vec::new();
        let mut counts = vec![0u32; self.k];
        self.upto_rec(v, v, 0, cap, &mut counts, &mut word, &mut out)?;
        out.sort_by(|a, b| {
            a.degree().total().cmp(&b.degree().total()).then_with(|| a.cmp(b))
        });
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn upto_rec(
        &self,
        range: VertexId,
        at: VertexId,
        min_color: usize,
        cap: &Degree,
        counts: &mut Vec<u32>,
        word: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) -> Result<()> {
        out.push(Path::from_parts(range, at, word.clone(), Degree::new(counts.clone())));
        for c in min_color..self.k {
            if counts[c] >= cap.get(c) {
                continue;
            }
            for &e in self.need(at, c)? {
                word.push(e);
                counts[c] += 1;
                self.upto_rec(range, self.edge(e).source, c, cap, counts, word, out)?;
                counts[c] -= 1;
                word.pop();
            }
        }
        Ok(())
    }

    /// All `λα` with `d(α) = m`.
    pub fn extensions(&self, lambda: &Path, m: &Degree) -> Result<Vec<Path>> {
        self.enumerate_paths(lambda.source(), m)?
            .iter()
            .map(|alpha| self.compose(lambda, alpha))
            .collect()
    }

    /// The skeleton has no directed cycle, so every `vΛ` is finite.
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.source as usize] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for c in 0..self.k {
                for &e in &self.into[v][c] {
                    let s = self.edge(e).source as usize;
                    indeg[s] -= 1;
                    if indeg[s] == 0 {
                        stack.push(s);
                    }
                }
            }
        }
        seen == n
    }

    /// `vΛ` for an acyclic graph without window marks.
    pub fn all_paths_from(&self, v: VertexId) -> Result<Vec<Path>> {
        if !self.is_acyclic() {
            return Err(Error::InfiniteBoundary(format!("{} lies on a cycle", self.vertex_name(v))));
        }
        let cap = Degree::new(vec![self.vertex_count() as u32; self.k]);
        self.paths_up_to(v, &cap)
    }

    /// `Λ` for an acyclic graph, grouped by range.
    pub fn all_paths(&self) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        for v in self.vertices() {
            out.extend(self.all_paths_from(v)?);
        }
        Ok(out)
    }

    fn check_associativity(&self) -> Result<()> {
        for (a, ea) in self.edges.iter().enumerate() {
            for cb in 0..self.k {
                if cb == ea.color {
                    continue;
                }
                for &b in &self.into[ea.source as usize][cb] {
                    let eb = self.edge(b);
                    for cc in 0..self.k {
                        if cc == ea.color || cc == cb {
                            continue;
                        }
                        for &c in &self.into[eb.source as usize][cc] {
                            let word = [a as EdgeId, b, c];
                            self.check_triple(&word)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// All rewrite orders of a three-colored word must reach one normal form.
    fn check_triple(&self, word: &[EdgeId; 3]) -> Result<()> {
        let mut results = BTreeSet::new();
        let mut stack = vec![word.to_vec()];
        let mut seen = HashSet::new();
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            let mut moved = false;
            for i in 0..2 {
                if self.edge(w[i]).color > self.edge(w[i + 1]).color {
                    moved = true;
                    match self.swap_pair(w[i], w[i + 1]) {
                        Ok((g2, f2)) => {
                            let mut next = w.clone();
                            next[i] = g2;
                            next[i + 1] = f2;
                            stack.push(next);
                        }
                        Err(Error::WindowExceeded(_)) => return Ok(()),
                        Err(e) => return Err(e),
                    }
                }
            }
            if !moved {
                results.insert(w);
            }
        }
        if results.len() > 1 {
            return Err(Error::AssociativityFailure {
                triple: word.iter().map(|&e| self.edge(e).name.clone()).collect(),
            });
        }
        Ok(())
    }
}
