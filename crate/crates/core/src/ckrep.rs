//! The Cuntz-Krieger family of a finite graph acting on its boundary paths,
//! the diagonal projections `q_μ^{∨F}` and the characters of the diagonal.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::alignment::{boundary_paths, enumerate_min_fe, lambda_min, mce, vee_closure};
use crate::degree::Degree;
use crate::desource::checks::check_shadow;
use crate::desource::{g_lambda_fe, Desource, DesourcedWindow};
use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::matrix::Matrix;
use crate::path::{Path, VertexId};
use crate::tally::{PropertyReport, Tally};

/// `S_λ e_x = e_{λx}` on the space spanned by `∂Λ`.
#[derive(Clone, Debug)]
pub struct BoundaryRep {
    pub basis: Vec<Path>,
    index: HashMap<Path, usize>,
    /// Every path of the graph, in the order matrices were built.
    pub paths: Vec<Path>,
    matrices: HashMap<Path, Matrix>,
    projections: HashMap<Path, Matrix>,
}

impl BoundaryRep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, x: &Path) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `S_λ`. Panics if `λ` is not a path of the represented graph.
    pub fn s(&self, lambda: &Path) -> &Matrix {
        self.matrices.get(lambda).expect("path of the represented graph")
    }

    /// `S_λ S_λ*`.
    pub fn range_projection(&self, lambda: &Path) -> &Matrix {
        self.projections.get(lambda).expect("path of the represented graph")
    }
}

/// `∂Λ` of a finite acyclic graph in a fixed order.
pub fn enumerate_boundary_basis(g: &KGraph) -> Result<Vec<Path>> {
    let mut basis = boundary_paths(g)?;
    basis.sort();
    Ok(basis)
}

pub fn build_boundary_rep(g: &KGraph) -> Result<BoundaryRep> {
    let basis = enumerate_boundary_basis(g)?;
    let index: HashMap<Path, usize> = basis.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let mut by_range: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, x) in basis.iter().enumerate() {
        by_range.entry(x.range()).or_default().push(i);
    }
    let mut paths = g.all_paths()?;
    paths.sort();
    let mut matrices = HashMap::new();
    for lambda in &paths {
        let mut entries = Vec::new();
        for &i in by_range.get(&lambda.source()).map(Vec::as_slice).unwrap_or(&[]) {
            let y = g.compose(lambda, &basis[i])?;
            let j = *index.get(&y).ok_or_else(|| {
                Error::NotBoundary(format!("{} extends a boundary path outside ∂Λ", g.format_path(&y)))
            })?;
            entries.push((j, i, 1));
        }
        matrices.insert(lambda.clone(), Matrix::from_entries(basis.len(), entries));
    }
    let projections = matrices.iter().map(|(p, s)| (p.clone(), s * &s.adjoint())).collect();
    Ok(BoundaryRep { basis, index, paths, matrices, projections })
}

/// The largest degree of a path, which bounds every search in a finite
/// acyclic graph.
pub fn depth(g: &KGraph, rep: &BoundaryRep) -> Degree {
    rep.paths.iter().fold(Degree::zero(g.rank()), |acc, p| acc.join(p.degree()))
}

fn ones(k: usize) -> Degree {
    Degree::new(vec![1; k])
}

/// Checks that the matrices are partial isometries satisfying CK1 to CK4.
/// CK4 runs over the minimal exhaustive subsets of `vΛ^{≤cap}`; any
/// exhaustive set contains one and the defect products decrease, so these
/// suffice.
pub fn verify_ck_family(g: &KGraph, rep: &BoundaryRep, cap: Option<&Degree>) -> Result<PropertyReport> {
    let n = rep.dim();
    let fmt = |p: &Path| g.format_path(p);
    let mut isometry = Tally::new("partial_isometry");
    let mut ck1 = Tally::new("ck1");
    let mut ck2 = Tally::new("ck2");
    let mut ck3 = Tally::new("ck3");
    let mut entrywise = Tally::new("ck3_entrywise");
    let mut ck4 = Tally::new("ck4");

    for lambda in &rep.paths {
        let s = rep.s(lambda);
        let zero_one = s.entries().all(|(_, _, x)| x == 1);
        let diagonal = !lambda.is_vertex() || s.is_diagonal();
        isometry.record(zero_one && diagonal && s.is_partial_isometry(), || fmt(lambda));
    }
    let vertices: Vec<Path> = g.vertices().map(|v| g.vertex_path(v)).collect();
    for (i, v) in vertices.iter().enumerate() {
        let sv = rep.s(v);
        ck1.record(sv.is_projection(), || format!("{} is not a projection", fmt(v)));
        for w in &vertices[i + 1..] {
            ck1.record((sv * rep.s(w)).is_zero(), || format!("{} and {}", fmt(v), fmt(w)));
        }
    }
    let adjoints: HashMap<&Path, Matrix> = rep.paths.iter().map(|p| (p, rep.s(p).adjoint())).collect();
    for mu in &rep.paths {
        for nu in &rep.paths {
            if mu.source() == nu.range() {
                let prod = rep.s(mu) * rep.s(nu);
                ck2.record(&prod == rep.s(&g.compose(mu, nu)?), || format!("{} then {}", fmt(mu), fmt(nu)));
            }
            let lhs = &adjoints[mu] * rep.s(nu);
            let expected = if mu.range() == nu.range() {
                let min = lambda_min(g, mu, nu)?;
                let mut sum = Matrix::zero(n);
                for (alpha, beta) in &min.pairs {
                    sum = &sum + &(rep.s(alpha) * &adjoints[beta]);
                }
                sum
            } else {
                Matrix::zero(n)
            };
            ck3.record(lhs == expected, || format!("({}, {})", fmt(mu), fmt(nu)));
            // (S_μ* S_ν)[x', x] = 1 exactly when μx' = νx.
            let mut direct = Vec::new();
            for (i, x) in rep.basis.iter().enumerate() {
                if x.range() != nu.source() {
                    continue;
                }
                let y = g.compose(nu, x)?;
                if mu.degree().leq(y.degree()) && g.has_prefix(&y, mu)? {
                    let rest = g.segment(&y, mu.degree(), y.degree())?;
                    if let Some(j) = rep.index_of(&rest) {
                        direct.push((j, i, 1));
                    }
                }
            }
            entrywise.record(Matrix::from_entries(n, direct) == lhs, || format!("({}, {})", fmt(mu), fmt(nu)));
        }
    }
    let bound = depth(g, rep);
    let cap = cap.cloned().unwrap_or_else(|| ones(g.rank()));
    for v in g.vertices() {
        let fe = enumerate_min_fe(g, v, &cap, &bound)?;
        ck4.skipped += fe.undecided.len();
        let sv = rep.s(&g.vertex_path(v));
        for set in &fe.sets {
            let defects: Vec<Matrix> = set.iter().map(|mu| sv - rep.range_projection(mu)).collect();
            ck4.record(Matrix::product(n, &defects).is_zero(), || {
                format!("{}: {{{}}}", g.vertex_name(v), set.iter().map(fmt).collect::<Vec<_>>().join(", "))
            });
        }
    }
    Ok(PropertyReport { checks: vec![isometry, ck1, ck2, ck3, entrywise, ck4] })
}

/// `∨F`, taken range by range since families with different ranges have no
/// common extension.
pub fn vee_closure_by_range(g: &KGraph, f: &[Path]) -> Result<Vec<Path>> {
    let mut groups: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    for p in f {
        groups.entry(p.range()).or_default().push(p.clone());
    }
    let mut out = Vec::new();
    for group in groups.values() {
        out.extend(vee_closure(g, group)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Output of [`diagonal_projections`].
#[derive(Clone, Debug)]
pub struct DiagonalCheck {
    pub vee: Vec<Path>,
    pub q: Vec<(Path, Matrix)>,
    pub report: PropertyReport,
}

/// The projections `q_μ^{∨F} = S_μS_μ* Π (S_μS_μ* − S_{μμ'}S_{μμ'}*)` over the
/// proper extensions `μμ'` of `μ` in `∨F`. Checks that they are mutually
/// orthogonal projections, that `S_νS_ν*` is the sum of the `q` below `ν`,
/// and that `q_0 Π_{q∈Q}(p − q) = q_0` whenever `q_0` is orthogonal to `Q`.
pub fn diagonal_projections(g: &KGraph, rep: &BoundaryRep, f: &[Path]) -> Result<DiagonalCheck> {
    for mu in f {
        let r = g.vertex_path(mu.range());
        if !f.contains(&r) {
            return Err(Error::RangeClosureViolation(g.vertex_name(mu.range()).to_string()));
        }
    }
    let vee = vee_closure_by_range(g, f)?;
    let report = check_vee(g, rep, &vee)?;
    Ok(DiagonalCheck { q: q_projections(g, rep, &vee)?, vee, report })
}

fn extends(g: &KGraph, long: &Path, short: &Path) -> Result<bool> {
    Ok(long.range() == short.range() && short.degree().leq(long.degree()) && g.has_prefix(long, short)?)
}

fn q_projections(g: &KGraph, rep: &BoundaryRep, vee: &[Path]) -> Result<Vec<(Path, Matrix)>> {
    let projections: Vec<&Matrix> = vee.iter().map(|p| rep.range_projection(p)).collect();
    let mut q = Vec::new();
    for (i, mu) in vee.iter().enumerate() {
        let mut acc = projections[i].clone();
        for (j, nu) in vee.iter().enumerate() {
            if j != i && extends(g, nu, mu)? {
                acc = &acc * &(projections[i] - projections[j]);
            }
        }
        q.push((mu.clone(), acc));
    }
    Ok(q)
}

/// The checks of [`diagonal_projections`] for a set already closed under
/// `∨`.
pub fn check_vee(g: &KGraph, rep: &BoundaryRep, vee: &[Path]) -> Result<PropertyReport> {
    let n = rep.dim();
    let fmt = |p: &Path| g.format_path(p);
    let q = q_projections(g, rep, vee)?;
    let mut proj = Tally::new("q_projection");
    let mut orth = Tally::new("q_orthogonal");
    let mut sum = Tally::new("sum_identity");
    let mut defect = Tally::new("defect_product");
    for (i, (mu, qm)) in q.iter().enumerate() {
        proj.record(qm.is_projection(), || fmt(mu));
        for (nu, qn) in &q[i + 1..] {
            orth.record((qm * qn).is_zero(), || format!("{} and {}", fmt(mu), fmt(nu)));
        }
    }
    for nu in vee {
        let mut total = Matrix::zero(n);
        for (mu, qm) in &q {
            if extends(g, mu, nu)? {
                total = &total + qm;
            }
        }
        sum.record(&total == rep.range_projection(nu), || fmt(nu));
    }
    for v in vee.iter().filter(|p| p.is_vertex()) {
        let p = rep.s(v);
        let family: Vec<&Matrix> =
            vee.iter().filter(|mu| mu.range() == v.range() && !mu.is_vertex()).map(|mu| rep.range_projection(mu)).collect();
        let defects: Vec<Matrix> = family.iter().map(|&qq| p - qq).collect();
        let prod = Matrix::product(n, &defects);
        for q0 in rep.paths.iter().filter(|x| x.range() == v.range()).map(|x| rep.range_projection(x)) {
            if q0.is_zero() || family.iter().any(|&qq| !(q0 * qq).is_zero()) {
                continue;
            }
            defect.record(&(q0 * &prod) == q0, || fmt(v));
        }
    }
    Ok(PropertyReport { checks: vec![proj, orth, sum, defect] })
}

/// Output of [`check_families`].
#[derive(Clone, Debug, Default)]
pub struct FamilySweep {
    pub families: usize,
    /// Distinct `∨F` among the families.
    pub distinct: usize,
    pub report: PropertyReport,
}

/// Runs the diagonal checks on every range-closed family of at most `max`
/// paths, once per distinct `∨F`.
pub fn check_families(g: &KGraph, rep: &BoundaryRep, max: usize) -> Result<FamilySweep> {
    let mut seen = HashSet::new();
    let mut sweep = FamilySweep::default();
    for f in range_closed_families(g, &rep.paths, max) {
        sweep.families += 1;
        let vee = vee_closure_by_range(g, &f)?;
        if seen.insert(vee.clone()) {
            sweep.report.absorb(check_vee(g, rep, &vee)?);
        }
    }
    sweep.distinct = seen.len();
    Ok(sweep)
}

/// Every family of at most `max` paths that contains the range of each
/// member, in a fixed order.
pub fn range_closed_families(g: &KGraph, paths: &[Path], max: usize) -> Vec<Vec<Path>> {
    let edges: Vec<&Path> = paths.iter().filter(|p| !p.is_vertex()).collect();
    let vertices: Vec<Path> = g.vertices().map(|v| g.vertex_path(v)).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        edges: &[&Path],
        vertices: &[Path],
        chosen: &mut Vec<usize>,
        max: usize,
        out: &mut Vec<Vec<Path>>,
    ) {
        let ranges: BTreeSet<VertexId> = chosen.iter().map(|&i| edges[i].range()).collect();
        if chosen.len() + ranges.len() <= max {
            let room = max - chosen.len() - ranges.len();
            let extra: Vec<&Path> = vertices.iter().filter(|v| !ranges.contains(&v.range())).collect();
            let base: Vec<Path> =
                chosen.iter().map(|&i| edges[i].clone()).chain(ranges.iter().map(|&r| vertices[r as usize].clone())).collect();
            for subset in subsets(&extra, room) {
                let mut f = base.clone();
                f.extend(subset.into_iter().cloned());
                if !f.is_empty() {
                    f.sort();
                    out.push(f);
                }
            }
        } else {
            return;
        }
        for i in start..edges.len() {
            chosen.push(i);
            rec(i + 1, edges, vertices, chosen, max, out);
            chosen.pop();
        }
    }
    rec(0, &edges, &vertices, &mut chosen, max, &mut out);
    out
}

fn subsets<'a, T>(items: &[&'a T], max: usize) -> Vec<Vec<&'a T>> {
    let mut out: Vec<Vec<&T>> = vec![Vec::new()];
    for &item in items {
        let grown: Vec<Vec<&T>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut t = s.clone();
                t.push(item);
                t
            })
            .collect();
        out.extend(grown);
    }
    out
}

/// A character of the diagonal, given by the basis vector it evaluates at.
#[derive(Clone, Debug, Serialize)]
pub struct Character {
    /// Index into the boundary basis of the minimal projection.
    pub support: Vec<usize>,
    /// The path recovered from the character by the `ν^n` construction.
    pub path: Option<Path>,
}

#[derive(Clone, Debug)]
pub struct SpectrumCheck {
    pub characters: Vec<Character>,
    pub report: PropertyReport,
}

/// Minimal projections of `span{S_μS_μ*}` and the characters they define.
/// Every character must be `h(x)` for a unique boundary path `x`.
pub fn spectrum_characters(g: &KGraph, rep: &BoundaryRep) -> Result<SpectrumCheck> {
    let n = rep.dim();
    let fmt = |p: &Path| g.format_path(p);
    let projections: Vec<&Matrix> = rep.paths.iter().map(|p| rep.range_projection(p)).collect();
    let diagonals: Vec<Vec<i64>> = projections.iter().map(|m| m.diagonal()).collect();
    // Basis vectors with equal values on every generator span one minimal
    // projection.
    let mut classes: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        classes.entry(diagonals.iter().map(|d| d[i]).collect()).or_default().push(i);
    }
    let mut count = Tally::new("character_count");
    let mut rank_one = Tally::new("rank_one");
    let mut unique = Tally::new("unique_nu");
    let mut form = Tally::new("form_h");
    let mut mult = Tally::new("multiplicative");
    let mut expansion = Tally::new("mce_expansion");
    let mut bijective = Tally::new("bijective");
    let nonzero: Vec<Vec<usize>> = classes.into_iter().filter(|(sig, _)| sig.iter().any(|&x| x != 0)).map(|(_, c)| c).collect();
    count.record(nonzero.len() == n, || format!("{} characters for {} boundary paths", nonzero.len(), n));

    let mut characters = Vec::new();
    let mut recovered = BTreeSet::new();
    for support in nonzero {
        rank_one.record(support.len() == 1, || format!("support {support:?}"));
        let at = support[0];
        // ν^n: the unique path of degree n with φ(S_νS_ν*) = 1.
        let mut by_degree: BTreeMap<Degree, Vec<&Path>> = BTreeMap::new();
        for (p, d) in rep.paths.iter().zip(&diagonals) {
            if d[at] == 1 {
                by_degree.entry(p.degree().clone()).or_default().push(p);
            }
        }
        let ok = by_degree.values().all(|v| v.len() == 1);
        unique.record(ok, || format!("basis vector {at}"));
        let top = by_degree.keys().fold(Degree::zero(g.rank()), |acc, d| acc.join(d));
        let x = by_degree.get(&top).map(|v| v[0].clone());
        if let Some(x) = &x {
            let mut h_matches = rep.index_of(x).is_some();
            for (p, d) in rep.paths.iter().zip(&diagonals) {
                h_matches &= (d[at] == 1) == extends(g, x, p)?;
            }
            form.record(h_matches, || fmt(x));
            recovered.insert(x.clone());
        } else {
            form.record(false, || format!("no ν of degree {top}"));
        }
        characters.push(Character { support, path: x });
    }
    bijective.record(recovered.len() == n && recovered.iter().all(|x| rep.index_of(x).is_some()), || {
        format!("{} distinct paths recovered", recovered.len())
    });

    for (i, mu) in rep.paths.iter().enumerate() {
        for (j, alpha) in rep.paths.iter().enumerate().skip(i) {
            let prod = projections[i] * projections[j];
            let mut sum = Matrix::zero(n);
            if mu.range() == alpha.range() {
                for lambda in mce(g, mu, alpha)? {
                    sum = &sum + rep.range_projection(&lambda);
                }
            }
            expansion.record(prod == sum, || format!("({}, {})", fmt(mu), fmt(alpha)));
            for c in &characters {
                let at = c.support[0];
                mult.record(prod.get(at, at) == diagonals[i][at] * diagonals[j][at], || {
                    format!("({}, {}) at basis vector {at}", fmt(mu), fmt(alpha))
                });
            }
        }
    }
    Ok(SpectrumCheck { characters, report: PropertyReport { checks: vec![count, rank_one, unique, form, bijective, mult, expansion] } })
}

/// The finite shadows of the corner identity and the commuting diagram on a
/// window of `Λ̃`, represented on the boundary paths of the window read as a
/// standalone graph.
///
/// - `membership_transfer`: `x ∈ Z(ι(μ)) ⟺ ω ∈ Z(μ)` where `π(x) = ι(ω)`.
/// - `corner_identity`: `T_{λ'}T_{λ'}* = Π_{α∈G_λ}(T_{s(π(λ))} − T_αT_α*)`.
/// - `corner_words`: `T_λT_μ* = T_{π(λ)} Π_{α∈G_λ}(…) T_{π(μ)}*` when `s(λ) = s(μ)`.
/// - `restriction_ck3`, `restriction_ck4`: the relations of the embedded
///   family `{T_{ι(λ)}}` computed from `Λ`.
///
/// Paths from vertices outside the guard are skipped.
pub fn diagram_commutation_check(ds: &Desource, dw: &DesourcedWindow) -> Result<PropertyReport> {
    let g = ds.graph;
    let tg = &dw.graph;
    let w = &dw.window;
    let fmt = |p: &Path| tg.format_path(p);
    let shadow = check_shadow(ds, dw, false)?;
    let transfer = shadow.get("membership_transfer").cloned().unwrap_or_else(|| Tally::new("membership_transfer"));
    let truncated = tg.truncated()?;
    let rep = build_boundary_rep(&truncated)?;
    let n = rep.dim();
    let mut corner = Tally::new("corner_identity");
    let mut words = Tally::new("corner_words");
    let mut ck3 = Tally::new("restriction_ck3");
    let mut ck4 = Tally::new("restriction_ck4");

    // (λ, π(λ) as a window path, Π_{α∈G_λ}(T_{s(π(λ))} − T_αT_α*))
    let mut by_source: BTreeMap<VertexId, Vec<(Path, Path, Matrix)>> = BTreeMap::new();
    for v in g.vertices() {
        let Some(ev) = dw.embedded(v) else { continue };
        if !dw.is_guarded(ev) {
            continue;
        }
        let paths = match tg.paths_up_to(ev, w) {
            Ok(p) => p,
            Err(Error::WindowExceeded(_)) => {
                corner.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for lambda in paths {
            let a = dw.morph_of_path(ds, &lambda)?;
            let gl = g_lambda_fe(ds, dw, &a, w)?;
            let tail = dw.path_of_morph(ds, &gl.tail)?;
            let base = rep.s(&tg.vertex_path(tail.range()));
            let mut defects = Vec::new();
            for alpha in &gl.set {
                defects.push(base - rep.range_projection(&dw.path_of_morph(ds, alpha)?));
            }
            let prod = if defects.is_empty() { base.clone() } else { Matrix::product(n, &defects) };
            corner.record(rep.range_projection(&tail) == &prod, || fmt(&lambda));
            let pi = dw.path_of_morph(ds, &ds.project(&a)?)?;
            by_source.entry(lambda.source()).or_default().push((lambda, pi, prod));
        }
    }
    for group in by_source.values() {
        for (lambda, pl, prod) in group {
            for (mu, pm, _) in group {
                let lhs = rep.s(lambda) * &rep.s(mu).adjoint();
                let rhs = &(rep.s(pl) * prod) * &rep.s(pm).adjoint();
                words.record(lhs == rhs, || format!("({}, {})", fmt(lambda), fmt(mu)));
            }
        }
    }

    let lift = |p: &Path| -> Result<Path> { dw.path_of_morph(ds, &ds.embed_iota(p)?) };
    let ones = Degree::new(vec![1; g.rank()]);
    for v in g.vertices() {
        let Some(ev) = dw.embedded(v) else { continue };
        if !dw.is_guarded(ev) {
            continue;
        }
        let Ok(base) = g.paths_up_to(v, w) else {
            ck3.skipped += 1;
            continue;
        };
        for mu in &base {
            for nu in &base {
                let Ok(min) = lambda_min(g, mu, nu) else {
                    ck3.skipped += 1;
                    continue;
                };
                let terms: Result<Vec<(Path, Path)>> =
                    min.pairs.iter().map(|(a, b)| Ok((lift(a)?, lift(b)?))).collect();
                let (Ok(lm), Ok(ln), Ok(terms)) = (lift(mu), lift(nu), terms) else {
                    ck3.skipped += 1;
                    continue;
                };
                let lhs = &rep.s(&lm).adjoint() * rep.s(&ln);
                let mut rhs = Matrix::zero(n);
                for (a, b) in &terms {
                    rhs = &rhs + &(rep.s(a) * &rep.s(b).adjoint());
                }
                ck3.record(lhs == rhs, || format!("({}, {})", g.format_path(mu), g.format_path(nu)));
            }
        }
        let Ok(fe) = enumerate_min_fe(g, v, &ones, w) else {
            ck4.skipped += 1;
            continue;
        };
        ck4.skipped += fe.undecided.len();
        let tv = rep.s(&tg.vertex_path(ev));
        for set in &fe.sets {
            let lifted: Result<Vec<Path>> = set.iter().map(lift).collect();
            let Ok(lifted) = lifted else {
                ck4.skipped += 1;
                continue;
            };
            let defects: Vec<Matrix> = lifted.iter().map(|p| tv - rep.range_projection(p)).collect();
            ck4.record(Matrix::product(n, &defects).is_zero(), || {
                format!("{}: {{{}}}", g.vertex_name(v), set.iter().map(|p| g.format_path(p)).collect::<Vec<_>>().join(", "))
            });
        }
    }
    Ok(PropertyReport { checks: vec![transfer, corner, words, ck3, ck4] })
}
