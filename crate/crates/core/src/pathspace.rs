//! Cylinder sets `Z(μ∖G)` of the path space and the topology they generate.

use crate::alignment::{mce, mce_set};
use crate::degree::{Degree, Ext, ExtDegree};
use crate::error::{Error, Result};
use crate::genpath::GeneralizedPath;
use crate::graph::KGraph;
use crate::path::Path;

/// `Z(μ∖G) = Z(μ) ∖ ⋃_{ν∈G} Z(μν)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicSet {
    pub mu: Path,
    pub excluded: Vec<Path>,
}

impl BasicSet {
    pub fn new(mu: Path, mut excluded: Vec<Path>) -> Result<Self> {
        if excluded.iter().any(|nu| nu.range() != mu.source()) {
            return Err(Error::NotComposable("excluded paths must start at s(μ)".into()));
        }
        excluded.sort();
        excluded.dedup();
        Ok(BasicSet { mu, excluded })
    }

    pub fn cylinder(mu: Path) -> Self {
        BasicSet { mu, excluded: Vec::new() }
    }

    /// Every excluded path is a single edge.
    pub fn is_edge_normal(&self) -> bool {
        self.excluded.iter().all(|nu| nu.degree().total() == 1)
    }

    /// The paths `μν` for `ν ∈ G`.
    pub fn excluded_extensions(&self, g: &KGraph) -> Result<Vec<Path>> {
        self.excluded.iter().map(|nu| g.compose(&self.mu, nu)).collect()
    }

    pub fn format(&self, g: &KGraph) -> String {
        if self.excluded.is_empty() {
            return format!("Z({})", g.format_path(&self.mu));
        }
        let ex: Vec<String> = self.excluded.iter().map(|p| g.format_path(p)).collect();
        format!("Z({} \\ {{{}}})", g.format_path(&self.mu), ex.join(", "))
    }
}

pub fn basic_membership(g: &KGraph, w: &GeneralizedPath, b: &BasicSet) -> Result<bool> {
    if !w.in_cylinder(g, &b.mu)? {
        return Ok(false);
    }
    for ext in b.excluded_extensions(g)? {
        if w.in_cylinder(g, &ext)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output of [`refine_base`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub alpha: Path,
    pub f: Vec<Path>,
    /// Set when `G = ∅` and the join over `G` was taken to be `d(μ)`.
    pub empty_join_convention: bool,
}

impl Refinement {
    pub fn basic_set(&self) -> BasicSet {
        BasicSet { mu: self.alpha.clone(), excluded: self.f.clone() }
    }
}

/// Finds `α` and edges `F` at `s(α)` with `λ ∈ Z(α∖F) ⊆ Z(μ∖G)`.
///
/// `N = (⋁_{ν∈G} d(μν)) ∧ d(λ)` and `α = λ(0, N)`. For each `ν` with
/// `N ≱ d(μν)` and `MCE(α, μν) ≠ ∅` a coordinate `j` with
/// `N_j < d(μν)_j` is chosen and `γ(N, N + e_j)` is excluded for every
/// `γ ∈ MCE(α, μν)`. When `G = ∅` the result is `(μ, ∅)`.
pub fn refine_base(g: &KGraph, lambda: &GeneralizedPath, b: &BasicSet) -> Result<Refinement> {
    if !basic_membership(g, lambda, b)? {
        return Err(Error::NotMember);
    }
    if b.excluded.is_empty() {
        return Ok(Refinement { alpha: b.mu.clone(), f: Vec::new(), empty_join_convention: true });
    }
    let exts = b.excluded_extensions(g)?;
    let top = Degree::join_all(exts.iter().map(|p| p.degree())).expect("nonempty");
    let n = lambda.degree().meet(&top);
    let alpha = lambda.prefix(g, &n)?;
    let mut f = Vec::new();
    for ext in &exts {
        if ext.degree().leq(&n) {
            continue;
        }
        let gammas = mce(g, &alpha, ext)?;
        if gammas.is_empty() {
            continue;
        }
        let j = (0..n.rank()).find(|&i| n.get(i) < ext.degree().get(i)).expect("N is not above d(μν)");
        let step = n.add(&Degree::unit(n.rank(), j));
        for gamma in gammas {
            f.push(g.segment(&gamma, &n, &step)?);
        }
    }
    f.sort();
    f.dedup();
    Ok(Refinement { alpha, f, empty_join_convention: false })
}

/// `MCE(F)`, whose cylinders partition `⋂_{μ∈F} Z(μ)`.
pub fn cylinder_intersection(g: &KGraph, family: &[Path]) -> Result<Vec<Path>> {
    mce_set(g, family)
}

/// Whether `Z(μ₁∖G₁) ∩ Z(μ₂∖G₂) = ∅`.
///
/// The intersection is the union over `γ ∈ MCE(μ₁, μ₂)` of `Z(γ)` minus the
/// exclusions, and `γ` itself is a point of it unless some `μ_iν` is a
/// prefix of `γ`. So the sets are disjoint exactly when every such `γ` is
/// covered by an exclusion.
pub fn basic_sets_disjoint(g: &KGraph, b1: &BasicSet, b2: &BasicSet) -> Result<bool> {
    if b1.mu.range() != b2.mu.range() {
        return Ok(true);
    }
    let ex: Vec<Path> = b1.excluded_extensions(g)?.into_iter().chain(b2.excluded_extensions(g)?).collect();
    for gamma in mce(g, &b1.mu, &b2.mu)? {
        let mut covered = false;
        for e in &ex {
            if e.degree().leq(gamma.degree()) && g.has_prefix(&gamma, e)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How the disjointness of a separating pair was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    DistinctRanges,
    /// The two cylinders have equal degree and distinct paths, so no MCE.
    DistinctPrefixes,
    /// One set excludes the other's cylinder.
    Exclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Separated { first: BasicSet, second: BasicSet, certificate: Certificate },
    /// The two paths agree on everything visible below the window.
    NoWitnessUpTo(Degree),
}

fn bounded(d: &ExtDegree, w: &Degree) -> Degree {
    d.meet(w)
}

/// Disjoint basic sets around two distinct paths.
pub fn separate_points(
    g: &KGraph,
    w1: &GeneralizedPath,
    w2: &GeneralizedPath,
    window: &Degree,
) -> Result<Separation> {
    let (r1, r2) = (w1.range(), w2.range());
    if r1 != r2 {
        return Ok(Separation::Separated {
            first: BasicSet::cylinder(g.vertex_path(r1)),
            second: BasicSet::cylinder(g.vertex_path(r2)),
            certificate: Certificate::DistinctRanges,
        });
    }
    let common = bounded(&w1.degree(), window).meet(&bounded(&w2.degree(), window));
    let known = |w: &GeneralizedPath, n: &Degree| w.known_degree().is_none_or(|k| n.leq(&k));
    for n in common.box_below() {
        if !known(w1, &n) || !known(w2, &n) {
            continue;
        }
        let (a, b) = (w1.prefix(g, &n)?, w2.prefix(g, &n)?);
        if a != b {
            let (first, second) = (BasicSet::cylinder(a), BasicSet::cylinder(b));
            debug_assert!(basic_sets_disjoint(g, &first, &second)?);
            return Ok(Separation::Separated { first, second, certificate: Certificate::DistinctPrefixes });
        }
    }
    // Equal on common prefixes: look for a coordinate where one is shorter.
    for swap in [false, true] {
        let (short, long) = if swap { (w2, w1) } else { (w1, w2) };
        let (ds, dl) = (short.degree(), long.degree());
        for j in 0..window.rank() {
            let Ext::Fin(a) = ds.get(j) else { continue };
            if !dl.get(j).dominates(a + 1) || a + 1 > window.get(j) {
                continue;
            }
            let q = Degree::zero(window.rank()).with(j, a + 1);
            let p = bounded(&ds, &q);
            if !known(long, &q) || !known(short, &p) {
                continue;
            }
            let beta = long.prefix(g, &q)?;
            let alpha = short.prefix(g, &p)?;
            let tail = g.segment(&beta, &p, &q)?;
            let excluded = BasicSet::new(alpha, vec![tail])?;
            let cyl = BasicSet::cylinder(beta);
            debug_assert!(basic_sets_disjoint(g, &excluded, &cyl)?);
            let (first, second) = if swap { (cyl, excluded) } else { (excluded, cyl) };
            return Ok(Separation::Separated { first, second, certificate: Certificate::Exclusion });
        }
    }
    Ok(Separation::NoWitnessUpTo(window.clone()))
}

/// Verdict for one test set of [`convergence_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceEntry {
    pub set: BasicSet,
    pub contains_target: bool,
    /// Least index from which every listed term lies in the set.
    pub threshold: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub entries: Vec<ConvergenceEntry>,
    pub converges: bool,
}

/// Checks the finite shadow of `seq → target` against the basic sets of
/// `family` that contain the target.
pub fn convergence_check(
    g: &KGraph,
    seq: &[GeneralizedPath],
    target: &GeneralizedPath,
    family: &[BasicSet],
) -> Result<ConvergenceReport> {
    let mut entries = Vec::new();
    let mut converges = true;
    for set in family {
        let contains_target = basic_membership(g, target, set)?;
        let mut threshold = None;
        if contains_target {
            let mut start = seq.len();
            for (i, w) in seq.iter().enumerate().rev() {
                if !basic_membership(g, w, set)? {
                    break;
                }
                start = i;
            }
            if start < seq.len() {
                threshold = Some(start);
            } else {
                converges = false;
            }
        }
        entries.push(ConvergenceEntry { set: set.clone(), contains_target, threshold });
    }
    Ok(ConvergenceReport { entries, converges })
}
