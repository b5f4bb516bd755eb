//! Finite and infinite paths, shifts, and joins of nested families.

use crate::degree::{Degree, Ext, ExtDegree};
use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::path::{Path, VertexId};

/// A path of possibly infinite degree.
///
/// `Periodic` is `prefix · cycle · cycle · …` and requires
/// `s(cycle) = r(cycle) = s(prefix)`. `Windowed` carries the prefix known up
/// to the materialized window together with the declared degree; segments
/// beyond that prefix are refused.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneralizedPath {
    Finite(Path),
    Periodic { prefix: Path, cycle: Path },
    Windowed { prefix: Path, degree: ExtDegree },
}

impl From<Path> for GeneralizedPath {
    fn from(p: Path) -> Self {
        GeneralizedPath::Finite(p)
    }
}

impl GeneralizedPath {
    pub fn periodic(prefix: Path, cycle: Path) -> Result<Self> {
        if cycle.range() != cycle.source() || cycle.range() != prefix.source() {
            return Err(Error::NotComposable("cycle must be a loop at s(prefix)".into()));
        }
        if cycle.degree().is_zero() {
            return Err(Error::NotComposable("cycle must have positive degree".into()));
        }
        Ok(GeneralizedPath::Periodic { prefix, cycle })
    }

    pub fn windowed(prefix: Path, degree: ExtDegree) -> Result<Self> {
        if !degree.dominates(prefix.degree()) {
            return Err(Error::OutOfRange {
                q: prefix.degree().to_string(),
                degree: degree.to_string(),
            });
        }
        match degree.to_finite() {
            Some(d) if &d == prefix.degree() => Ok(GeneralizedPath::Finite(prefix)),
            _ => Ok(GeneralizedPath::Windowed { prefix, degree }),
        }
    }

    pub fn range(&self) -> VertexId {
        match self {
            GeneralizedPath::Finite(p) => p.range(),
            GeneralizedPath::Periodic { prefix, .. } => prefix.range(),
            GeneralizedPath::Windowed { prefix, .. } => prefix.range(),
        }
    }

    pub fn degree(&self) -> ExtDegree {
        match self {
            GeneralizedPath::Finite(p) => ExtDegree::from(p.degree()),
            GeneralizedPath::Periodic { prefix, cycle } => ExtDegree::new(
                (0..prefix.degree().rank())
                    .map(|i| if cycle.degree().get(i) > 0 { Ext::Inf } else { Ext::Fin(prefix.degree().get(i)) })
                    .collect(),
            ),
            GeneralizedPath::Windowed { degree, .. } => degree.clone(),
        }
    }

    pub fn as_finite(&self) -> Option<&Path> {
        match self {
            GeneralizedPath::Finite(p) => Some(p),
            _ => None,
        }
    }

    /// The largest finite degree at which segments are available.
    pub fn known_degree(&self) -> Option<Degree> {
        match self {
            GeneralizedPath::Finite(p) => Some(p.degree().clone()),
            GeneralizedPath::Periodic { .. } => None,
            GeneralizedPath::Windowed { prefix, .. } => Some(prefix.degree().clone()),
        }
    }

    /// A finite prefix of degree at least `q` on every coordinate where the
    /// path is long enough.
    fn unrolled(&self, g: &KGraph, q: &Degree) -> Result<Path> {
        match self {
            GeneralizedPath::Finite(p) => Ok(p.clone()),
            GeneralizedPath::Windowed { prefix, degree } => {
                let need = degree.meet(q);
                if !need.leq(prefix.degree()) {
                    return Err(Error::WindowExceeded(format!(
                        "segment up to {need} of a path known to {}",
                        prefix.degree()
                    )));
                }
                Ok(prefix.clone())
            }
            GeneralizedPath::Periodic { prefix, cycle } => {
                let mut t = 0u32;
                for i in 0..q.rank() {
                    let c = cycle.degree().get(i);
                    if c > 0 && q.get(i) > prefix.degree().get(i) {
                        t = t.max((q.get(i) - prefix.degree().get(i)).div_ceil(c));
                    }
                }
                let mut p = prefix.clone();
                for _ in 0..t {
                    p = g.compose(&p, cycle)?;
                }
                Ok(p)
            }
        }
    }

    /// The segment `x(p, q)` for finite `p ≤ q ≤ d(x)`.
    pub fn segment(&self, g: &KGraph, p: &Degree, q: &Degree) -> Result<Path> {
        let d = self.degree();
        if !p.leq(q) || !d.dominates(q) {
            return Err(Error::OutOfRange { q: format!("{p}..{q}"), degree: d.to_string() });
        }
        let long = self.unrolled(g, q)?;
        g.segment(&long, p, q)
    }

    pub fn prefix(&self, g: &KGraph, q: &Degree) -> Result<Path> {
        self.segment(g, &Degree::zero(q.rank()), q)
    }

    /// The vertex `x(n)`.
    pub fn vertex_at(&self, g: &KGraph, n: &Degree) -> Result<VertexId> {
        Ok(self.segment(g, n, n)?.range())
    }

    /// `x ∈ Z(μ)`: `d(x) ≥ d(μ)` and `x(0, d(μ)) = μ`.
    pub fn in_cylinder(&self, g: &KGraph, mu: &Path) -> Result<bool> {
        if self.range() != mu.range() || !self.degree().dominates(mu.degree()) {
            return Ok(false);
        }
        Ok(&self.prefix(g, mu.degree())? == mu)
    }
}

/// `λx`.
pub fn compose_paths(g: &KGraph, lambda: &Path, x: &GeneralizedPath) -> Result<GeneralizedPath> {
    if lambda.source() != x.range() {
        return Err(Error::NotComposable(format!(
            "s({}) != r(x)",
            g.format_path(lambda)
        )));
    }
    Ok(match x {
        GeneralizedPath::Finite(p) => GeneralizedPath::Finite(g.compose(lambda, p)?),
        GeneralizedPath::Periodic { prefix, cycle } => GeneralizedPath::Periodic {
            prefix: g.compose(lambda, prefix)?,
            cycle: cycle.clone(),
        },
        GeneralizedPath::Windowed { prefix, degree } => GeneralizedPath::Windowed {
            prefix: g.compose(lambda, prefix)?,
            degree: degree.add(lambda.degree()),
        },
    })
}

/// `σ^m(x)`.
pub fn shift_path(g: &KGraph, x: &GeneralizedPath, m: &Degree) -> Result<GeneralizedPath> {
    let d = x.degree();
    if !d.dominates(m) {
        return Err(Error::OutOfRange { q: m.to_string(), degree: d.to_string() });
    }
    Ok(match x {
        GeneralizedPath::Finite(p) => GeneralizedPath::Finite(g.segment(p, m, p.degree())?),
        GeneralizedPath::Periodic { cycle, .. } => {
            let long = x.unrolled(g, m)?;
            GeneralizedPath::Periodic { prefix: g.segment(&long, m, long.degree())?, cycle: cycle.clone() }
        }
        GeneralizedPath::Windowed { prefix, degree } => {
            if !m.leq(prefix.degree()) {
                return Err(Error::WindowExceeded(format!("shift by {m} beyond the known prefix")));
            }
            GeneralizedPath::windowed(g.segment(prefix, m, prefix.degree())?, degree.sub(m))?
        }
    })
}

/// What is known about the limit of a nested family beyond its listed terms.
#[derive(Clone, Debug)]
pub enum JoinLimit {
    /// The family is finite; its join is the last term.
    Last,
    /// The family continues beyond the listed terms with this total degree.
    Degree(ExtDegree),
    /// Every term is a prefix of `prefix · cycle^∞`.
    Periodic { prefix: Path, cycle: Path },
}

/// The unique `ω` with `ω(0, d(ν_n)) = ν_n` for a coherent family `ν_0, ν_1, …`.
pub fn join_nested(g: &KGraph, family: &[Path], limit: JoinLimit) -> Result<GeneralizedPath> {
    if family.is_empty() {
        return Err(Error::IncoherentFamily(0));
    }
    for n in 1..family.len() {
        let (a, b) = (&family[n - 1], &family[n]);
        if !a.degree().leq(b.degree()) || !g.has_prefix(b, a)? {
            return Err(Error::IncoherentFamily(n));
        }
    }
    let last = family.last().expect("nonempty").clone();
    match limit {
        JoinLimit::Last => Ok(GeneralizedPath::Finite(last)),
        JoinLimit::Degree(d) => {
            if !d.dominates(last.degree()) {
                return Err(Error::IncoherentFamily(family.len() - 1));
            }
            GeneralizedPath::windowed(last, d)
        }
        JoinLimit::Periodic { prefix, cycle } => {
            let x = GeneralizedPath::periodic(prefix, cycle)?;
            for (n, term) in family.iter().enumerate() {
                if !x.in_cylinder(g, term)? {
                    return Err(Error::IncoherentFamily(n));
                }
            }
            Ok(x)
        }
    }
}

/// Joins the first `count` terms of a family given by a rule.
pub fn join_rule(
    g: &KGraph,
    rule: impl Fn(usize) -> Result<Path>,
    count: usize,
    limit: JoinLimit,
) -> Result<GeneralizedPath> {
    let family = (0..count).map(rule).collect::<Result<Vec<_>>>()?;
    join_nested(g, &family, limit)
}

impl KGraph {
    /// A word, `prefix|cycle` for a periodic path or `prefix~degree` for a
    /// windowed one.
    pub fn format_general(&self, x: &GeneralizedPath) -> String {
        match x {
            GeneralizedPath::Finite(p) => self.format_path(p),
            GeneralizedPath::Periodic { prefix, cycle } => format!("{}|{}", self.format_path(prefix), self.format_path(cycle)),
            GeneralizedPath::Windowed { prefix, degree } => format!("{}~{}", self.format_path(prefix), degree),
        }
    }
}
