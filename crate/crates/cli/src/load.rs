use std::fs;

use anyhow::{bail, Result};
use kgraph::fixtures::{self, Generator};
use kgraph::kgfile::{parse_kg, KgDocument};
use kgraph::tails::{SearchTails, TailOracle};
use kgraph::{Degree, ExtDegree, GeneralizedPath, KGraph};

/// Names accepted in place of a `.kg` file.
pub const BUILTINS: &[(&str, &str)] = &[
    ("paper-ex", "the non-locally-convex example 2-graph with columns v_n, u_n, w_n"),
    ("omega:M", "the 2-graph Omega_{k,m}, e.g. omega:2,2 or omega:inf,1"),
    ("src1", "v <-e- w"),
    ("triv", "a single vertex"),
    ("loop:N", "a directed cycle of N edges"),
    ("chain:N", "v_0 <- v_1 <- ... <- v_N"),
    ("nlc", "one edge of each color into v, nothing composable"),
    ("star", "two sources a and b feeding v"),
];

/// Input bad enough to be reported as a usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub enum Source {
    Fixed(KGraph),
    Lazy(Generator),
}

pub struct Loaded {
    pub name: String,
    pub source: Source,
}

impl Loaded {
    pub fn rank(&self) -> usize {
        match &self.source {
            Source::Fixed(g) => g.rank(),
            Source::Lazy(gen) => gen.rank(),
        }
    }

    pub fn graph(&self, window: &Degree) -> Result<KGraph> {
        Ok(match &self.source {
            Source::Fixed(g) => g.clone(),
            Source::Lazy(gen) => gen.materialize(window)?,
        })
    }

    pub fn oracle(&self) -> Box<dyn TailOracle> {
        match &self.source {
            Source::Fixed(_) => Box::new(SearchTails),
            Source::Lazy(gen) => gen.oracle(),
        }
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.source, Source::Lazy(_))
    }
}

pub fn load(spec: &str) -> Result<Loaded> {
    let (name, param) = spec.split_once(':').map_or((spec, None), |(a, b)| (a, Some(b)));
    let fixed = |g: KGraph| Ok(Loaded { name: spec.to_string(), source: Source::Fixed(g) });
    let lazy = |gen: Generator| Ok(Loaded { name: spec.to_string(), source: Source::Lazy(gen) });
    match (name, param) {
        ("src1", None) => fixed(fixtures::src1()),
        ("triv", None) => fixed(fixtures::triv()),
        ("nlc", None) => fixed(fixtures::nlc()),
        ("star", None) => fixed(fixtures::star()),
        ("paper-ex", None) => lazy(Generator::PaperEx),
        ("omega", Some(m)) => {
            let m: ExtDegree = m.parse().map_err(|e| usage(format!("bad omega degree `{m}`: {e}")))?;
            match m.to_finite() {
                Some(d) => fixed(fixtures::omega_finite(&d)),
                None => lazy(Generator::Omega(m)),
            }
        }
        ("loop", Some(n)) => fixed(fixtures::loop_graph(n.parse().map_err(|_| usage(format!("bad loop size `{n}`")))?)),
        ("chain", Some(n)) => fixed(fixtures::chain(n.parse().map_err(|_| usage(format!("bad chain length `{n}`")))?)),
        _ => {
            let text = fs::read_to_string(spec).map_err(|e| usage(format!("`{spec}` is neither a builtin nor a readable file: {e}")))?;
            let source = match parse_kg(&text)? {
                KgDocument::Graph(g) => Source::Fixed(g),
                KgDocument::Generator(gen) => Source::Lazy(gen),
            };
            Ok(Loaded { name: spec.to_string(), source })
        }
    }
}

pub fn parse_degree(text: &str, k: usize) -> Result<Degree> {
    let d: Degree = text.parse().map_err(|e| usage(format!("bad degree `{text}`: {e}")))?;
    if d.rank() != k {
        bail!(usage(format!("degree `{text}` has rank {}, the graph has rank {k}", d.rank())));
    }
    Ok(d)
}

/// A path word, optionally followed by `~D` to read it as the visible prefix
/// of a path of extended degree `D`, e.g. `x_0 x_1~inf,0`, or by `|C` for the
/// periodic path that repeats the loop `C` forever.
pub fn parse_general(g: &KGraph, text: &str) -> Result<GeneralizedPath> {
    if let Some((prefix, cycle)) = text.split_once('|') {
        return Ok(GeneralizedPath::periodic(g.parse_path(prefix.trim())?, g.parse_path(cycle.trim())?)?);
    }
    match text.split_once('~') {
        None => Ok(GeneralizedPath::Finite(g.parse_path(text.trim())?)),
        Some((word, degree)) => {
            let d: ExtDegree = degree.trim().parse().map_err(|e| usage(format!("bad degree `{degree}`: {e}")))?;
            Ok(GeneralizedPath::windowed(g.parse_path(word.trim())?, d)?)
        }
    }
}

/// Paths separated by `;`.
pub fn parse_list(g: &KGraph, text: &str) -> Result<Vec<kgraph::Path>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(|s| Ok(g.parse_path(s.trim())?)).collect()
}
