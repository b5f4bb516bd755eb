use std::fs;
use std::io::Write;

use anyhow::{bail, Result};
use kgraph::alignment::{
    boundary_paths, boundary_status, check_shape_properties, enumerate_min_fe, is_exhaustive, lambda_min,
    leq_infty_membership, BoundaryOptions, BoundaryVerdict,
};
use kgraph::ckrep::{build_boundary_rep, check_families, diagram_commutation_check, spectrum_characters, verify_ck_family};
use kgraph::desource::checks::{check_desourced, check_shadow};
use kgraph::desource::heads::add_heads_iso_1graph;
use kgraph::desource::{materialize_window, Desource, DesourcedWindow};
use kgraph::dot::export_dot;
use kgraph::fixtures::{self, ProductOptions};
use kgraph::kgfile::{write_generator, write_kg};
use kgraph::pathspace::{basic_membership, convergence_check, refine_base, separate_points, BasicSet, Separation};
use kgraph::report::{AnalysisReport, GraphMeta, Verdict};
use kgraph::{Degree, GeneralizedPath, KGraph, Path};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::load::{load, parse_degree, parse_general, parse_list, usage, Loaded, Source, UsageError, BUILTINS};
use crate::{Command, Fixtures, GraphArgs, Topology};

pub fn error_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<kgraph::Error>() {
        Some(
            kgraph::Error::Parse { .. }
            | kgraph::Error::UnknownVertex(_)
            | kgraph::Error::UnknownEdge(_)
            | kgraph::Error::InvalidEdge(_)
            | kgraph::Error::MissingSquare { .. }
            | kgraph::Error::AmbiguousSquare { .. }
            | kgraph::Error::InvalidSquare { .. }
            | kgraph::Error::AssociativityFailure { .. }
            | kgraph::Error::NotComposable(_)
            | kgraph::Error::NotRank1(_),
        ) => 2,
        _ => 1,
    }
}

/// A loaded graph with its resolved window.
struct Ctx {
    loaded: Loaded,
    window: Degree,
    graph: KGraph,
}

impl Ctx {
    fn new(args: &GraphArgs) -> Result<Self> {
        let loaded = load(&args.graph)?;
        let k = loaded.rank();
        let window = match &args.window {
            Some(w) => parse_degree(w, k)?,
            None => Degree::new(vec![3; k]),
        };
        let graph = loaded.graph(&window)?;
        Ok(Ctx { loaded, window, graph })
    }

    fn report(&self, command: &str) -> AnalysisReport {
        let mut r = AnalysisReport::new(command, GraphMeta::of(&self.loaded.name, &self.graph));
        r.window = Some(self.window.entries().to_vec());
        r
    }

    fn degree(&self, text: &Option<String>, default: Degree) -> Result<Degree> {
        match text {
            Some(t) => parse_degree(t, self.graph.rank()),
            None => Ok(default),
        }
    }

    /// The base graph for desourcification. A lazy graph is materialized
    /// well past the window so that tails can be read off.
    fn base(&self) -> Result<KGraph> {
        match &self.loaded.source {
            Source::Fixed(g) => Ok(g.clone()),
            Source::Lazy(gen) => {
                let wide = Degree::new(self.window.entries().iter().map(|&w| 2 * w + 1).collect());
                Ok(gen.materialize(&wide)?)
            }
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn emit(r: &AnalysisReport) -> u8 {
    out(&(r.to_json() + "\n"));
    r.exit_code() as u8
}

fn paths_json(g: &KGraph, ps: &[Path]) -> Value {
    json!(ps.iter().map(|p| g.format_path(p)).collect::<Vec<_>>())
}

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check(a) => check(&Ctx::new(&a)?),
        Command::Mce { g, lambda, mu } => mce(&Ctx::new(&g)?, &lambda, &mu),
        Command::Fe { g, vertex, family, cap, bound } => fe(&Ctx::new(&g)?, &vertex, family, cap, bound),
        Command::Boundary { g, path, cap, all } => boundary(&Ctx::new(&g)?, path, cap, all),
        Command::Topology(t) => topology(t),
        Command::Desource { g, guard, check, iso_heads, kg_out } => {
            let ctx = Ctx::new(&g)?;
            if iso_heads {
                heads(&ctx)
            } else {
                desource(&ctx, guard, check, kg_out)
            }
        }
        Command::Rep { g, verify, max_family, guard, dump } => rep(&Ctx::new(&g)?, &verify, max_family, guard, dump),
        Command::ExportDot { g, desource, guard } => {
            let ctx = Ctx::new(&g)?;
            if desource {
                let base = ctx.base()?;
                let oracle = ctx.loaded.oracle();
                let ds = Desource::new(&base, oracle.as_ref());
                let guard = ctx.degree(&guard, Degree::new(vec![1; base.rank()]))?;
                out(&export_dot(&materialize_window(&ds, &ctx.window, &guard)?.graph));
            } else {
                out(&export_dot(&ctx.graph));
            }
            Ok(0)
        }
        Command::Fixtures(f) => fixtures_cmd(f),
    }
}

fn check(ctx: &Ctx) -> Result<u8> {
    let g = &ctx.graph;
    let s = check_shape_properties(g);
    let mut r = ctx.report("check");
    let mut v = Verdict::pass("valid");
    if !s.exact {
        v = v.up_to(&ctx.window);
    }
    r.push(v);
    r.data = json!({
        "row_finite": s.row_finite,
        "finitely_aligned": s.finitely_aligned,
        "locally_convex": s.locally_convex,
        "convexity_witness": s.convexity_witness.map(|(v, a, b)| json!({
            "vertex": g.vertex_name(v),
            "edges": [g.edge(a).name.clone(), g.edge(b).name.clone()],
        })),
        "sources": s.sources.iter().map(|&(v, i)| json!({ "vertex": g.vertex_name(v), "color": i + 1 })).collect::<Vec<_>>(),
        "acyclic": g.is_acyclic(),
        "exact": s.exact,
    });
    Ok(emit(&r))
}

fn mce(ctx: &Ctx, lambda: &str, mu: &str) -> Result<u8> {
    let g = &ctx.graph;
    let (l, m) = (g.parse_path(lambda)?, g.parse_path(mu)?);
    let mut r = ctx.report("mce");
    match lambda_min(g, &l, &m) {
        Ok(res) => {
            r.push(Verdict::pass("mce"));
            r.data = json!({
                "mce": paths_json(g, &res.extensions),
                "lambda_min": res.pairs.iter().map(|(a, b)| [g.format_path(a), g.format_path(b)]).collect::<Vec<_>>(),
            });
        }
        Err(kgraph::Error::WindowExceeded(w)) => r.push(Verdict::unknown("mce", &ctx.window).with_detail(json!(w))),
        Err(e) => return Err(e.into()),
    }
    Ok(emit(&r))
}

fn fe(ctx: &Ctx, vertex: &str, family: Option<String>, cap: Option<String>, bound: Option<String>) -> Result<u8> {
    let g = &ctx.graph;
    let v = g.vertex_by_name(vertex)?;
    let bound = ctx.degree(&bound, ctx.window.clone())?;
    let mut r = ctx.report("fe");
    match family {
        Some(f) => {
            let f = parse_list(g, &f)?;
            if let Some(p) = f.iter().find(|p| p.range() != v) {
                bail!(usage(format!("`{}` does not start at {vertex}", g.format_path(p))));
            }
            r.push(Verdict::from_exhaustive("exhaustive", &is_exhaustive(g, v, &f, &bound)?, g));
        }
        None => {
            let cap = ctx.degree(&cap, Degree::new(vec![1; g.rank()]))?;
            let fam = enumerate_min_fe(g, v, &cap, &bound)?;
            r.push(if fam.is_exact() { Verdict::pass("min_fe") } else { Verdict::unknown("min_fe", &bound) });
            r.data = json!({
                "cap": cap.entries(),
                "sets": fam.sets.iter().map(|s| paths_json(g, s)).collect::<Vec<_>>(),
                "undecided": fam.undecided.iter().map(|s| paths_json(g, s)).collect::<Vec<_>>(),
            });
        }
    }
    Ok(emit(&r))
}

fn boundary(ctx: &Ctx, path: Option<String>, cap: Option<String>, all: bool) -> Result<u8> {
    let g = &ctx.graph;
    let mut r = ctx.report("boundary");
    let mut data = serde_json::Map::new();
    if all {
        let ps = boundary_paths(g)?;
        r.push(Verdict::pass("boundary_paths"));
        data.insert("boundary_paths".into(), paths_json(g, &ps));
    }
    if let Some(p) = path {
        let x = parse_general(g, &p)?;
        let leq = leq_infty_membership(g, &x)?;
        let name = "leq_infty";
        let v = match (leq.member, leq.exact) {
            (true, true) => Verdict::pass(name),
            (false, _) => Verdict::fail(name, format!("{} at {}", g.edge(leq.witnesses[0].2).name, leq.witnesses[0].0)),
            (true, false) => Verdict::unknown(name, &ctx.window),
        };
        r.push(v);
        let opts = match &cap {
            Some(c) => BoundaryOptions::new(parse_degree(c, g.rank())?),
            None if g.is_acyclic() && !g.is_windowed() => BoundaryOptions::exhaustive_for(g),
            None => BoundaryOptions::new(ctx.window.clone()),
        };
        let v = match boundary_status(g, &x, &opts)? {
            BoundaryVerdict::Boundary => Verdict::pass("boundary"),
            BoundaryVerdict::Refuted { n, set } => {
                Verdict::fail("boundary", format!("{{{}}} at {n}", set.iter().map(|p| g.format_path(p)).collect::<Vec<_>>().join(", ")))
            }
            BoundaryVerdict::NotRefutedUpTo(d) => Verdict::unknown("boundary", &d),
        };
        r.push(v);
        data.insert("path".into(), json!(g.format_general(&x)));
    }
    if r.verdicts.is_empty() {
        bail!(usage("give a path or --all"));
    }
    r.data = Value::Object(data);
    Ok(emit(&r))
}

fn parse_basic(g: &KGraph, text: &str) -> Result<BasicSet> {
    let (mu, excl) = text.split_once('/').unwrap_or((text, ""));
    Ok(BasicSet::new(g.parse_path(mu.trim())?, parse_list(g, excl)?)?)
}

fn topology(t: Topology) -> Result<u8> {
    match t {
        Topology::Refine { g, path, mu, exclude } => {
            let ctx = Ctx::new(&g)?;
            let g = &ctx.graph;
            let lambda = parse_general(g, &path)?;
            let b = BasicSet::new(g.parse_path(&mu)?, parse_list(g, &exclude)?)?;
            let mut r = ctx.report("topology refine");
            let refined = refine_base(g, &lambda, &b)?;
            let inner = refined.basic_set();
            let member = basic_membership(g, &lambda, &inner)?;
            r.push(if member { Verdict::pass("contains_path") } else { Verdict::fail("contains_path", g.format_general(&lambda)) });
            if refined.empty_join_convention {
                r.conventions.push("empty_join: the join over an empty family is d(mu)".into());
            }
            r.data = json!({
                "input": b.format(g),
                "alpha": g.format_path(&refined.alpha),
                "excluded": paths_json(g, &refined.f),
                "basic_set": inner.format(g),
                "edge_normal": inner.is_edge_normal(),
            });
            Ok(emit(&r))
        }
        Topology::Separate { g, first, second } => {
            let ctx = Ctx::new(&g)?;
            let g = &ctx.graph;
            let (a, b) = (parse_general(g, &first)?, parse_general(g, &second)?);
            let mut r = ctx.report("topology separate");
            match separate_points(g, &a, &b, &ctx.window)? {
                Separation::Separated { first, second, certificate } => {
                    r.push(Verdict::pass("separated"));
                    r.data = json!({
                        "first": first.format(g),
                        "second": second.format(g),
                        "certificate": format!("{certificate:?}"),
                    });
                }
                Separation::NoWitnessUpTo(d) => r.push(Verdict::unknown("separated", &d)),
            }
            Ok(emit(&r))
        }
        Topology::Converge { g, seq, target, sets } => {
            let ctx = Ctx::new(&g)?;
            let g = &ctx.graph;
            let seq: Vec<GeneralizedPath> = seq.split(',').map(|s| parse_general(g, s)).collect::<Result<_>>()?;
            let target = parse_general(g, &target)?;
            let family: Vec<BasicSet> = match sets {
                Some(s) => s.split(',').map(|b| parse_basic(g, b)).collect::<Result<_>>()?,
                None => {
                    let top = target.degree().meet(&ctx.window);
                    let known = target.known_degree().unwrap_or_else(|| top.clone());
                    let mut out = Vec::new();
                    for n in top.meet(&known).box_below() {
                        out.push(BasicSet::cylinder(target.prefix(g, &n)?));
                    }
                    out.sort_by_key(|b| b.format(g));
                    out.dedup();
                    out
                }
            };
            let rep = convergence_check(g, &seq, &target, &family)?;
            let mut r = ctx.report("topology converge");
            r.push(if rep.converges { Verdict::pass("converges") } else { Verdict::fail("converges", g.format_general(&target)) });
            r.data = json!({
                "sets": rep.entries.iter().map(|e| json!({
                    "set": e.set.format(g),
                    "contains_target": e.contains_target,
                    "threshold": e.threshold,
                })).collect::<Vec<_>>(),
            });
            Ok(emit(&r))
        }
    }
}

fn window_json(base: &KGraph, dw: &DesourcedWindow) -> Value {
    let g = &dw.graph;
    json!({
        "vertices": g.vertices().map(|v| g.vertex_name(v).to_string()).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(|e| json!({
            "name": e.name,
            "color": e.color + 1,
            "range": g.vertex_name(e.range),
            "source": g.vertex_name(e.source),
        })).collect::<Vec<_>>(),
        "pending": dw.pending.iter().map(|k| format!("{}@{}", base.vertex_name(k.0), k.1)).collect::<Vec<_>>(),
    })
}

fn desource(ctx: &Ctx, guard: Option<String>, check: bool, kg_out: Option<String>) -> Result<u8> {
    let base = ctx.base()?;
    let oracle = ctx.loaded.oracle();
    let ds = Desource::new(&base, oracle.as_ref());
    let guard = ctx.degree(&guard, Degree::new(vec![1; base.rank()]))?;
    let dw = materialize_window(&ds, &ctx.window, &guard)?;
    let mut r = AnalysisReport::new("desource", GraphMeta::of(&ctx.loaded.name, &dw.graph));
    r.window = Some(ctx.window.entries().to_vec());
    r.push(if dw.pending.is_empty() { Verdict::pass("window") } else { Verdict::unknown("window", &ctx.window) });
    if check {
        r.push_properties("desource", &check_desourced(&ds, &dw)?, Some(&ctx.window));
        let shape = check_shape_properties(&base);
        let openness = shape.locally_convex && shape.exact;
        r.push_properties("shadow", &check_shadow(&ds, &dw, openness)?, Some(&ctx.window));
        if !openness {
            r.conventions.push("openness of the projection is checked only for locally convex graphs".into());
        }
    }
    r.data = window_json(&base, &dw);
    if let Some(path) = kg_out {
        fs::write(&path, write_kg(&dw.graph))?;
    }
    Ok(emit(&r))
}

fn heads(ctx: &Ctx) -> Result<u8> {
    let g = &ctx.graph;
    if g.rank() != 1 {
        bail!(usage("--iso-heads needs a 1-graph"));
    }
    let iso = add_heads_iso_1graph(g, ctx.window.get(0))?;
    let mut r = ctx.report("desource iso-heads");
    r.push(match iso.mismatches.first() {
        None => Verdict::pass("heads_isomorphism"),
        Some(m) => Verdict::fail("heads_isomorphism", m.clone()),
    });
    r.data = json!({
        "paths_checked": iso.paths_checked,
        "heads": { "vertices": iso.heads.vertex_count(), "edges": iso.heads.edge_count() },
        "window": { "vertices": iso.tilde.graph.vertex_count(), "edges": iso.tilde.graph.edge_count() },
    });
    Ok(emit(&r))
}

fn rep(ctx: &Ctx, verify: &str, max_family: usize, guard: Option<String>, dump: Option<String>) -> Result<u8> {
    let wanted: Vec<&str> = verify.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = wanted.iter().find(|w| !["ck", "diag", "spectrum", "diagram"].contains(w)) {
        bail!(usage(format!("unknown check `{bad}`")));
    }
    let base = ctx.base()?;
    let oracle = ctx.loaded.oracle();
    let ds = Desource::new(&base, oracle.as_ref());
    let guard = ctx.degree(&guard, Degree::new(vec![1; base.rank()]))?;
    let finite = !ctx.loaded.is_lazy() && base.is_acyclic() && !base.is_windowed();
    let needs_window = !finite || wanted.contains(&"diagram");
    let dw = if needs_window { Some(materialize_window(&ds, &ctx.window, &guard)?) } else { None };
    let (g, represented) = match (&dw, finite) {
        (_, true) => (base.clone(), "graph"),
        (Some(dw), false) => (dw.graph.truncated()?, "desourced window"),
        (None, false) => unreachable!(),
    };
    let rep = build_boundary_rep(&g)?;
    let mut r = AnalysisReport::new("rep", GraphMeta::of(&ctx.loaded.name, &g));
    r.window = Some(ctx.window.entries().to_vec());
    let mut data = serde_json::Map::new();
    data.insert("represents".into(), json!(represented));
    data.insert("dimension".into(), json!(rep.dim()));
    data.insert("basis".into(), paths_json(&g, &rep.basis));
    if wanted.contains(&"ck") {
        r.push_properties("ck", &verify_ck_family(&g, &rep, None)?, None);
    }
    if wanted.contains(&"diag") {
        let edges = rep.paths.iter().filter(|p| !p.is_vertex()).count() as f64;
        let estimate: f64 = (1..max_family).map(|j| (0..j).map(|i| (edges - i as f64) / (i + 1) as f64).product::<f64>()).sum();
        if estimate > 1e5 {
            bail!(usage(format!("about {estimate:.0} families of size {max_family} over {edges} paths; lower --max-family")));
        }
        let sweep = check_families(&g, &rep, max_family)?;
        r.push_properties("diag", &sweep.report, None);
        data.insert("families".into(), json!({ "checked": sweep.families, "distinct_vee": sweep.distinct }));
    }
    if wanted.contains(&"spectrum") {
        let s = spectrum_characters(&g, &rep)?;
        r.push_properties("spectrum", &s.report, None);
        data.insert("characters".into(), json!(s.characters.len()));
    }
    if let (true, Some(dw)) = (wanted.contains(&"diagram"), &dw) {
        r.push_properties("diagram", &diagram_commutation_check(&ds, dw)?, Some(&ctx.window));
    }
    if let Some(path) = dump {
        let mut out = String::new();
        for p in &rep.paths {
            out.push_str(&format!("S[{}]\n{}\n", g.format_path(p), rep.s(p).to_dense_text()));
        }
        fs::write(path, out)?;
    }
    r.data = Value::Object(data);
    Ok(emit(&r))
}

fn fixtures_cmd(f: Fixtures) -> Result<u8> {
    match f {
        Fixtures::List => {
            for (name, about) in BUILTINS {
                out(&format!("{name:<10} {about}\n"));
            }
        }
        Fixtures::Show(a) => {
            let loaded = load(&a.graph)?;
            match (&loaded.source, &a.window) {
                (Source::Lazy(gen), None) => out(&write_generator(gen)),
                _ => out(&write_kg(&Ctx::new(&a)?.graph)),
            }
        }
        Fixtures::Random { kind, seed, size, density, twist, restrict } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = match kind.as_str() {
                "dag" => fixtures::random_dag_1graph(&mut rng, size, density),
                "cycle" => fixtures::random_1graph(&mut rng, size),
                "product" => {
                    let opts = ProductOptions { n1: size, n2: size, density, twist, restrict };
                    fixtures::random_product_2graph(&mut rng, &opts)
                }
                other => bail!(usage(format!("unknown kind `{other}`"))),
            };
            out(&write_kg(&g));
        }
    }
    Ok(0)
}
