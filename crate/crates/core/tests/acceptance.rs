//! Acceptance criteria 1 to 9. Runs as a plain program and prints one line
//! per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kgraph::alignment::{
    boundary_status, check_shape_properties, leq_infty_membership, BoundaryOptions, BoundaryVerdict,
};
use kgraph::ckrep::{build_boundary_rep, check_families, diagram_commutation_check, spectrum_characters, verify_ck_family};
use kgraph::desource::checks::{check_desourced, check_shadow};
use kgraph::desource::heads::add_heads_iso_1graph;
use kgraph::desource::{leqinfty_representative, materialize_window, Desource, DesourcedWindow};
use kgraph::fixtures::{
    omega_finite, paper_ex, paper_ex_omega, paper_ex_x, random_1graph, random_product_2graph, src1, star, triv,
    PaperExTails, ProductOptions,
};
use kgraph::pathspace::{convergence_check, refine_base, BasicSet};
use kgraph::tails::{SearchTails, TailOracle};
use kgraph::tally::PropertyReport;
use kgraph::{Degree, GeneralizedPath, KGraph, Path};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn d(v: &[u32]) -> Degree {
    Degree::new(v.to_vec())
}

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    summary: String,
    /// Set when the failure is the recorded one and nothing else.
    known_failure: bool,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome { pass, summary: summary.into(), known_failure: false }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let t = start.elapsed();
    out.summary = format!("{} [{:.2}s]", out.summary, t.as_secs_f64());
    if let Some(limit) = limit {
        if t > limit {
            out.pass = false;
            out.known_failure = false;
            out.summary.push_str(&format!(" over the {}s limit", limit.as_secs()));
        }
    }
    out
}

fn report_line(r: &PropertyReport) -> String {
    let bad: Vec<String> = r
        .checks
        .iter()
        .filter(|t| t.violations > 0)
        .map(|t| format!("{}={} ({})", t.name, t.violations, t.examples.first().cloned().unwrap_or_default()))
        .collect();
    if bad.is_empty() {
        format!("{} checks clean", r.checks.iter().map(|t| t.checked).sum::<usize>())
    } else {
        bad.join("; ")
    }
}

/// Independent prefix test: `w(0, d(mu)) = mu`.
fn has_prefix(g: &KGraph, w: &GeneralizedPath, mu: &Path) -> bool {
    if w.range() != mu.range() || !w.degree().dominates(mu.degree()) {
        return false;
    }
    w.prefix(g, mu.degree()).map(|p| &p == mu).unwrap_or(false)
}

fn in_basic(g: &KGraph, w: &GeneralizedPath, mu: &Path, excluded: &[Path]) -> bool {
    has_prefix(g, w, mu) && excluded.iter().all(|nu| !has_prefix(g, w, &g.compose(mu, nu).unwrap()))
}

// 1. The non-locally-convex example at windows (N, 1).
fn criterion1() -> Outcome {
    let mut problems = Vec::new();
    for n in 3..=8usize {
        let g = paper_ex(n);
        let x = paper_ex_x(&g).unwrap();
        let leq = leq_infty_membership(&g, &x).unwrap();
        let got: BTreeSet<(Degree, usize, String)> =
            leq.witnesses.iter().map(|(m, i, e)| (m.clone(), *i, g.edge(*e).name.clone())).collect();
        let want: BTreeSet<(Degree, usize, String)> = (0..=n).map(|j| (d(&[j as u32, 0]), 1, format!("f_{j}"))).collect();
        if leq.member || got != want {
            problems.push(format!("N={n}: x member={} witnesses={got:?}", leq.member));
        }
        for m in 0..=n {
            let w = GeneralizedPath::Finite(paper_ex_omega(&g, m).unwrap());
            if !leq_infty_membership(&g, &w).unwrap().member {
                problems.push(format!("N={n}: omega^{m} not in the dead-end set"));
            }
        }
        let opts = BoundaryOptions::new(d(&[1, 1]));
        match boundary_status(&g, &x, &opts).unwrap() {
            BoundaryVerdict::NotRefutedUpTo(_) => {}
            other => problems.push(format!("N={n}: boundary status {other:?}")),
        }
        let seq: Vec<GeneralizedPath> = (0..=n).map(|m| GeneralizedPath::Finite(paper_ex_omega(&g, m).unwrap())).collect();
        let family: Vec<BasicSet> = (1..=n).map(|m| BasicSet::cylinder(x.prefix(&g, &d(&[m as u32, 0])).unwrap())).collect();
        let conv = convergence_check(&g, &seq, &x, &family).unwrap();
        let thresholds: Vec<Option<usize>> = conv.entries.iter().map(|e| e.threshold).collect();
        let want: Vec<Option<usize>> = (1..=n).map(Some).collect();
        if !conv.converges || thresholds != want {
            problems.push(format!("N={n}: convergence thresholds {thresholds:?}"));
        }
    }
    Outcome::new(problems.is_empty(), if problems.is_empty() { "6 windows agree".into() } else { problems.join("; ") })
}

fn lc_product(rng: &mut ChaCha8Rng) -> KGraph {
    loop {
        let n1 = 2 + (rand_chacha::rand_core::RngCore::next_u32(rng) % 5) as usize;
        let n2 = 2 + (rand_chacha::rand_core::RngCore::next_u32(rng) % 5) as usize;
        let opts = ProductOptions { n1, n2, density: 0.4, twist: true, restrict: false };
        let g = random_product_2graph(rng, &opts);
        let s = check_shape_properties(&g);
        if s.locally_convex && s.row_finite && g.vertex_count() <= 40 && g.edge_count() > 0 {
            return g;
        }
    }
}

// 2. Dead-end paths and boundary paths agree on locally convex graphs.
fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut compared = 0;
    let mut problems = Vec::new();
    for i in 0..50 {
        let g = lc_product(&mut rng);
        let opts = BoundaryOptions::exhaustive_for(&g);
        for p in g.all_paths().unwrap() {
            let x = GeneralizedPath::Finite(p.clone());
            let leq = leq_infty_membership(&g, &x).unwrap();
            let bd = boundary_status(&g, &x, &opts).unwrap();
            compared += 1;
            if !leq.exact || leq.member != matches!(bd, BoundaryVerdict::Boundary) || matches!(bd, BoundaryVerdict::NotRefutedUpTo(_)) {
                problems.push(format!("graph {i}: {} leq={} boundary={bd:?}", g.format_path(&p), leq.member));
            }
        }
    }
    let g = paper_ex(6);
    let x = paper_ex_x(&g).unwrap();
    let strict = !leq_infty_membership(&g, &x).unwrap().member
        && matches!(boundary_status(&g, &x, &BoundaryOptions::new(d(&[1, 1]))).unwrap(), BoundaryVerdict::NotRefutedUpTo(_));
    if !strict {
        problems.push("x does not separate the two sets".into());
    }
    let ok = problems.is_empty();
    Outcome::new(ok, if ok { format!("{compared} paths agree on 50 graphs; x is unrefuted and not a dead end") } else { problems.join("; ") })
}

/// Paths from `v` of degree at most `cap` that lie inside the window.
fn window_paths(g: &KGraph, v: kgraph::VertexId, cap: &Degree) -> Vec<Path> {
    cap.box_below().iter().filter_map(|m| g.enumerate_paths(v, m).ok()).flatten().collect()
}

fn refine_all(g: &KGraph, cap: &Degree, universe_cap: &Degree, extra: &[GeneralizedPath]) -> (usize, usize, Vec<String>) {
    let mut triples = 0;
    let mut verified = 0;
    let mut problems = Vec::new();
    for v in g.vertices() {
        let mus = window_paths(g, v, cap);
        let universe = window_paths(g, v, universe_cap);
        let mut universe: Vec<GeneralizedPath> = universe.into_iter().map(GeneralizedPath::Finite).collect();
        universe.extend(extra.iter().filter(|x| x.range() == v).cloned());
        for mu in &mus {
            let exts: Vec<Path> = window_paths(g, mu.source(), cap).into_iter().filter(|p| !p.is_vertex()).collect();
            let mut families: Vec<Vec<Path>> = vec![Vec::new()];
            for (i, a) in exts.iter().enumerate() {
                families.push(vec![a.clone()]);
                for b in &exts[i + 1..] {
                    families.push(vec![a.clone(), b.clone()]);
                }
            }
            for fam in families {
                let b = BasicSet::new(mu.clone(), fam.clone()).unwrap();
                for lambda in universe.iter().filter(|w| w.degree().to_finite().is_some_and(|m| m.leq(cap))) {
                    if !in_basic(g, lambda, mu, &fam) {
                        continue;
                    }
                    triples += 1;
                    let r = match refine_base(g, lambda, &b) {
                        Ok(r) => r,
                        Err(e) => {
                            problems.push(format!("{}: {e}", b.format(g)));
                            continue;
                        }
                    };
                    if !in_basic(g, lambda, &r.alpha, &r.f) {
                        problems.push(format!("{} not in refinement of {}", g.format_general(lambda), b.format(g)));
                    }
                    for w in &universe {
                        verified += 1;
                        if in_basic(g, w, &r.alpha, &r.f) && !in_basic(g, w, mu, &fam) {
                            problems.push(format!("{} escapes {}", g.format_general(w), b.format(g)));
                        }
                    }
                }
            }
        }
    }
    (triples, verified, problems)
}

// 3. Base refinement on OM22 and the example window.
fn criterion3() -> Outcome {
    let cap = d(&[2, 2]);
    let (t1, v1, mut problems) = refine_all(&omega_finite(&cap), &cap, &cap, &[]);
    let px = paper_ex(5);
    let (t2, v2, p2) = refine_all(&px, &cap, &d(&[4, 2]), &[paper_ex_x(&px).unwrap()]);
    problems.extend(p2);
    let ok = problems.is_empty();
    Outcome::new(
        ok,
        if ok {
            format!("{t1} + {t2} triples, {} containment checks, 0 violations", v1 + v2)
        } else {
            format!("{} violations: {}", problems.len(), problems.into_iter().take(3).collect::<Vec<_>>().join("; "))
        },
    )
}

struct Fixture {
    name: String,
    graph: KGraph,
    oracle: Box<dyn TailOracle>,
    window: Degree,
}

fn random_row_finite(rng: &mut ChaCha8Rng) -> KGraph {
    let n1 = 3 + (rand_chacha::rand_core::RngCore::next_u32(rng) % 2) as usize;
    let opts = ProductOptions { n1, n2: 3, density: 0.45, twist: true, restrict: true };
    random_product_2graph(rng, &opts)
}

/// SRC1 at 3, the example at (3, 1) and 20 random 2-graphs at (2, 2).
fn desource_fixtures() -> Vec<Fixture> {
    let mut out = vec![
        Fixture { name: "src1".into(), graph: src1(), oracle: Box::new(SearchTails), window: d(&[3]) },
        Fixture { name: "paper-ex".into(), graph: paper_ex(7), oracle: Box::new(PaperExTails), window: d(&[3, 1]) },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..20 {
        out.push(Fixture {
            name: format!("random {i}"),
            graph: random_row_finite(&mut rng),
            oracle: Box::new(SearchTails),
            window: d(&[2, 2]),
        });
    }
    out
}

fn with_window<T>(f: &Fixture, run: impl FnOnce(&Desource, &DesourcedWindow) -> T) -> T {
    let ds = Desource::new(&f.graph, f.oracle.as_ref());
    let guard = Degree::new(vec![1; f.graph.rank()]);
    let dw = materialize_window(&ds, &f.window, &guard).unwrap();
    run(&ds, &dw)
}

/// The window of SRC1 at 3 is a chain of 5 vertices: checked from the shape
/// alone.
fn is_chain(g: &KGraph, len: usize) -> bool {
    let n = g.vertex_count();
    let mut out_deg = vec![0; n];
    let mut in_deg = vec![0; n];
    for e in g.edges() {
        out_deg[e.range as usize] += 1;
        in_deg[e.source as usize] += 1;
    }
    n == len
        && g.edge_count() == len - 1
        && g.is_acyclic()
        && out_deg.iter().all(|&x| x <= 1)
        && in_deg.iter().all(|&x| x <= 1)
        && in_deg.iter().filter(|&&x| x == 0).count() == 1
}

// 4. Desourcification.
fn criterion4() -> Outcome {
    let mut problems = Vec::new();
    let mut identity_only = Vec::new();
    let mut checked = 0;
    for f in desource_fixtures() {
        let r = with_window(&f, |ds, dw| {
            if f.name == "src1" && !is_chain(&dw.graph, 5) {
                problems.push("src1 window is not the 5-vertex chain".to_string());
            }
            check_desourced(ds, dw).unwrap()
        });
        checked += r.checks.iter().map(|t| t.checked).sum::<usize>();
        if r.violations_except(&["mce_count_identity"]) > 0 {
            problems.push(format!("{}: {}", f.name, report_line(&r)));
        } else if r.violations() > 0 {
            identity_only.push(format!("{}: {}", f.name, report_line(&r)));
        }
    }
    let pass = problems.is_empty() && identity_only.is_empty();
    let mut out = Outcome::new(pass, {
        let mut all = problems.clone();
        all.extend(identity_only.iter().cloned());
        if all.is_empty() { format!("22 windows, {checked} checks clean") } else { all.join("; ") }
    });
    // The equality form of the MCE count identity fails wherever a head
    // edge meets an embedded edge, while its upper bound holds. That is the
    // only expected failure, and the example window must exhibit it.
    out.known_failure = problems.is_empty() && identity_only.iter().any(|s| s.starts_with("paper-ex:"));
    out
}

// 5. The head construction of a 1-graph.
fn criterion5() -> Outcome {
    let mut graphs = vec![("src1".to_string(), src1()), ("star".to_string(), star())];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..20 {
        let n = 2 + (rand_chacha::rand_core::RngCore::next_u32(&mut rng) % 4) as usize;
        graphs.push((format!("random {i}"), random_1graph(&mut rng, n)));
    }
    let mut problems = Vec::new();
    let mut paths = 0;
    for (name, g) in &graphs {
        let iso = add_heads_iso_1graph(g, 4).unwrap();
        paths += iso.paths_checked;
        if !iso.verified() {
            problems.push(format!("{name}: {}", iso.mismatches[0]));
        }
    }
    let ok = problems.is_empty();
    Outcome::new(ok, if ok { format!("22 graphs, {paths} paths matched") } else { problems.join("; ") })
}

/// `(x(m∧d(x), n∧d(x)), m − m∧d(x), n − m)` computed from the definitions.
fn triple(g: &KGraph, x: &GeneralizedPath, m: &Degree, n: &Degree) -> (Path, Degree, Degree) {
    let dx = x.degree();
    let (lo, hi) = (dx.meet(m), dx.meet(n));
    (x.segment(g, &lo, &hi).unwrap(), m.sub(&lo), n.sub(m))
}

// 6. Dead-end representatives on the example.
fn criterion6() -> Outcome {
    let g = paper_ex(7);
    let ds = Desource::new(&g, &PaperExTails);
    let x = paper_ex_x(&g).unwrap();
    let top = d(&[3, 1]);
    let mut problems = Vec::new();
    let mut pairs = 0;
    for n in top.box_below() {
        for m in n.box_below() {
            pairs += 1;
            match leqinfty_representative(&ds, &x, &m, &n, &d(&[2, 1])) {
                Ok(rep) => {
                    let leq = leq_infty_membership(&g, &rep.y).unwrap();
                    if !(leq.member && leq.exact) {
                        problems.push(format!("({m},{n}): {} is not a dead end", g.format_general(&rep.y)));
                    }
                    if triple(&g, &x, &m, &n) != triple(&g, &rep.y, &m, &n) {
                        problems.push(format!("({m},{n}): classes differ for {}", g.format_general(&rep.y)));
                    }
                }
                Err(e) => problems.push(format!("({m},{n}): {e}")),
            }
        }
    }
    let ok = problems.is_empty();
    Outcome::new(ok, if ok { format!("{pairs} pairs (m, n) represented") } else { problems.join("; ") })
}

// 7. The windowed shadow of the homeomorphism.
fn criterion7() -> Outcome {
    let mut problems = Vec::new();
    let mut convex = 0;
    let mut checked = 0;
    for f in desource_fixtures() {
        let lc = check_shape_properties(&f.graph).locally_convex && !f.graph.is_windowed();
        convex += lc as usize;
        let r = with_window(&f, |ds, dw| check_shadow(ds, dw, lc).unwrap());
        checked += r.checks.iter().map(|t| t.checked).sum::<usize>();
        if r.violations() > 0 {
            problems.push(format!("{}: {}", f.name, report_line(&r)));
        }
    }
    let ok = problems.is_empty();
    Outcome::new(ok, if ok { format!("22 windows ({convex} locally convex), {checked} checks clean") } else { problems.join("; ") })
}

// 8. The boundary representation.
fn criterion8() -> Outcome {
    let mut graphs = vec![("triv".to_string(), triv()), ("src1".to_string(), src1()), ("om22".to_string(), omega_finite(&d(&[2, 2])))];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    while graphs.len() < 23 {
        let opts = ProductOptions { n1: 4, n2: 3, density: 0.5, twist: true, restrict: graphs.len() % 2 == 0 };
        let g = random_product_2graph(&mut rng, &opts);
        if build_boundary_rep(&g).unwrap().dim() <= 200 {
            graphs.push((format!("random {}", graphs.len() - 3), g));
        }
    }
    let mut problems = Vec::new();
    let (mut dims, mut vees) = (0, 0);
    for (name, g) in &graphs {
        let rep = build_boundary_rep(g).unwrap();
        dims += rep.dim();
        let ck = verify_ck_family(g, &rep, None).unwrap();
        if ck.violations() > 0 {
            problems.push(format!("{name} ck: {}", report_line(&ck)));
        }
        let sweep = check_families(g, &rep, 4).unwrap();
        vees += sweep.distinct;
        if sweep.report.violations() > 0 {
            problems.push(format!("{name} diag: {}", report_line(&sweep.report)));
        }
        let s = spectrum_characters(g, &rep).unwrap();
        if s.characters.len() != rep.dim() || s.report.violations() > 0 {
            problems.push(format!("{name} spectrum: {} characters, {}", s.characters.len(), report_line(&s.report)));
        }
    }
    let ok = problems.is_empty();
    Outcome::new(ok, if ok { format!("23 graphs, total dimension {dims}, {vees} joins checked") } else { problems.join("; ") })
}

// 9. Diagram commutation and the corner identity.
fn criterion9() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for f in desource_fixtures().into_iter().take(2) {
        let r = with_window(&f, |ds, dw| diagram_commutation_check(ds, dw).unwrap());
        checked += r.checks.iter().map(|t| t.checked).sum::<usize>();
        if r.violations() > 0 || r.get("corner_identity").is_none_or(|t| t.checked == 0) {
            problems.push(format!("{}: {}", f.name, report_line(&r)));
        }
    }
    let ok = problems.is_empty();
    Outcome::new(ok, if ok { format!("src1 and paper-ex, {checked} checks clean") } else { problems.join("; ") })
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>, Option<Duration>)> = vec![
        (1, Box::new(criterion1), Some(Duration::from_secs(5))),
        (2, Box::new(criterion2), Some(Duration::from_secs(60))),
        (3, Box::new(criterion3), None),
        (4, Box::new(criterion4), None),
        (5, Box::new(criterion5), None),
        (6, Box::new(criterion6), None),
        (7, Box::new(criterion7), None),
        (8, Box::new(criterion8), Some(Duration::from_secs(120))),
        (9, Box::new(criterion9), None),
    ];
    let mut unexpected = 0;
    for (n, f, limit) in criteria {
        let out = timed(limit, f);
        println!("criterion {n}: {} {}", if out.pass { "PASS" } else { "FAIL" }, out.summary);
        if out.known_failure {
            println!("criterion {n}: the failure above is the recorded one");
        }
        if !out.pass && !out.known_failure {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
