use kgraph::desource::checks::{check_desourced, check_shadow};
use kgraph::desource::heads::add_heads_iso_1graph;
use kgraph::desource::*;
use kgraph::fixtures::*;
use kgraph::tails::SearchTails;
use kgraph::{Degree, GeneralizedPath, KGraph};

fn d(v: &[u32]) -> Degree {
    Degree::new(v.to_vec())
}

fn fin(g: &KGraph, word: &str) -> GeneralizedPath {
    GeneralizedPath::Finite(g.parse_path(word).unwrap())
}

fn triple(g: &KGraph, m: &DMorph) -> (String, Degree, Degree) {
    (g.format_path(&m.lambda), m.a.clone(), m.b.clone())
}

#[test]
fn src1_classes() {
    let g = src1();
    let o = SearchTails;
    let ds = Desource::new(&g, &o);
    let e = fin(&g, "e");
    let v = ds.canon_vertex(&e, &d(&[0])).unwrap();
    assert_eq!((g.vertex_name(v.v), v.c.clone()), ("v", d(&[0])));
    let v = ds.canon_vertex(&e, &d(&[2])).unwrap();
    assert_eq!((g.vertex_name(v.v), v.c.clone()), ("w", d(&[1])));
    let v = ds.canon_vertex(&fin(&g, "w"), &d(&[3])).unwrap();
    assert_eq!((g.vertex_name(v.v), v.c.clone()), ("w", d(&[3])));

    let head = ds.canon_morph(&e, &d(&[1]), &d(&[2])).unwrap();
    assert_eq!(triple(&g, &head), ("w".into(), d(&[0]), d(&[1])));
    assert_eq!(head, ds.canon_morph(&fin(&g, "w"), &d(&[0]), &d(&[1])).unwrap());
    let iota_e = ds.embed_iota(&g.parse_path("e").unwrap()).unwrap();
    assert_eq!(ds.canon_morph(&e, &d(&[0]), &d(&[1])).unwrap(), iota_e);
    assert_eq!(triple(&g, &iota_e), ("e".into(), d(&[0]), d(&[1])));
    let id = ds.canon_morph(&e, &d(&[1]), &d(&[1])).unwrap();
    assert!(id.is_vertex());
    assert_eq!(ds.range_vertex(&id), ds.canon_vertex(&e, &d(&[1])).unwrap());

    let long = ds.compose_d(&iota_e, &head).unwrap();
    assert_eq!(triple(&g, &long), ("e".into(), d(&[0]), d(&[2])));
    let second = ds.canon_morph(&fin(&g, "w"), &d(&[1]), &d(&[2])).unwrap();
    let two = ds.compose_d(&head, &second).unwrap();
    assert_eq!(triple(&g, &two), ("w".into(), d(&[0]), d(&[2])));
    assert_eq!(ds.compose_d(&iota_e, &ds.identity(&ds.source_vertex(&iota_e).unwrap())).unwrap(), iota_e);

    assert_eq!(project_pi(&ds.canon_morph(&fin(&g, "w"), &d(&[1]), &d(&[2])).unwrap()), &g.parse_path("w").unwrap());
    assert_eq!(project_pi(&iota_e), &g.parse_path("e").unwrap());
}

#[test]
fn src1_window_is_a_chain() {
    let g = src1();
    let o = SearchTails;
    let ds = Desource::new(&g, &o);
    let dw = materialize_window(&ds, &d(&[3]), &d(&[1])).unwrap();
    let mut keys: Vec<(String, u32)> =
        dw.vertices.iter().map(|v| (g.vertex_name(v.v).to_string(), v.c.get(0))).collect();
    keys.sort();
    assert_eq!(keys, [("v".into(), 0), ("w".into(), 0), ("w".into(), 1), ("w".into(), 2), ("w".into(), 3)]);
    assert_eq!(dw.graph.edge_count(), 4);
    for v in dw.graph.vertices() {
        assert!(dw.graph.edges_into(v, 0).len() <= 1);
    }

    // A window path of degree 3 from v: e followed by the head.
    let x = dw.graph.enumerate_paths(dw.embedded(g.vertex_by_name("v").unwrap()).unwrap(), &d(&[3])).unwrap();
    assert_eq!(x.len(), 1);
    let proj = project_pi_infinite(&ds, &dw, &x[0]).unwrap();
    assert_eq!(g.format_path(&proj.prefix), "e");
    assert_eq!(proj.p_x, d(&[1]));
    let off = dw.graph.vertex_by_name("w@(1)").unwrap();
    let p = dw.graph.vertex_path(off);
    assert!(matches!(project_pi_infinite(&ds, &dw, &p), Err(kgraph::Error::RangeOutsideEmbedding)));

    let head = ds.canon_morph(&fin(&g, "w"), &d(&[0]), &d(&[1])).unwrap();
    let gl = g_lambda_fe(&ds, &dw, &head, &d(&[3])).unwrap();
    assert!(gl.set.is_empty());
    assert!(gl.verdict.is_yes());
    let iota_e = ds.embed_iota(&g.parse_path("e").unwrap()).unwrap();
    let gl = g_lambda_fe(&ds, &dw, &iota_e, &d(&[3])).unwrap();
    assert!(gl.tail.is_vertex());
    assert!(gl.verdict.is_yes());
}

#[test]
fn loop_window_has_no_offsets() {
    let g = loop_graph(2);
    let o = SearchTails;
    let ds = Desource::new(&g, &o);
    let dw = materialize_window(&ds, &d(&[3]), &d(&[1])).unwrap();
    assert_eq!(dw.graph.vertex_count(), g.vertex_count());
    assert_eq!(dw.graph.edge_count(), g.edge_count());
    assert!(dw.vertices.iter().all(|v| v.c.is_zero()));
    assert!(add_heads_iso_1graph(&g, 3).unwrap().verified());
}

#[test]
fn paper_example_classes() {
    let g = paper_ex(5);
    let o = PaperExTails;
    let ds = Desource::new(&g, &o);
    let m = ds.embed_iota(&g.parse_path("x_0 f_1").unwrap()).unwrap();
    assert_eq!(triple(&g, &m), ("x_0 f_1".into(), d(&[0, 0]), d(&[1, 1])));

    let x = paper_ex_x(&g).unwrap();
    let r = leqinfty_representative(&ds, &x, &d(&[0, 0]), &d(&[1, 0]), &d(&[2, 1])).unwrap();
    assert_eq!(r.y.as_finite().map(|p| g.format_path(p)).as_deref(), Some("x_0 omega_1"));
    assert_eq!(r.q, d(&[1, 0]));
    assert_eq!(r.stalled, [1]);
    assert_eq!(g.format_path(&r.mu), "omega_1");
    let r = leqinfty_representative(&ds, &x, &d(&[0, 0]), &d(&[0, 0]), &d(&[2, 1])).unwrap();
    assert_eq!(r.y.as_finite().map(|p| g.format_path(p)).as_deref(), Some("omega_0"));

    let dw = materialize_window(&ds, &d(&[3, 1]), &d(&[1, 1])).unwrap();
    let a = ds.canon_morph(&fin(&g, "x_0 omega_1"), &d(&[0, 0]), &d(&[1, 1])).unwrap();
    assert_eq!(triple(&g, &a), ("x_0".into(), d(&[0, 0]), d(&[1, 1])));
    let gl = g_lambda_fe(&ds, &dw, &a, &d(&[3, 1])).unwrap();
    let names: Vec<String> = gl.set.iter().map(|m| g.format_path(&m.lambda)).collect();
    assert_eq!(names, ["f_1"]);
    // Paths such as x_1 meet f_1 without extending it, so the search stops
    // at the bound with no counterexample.
    assert_eq!(gl.verdict, kgraph::alignment::ExhaustiveVerdict::UnknownUpTo(d(&[3, 1])));
}

#[test]
fn src1_window_properties() {
    let g = src1();
    let o = SearchTails;
    let ds = Desource::new(&g, &o);
    let dw = materialize_window(&ds, &d(&[3]), &d(&[1])).unwrap();
    let r = check_desourced(&ds, &dw).unwrap();
    assert_eq!(r.violations(), 0, "{r:?}");
    let s = check_shadow(&ds, &dw, true).unwrap();
    assert_eq!(s.violations(), 0, "{s:?}");
    assert!(s.checks.iter().all(|t| t.checked > 0));
}

#[test]
fn paper_example_count_identity_fails_only_as_an_equality() {
    let g = paper_ex(6);
    let o = PaperExTails;
    let ds = Desource::new(&g, &o);
    let dw = materialize_window(&ds, &d(&[3, 1]), &d(&[1, 1])).unwrap();
    let r = check_desourced(&ds, &dw).unwrap();
    assert_eq!(r.violations_except(&["mce_count_identity"]), 0, "{r:?}");
    let count = r.get("mce_count_identity").unwrap();
    assert!(count.violations > 0);
    assert!(count.examples[0].contains("f_0"));
    assert_eq!(r.get("mce_count_bound").unwrap().violations, 0);
}
