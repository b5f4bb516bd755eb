use kgraph::ckrep::*;
use kgraph::fixtures::*;
use kgraph::matrix::Matrix;
use kgraph::{Degree, KGraph, Path};

fn names(g: &KGraph, ps: &[Path]) -> Vec<String> {
    let mut v: Vec<String> = ps.iter().map(|p| g.format_path(p)).collect();
    v.sort();
    v
}

#[test]
fn src1_family() {
    let g = src1();
    let rep = build_boundary_rep(&g).unwrap();
    assert_eq!(names(&g, &rep.basis), ["e", "w"]);
    let e = g.parse_path("e").unwrap();
    let (ie, iw) = (rep.index_of(&e).unwrap(), rep.index_of(&g.parse_path("w").unwrap()).unwrap());
    assert_eq!(rep.s(&e), &Matrix::from_entries(2, [(ie, iw, 1)]));
    let sv = rep.s(&g.parse_path("v").unwrap());
    assert_eq!(sv, &Matrix::from_entries(2, [(ie, ie, 1)]));
    assert_eq!(rep.s(&g.parse_path("w").unwrap()), &Matrix::from_entries(2, [(iw, iw, 1)]));
    assert_eq!(&rep.s(&e).adjoint() * rep.s(&e), *rep.s(&g.parse_path("w").unwrap()));
    assert!((sv - &rep.range_projection(&e)).is_zero());

    let r = verify_ck_family(&g, &rep, None).unwrap();
    assert_eq!(r.violations(), 0, "{r:?}");
    assert!(r.get("ck4").unwrap().checked >= 1);

    let f = vec![g.parse_path("v").unwrap(), e.clone()];
    let d = diagonal_projections(&g, &rep, &f).unwrap();
    assert_eq!(names(&g, &d.vee), ["e", "v"]);
    let q = |name: &str| d.q.iter().find(|(p, _)| g.format_path(p) == name).unwrap().1.clone();
    assert!(q("v").is_zero());
    assert_eq!(&q("e"), rep.range_projection(&e));
    assert_eq!(d.report.violations(), 0);
    assert!(matches!(
        diagonal_projections(&g, &rep, &[e.clone()]),
        Err(kgraph::Error::RangeClosureViolation(_))
    ));

    let s = spectrum_characters(&g, &rep).unwrap();
    assert_eq!(s.characters.len(), 2);
    assert_eq!(s.report.violations(), 0, "{:?}", s.report);
    let pe = rep.range_projection(&e);
    for c in &s.characters {
        let x = c.path.clone().unwrap();
        let expected = if g.format_path(&x) == "e" { 1 } else { 0 };
        assert_eq!(pe.get(c.support[0], c.support[0]), expected);
    }
}

#[test]
fn trivial_family() {
    let g = triv();
    let rep = build_boundary_rep(&g).unwrap();
    assert_eq!(rep.dim(), 1);
    assert_eq!(rep.s(&g.parse_path("v").unwrap()), &Matrix::identity(1));
    assert_eq!(verify_ck_family(&g, &rep, None).unwrap().violations(), 0);
    assert_eq!(spectrum_characters(&g, &rep).unwrap().characters.len(), 1);
}

#[test]
fn omega_family() {
    let g = omega_finite(&Degree::new(vec![2, 2]));
    let rep = build_boundary_rep(&g).unwrap();
    assert_eq!(rep.dim(), 9);
    assert!(rep.basis.iter().all(|x| g.vertex_name(x.source()) == "(2,2)"));
    for mu in &rep.paths {
        assert_eq!(rep.s(mu).nnz(), 1);
    }
    let r = verify_ck_family(&g, &rep, None).unwrap();
    assert_eq!(r.violations(), 0, "{r:?}");
    // Every vertex except the far corner has a nontrivial exhaustive set.
    assert!(r.get("ck4").unwrap().checked >= 8);

    let v = g.vertex_by_name("(0,0)").unwrap();
    let mut f = vec![g.vertex_path(v)];
    f.extend(g.paths_up_to(v, &Degree::new(vec![1, 1])).unwrap().into_iter().filter(|p| p.degree().total() == 1));
    let d = diagonal_projections(&g, &rep, &f).unwrap();
    assert_eq!(d.vee.len(), 4);
    assert_eq!(d.report.violations(), 0);

    let s = spectrum_characters(&g, &rep).unwrap();
    assert_eq!(s.characters.len(), 9);
    assert_eq!(s.report.violations(), 0);
}

#[test]
fn families_are_range_closed() {
    let g = src1();
    let rep = build_boundary_rep(&g).unwrap();
    let fams = range_closed_families(&g, &rep.paths, 4);
    // {v}, {w}, {v, w}, {e, v}, {e, v, w}
    assert_eq!(fams.len(), 5);
    for f in fams {
        assert_eq!(diagonal_projections(&g, &rep, &f).unwrap().report.violations(), 0);
    }
}
