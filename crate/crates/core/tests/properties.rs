use kgraph::alignment::{boundary_paths, mce};
use kgraph::desource::Desource;
use kgraph::fixtures::{random_1graph, random_product_2graph, ProductOptions};
use kgraph::kgfile::{parse_kg, write_kg, KgDocument};
use kgraph::matrix::Matrix;
use kgraph::pathspace::cylinder_intersection;
use kgraph::report::{AnalysisReport, GraphMeta, Verdict};
use kgraph::tails::SearchTails;
use kgraph::{Degree, GeneralizedPath, KGraph, Path};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn product(seed: u64, restrict: bool) -> KGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_product_2graph(&mut rng, &ProductOptions { n1: 3, n2: 3, density: 0.5, twist: true, restrict })
}

fn has_prefix(g: &KGraph, w: &Path, mu: &Path) -> bool {
    w.range() == mu.range() && mu.degree().leq(w.degree()) && g.segment(w, &Degree::zero(w.degree().rank()), mu.degree()).unwrap() == *mu
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unique_factorization(seed in 0u64..10_000) {
        let g = product(seed, false);
        for p in g.all_paths().unwrap() {
            for m in p.degree().box_below() {
                let zero = Degree::zero(2);
                let head = g.segment(&p, &zero, &m).unwrap();
                let tail = g.segment(&p, &m, p.degree()).unwrap();
                prop_assert_eq!(g.compose(&head, &tail).unwrap(), p.clone());
                prop_assert_eq!(head.degree(), &m);
            }
        }
    }

    #[test]
    fn mce_is_symmetric_and_minimal(seed in 0u64..10_000) {
        let g = product(seed, true);
        let paths = g.all_paths().unwrap();
        for a in paths.iter().take(30) {
            for b in paths.iter().filter(|b| b.range() == a.range()).take(10) {
                let mut ab = mce(&g, a, b).unwrap();
                let mut ba = mce(&g, b, a).unwrap();
                ab.sort();
                ba.sort();
                prop_assert_eq!(&ab, &ba);
                for l in &ab {
                    prop_assert_eq!(l.degree(), &a.degree().join(b.degree()));
                    prop_assert!(has_prefix(&g, l, a) && has_prefix(&g, l, b));
                }
            }
        }
    }

    #[test]
    fn cylinders_meet_in_mce(seed in 0u64..10_000) {
        let g = product(seed, false);
        let paths = g.all_paths().unwrap();
        for a in paths.iter().take(12) {
            for b in paths.iter().filter(|b| b.range() == a.range()).take(6) {
                let meet = cylinder_intersection(&g, &[a.clone(), b.clone()]).unwrap();
                for w in paths.iter().filter(|w| w.range() == a.range()) {
                    let both = has_prefix(&g, w, a) && has_prefix(&g, w, b);
                    let via = meet.iter().any(|l| has_prefix(&g, w, l));
                    prop_assert_eq!(both, via);
                }
            }
        }
    }

    #[test]
    fn canonical_classes(seed in 0u64..10_000) {
        let g = product(seed, true);
        let ds = Desource::new(&g, &SearchTails);
        let top = Degree::new(vec![2, 2]);
        for x in boundary_paths(&g).unwrap().into_iter().take(8) {
            let x = GeneralizedPath::Finite(x);
            for n in top.box_below() {
                for m in n.box_below() {
                    let a = ds.canon_morph(&x, &m, &n).unwrap();
                    prop_assert_eq!(a.degree(), &n.sub(&m));
                    // Source offset consistency.
                    let hi = x.degree().meet(&n);
                    prop_assert_eq!(n.sub(&hi), a.a.add(&a.b).sub(a.lambda.degree()));
                    // Composition of consecutive segments.
                    let p = n.add(&Degree::new(vec![1, 0]));
                    let whole = ds.canon_morph(&x, &m, &p).unwrap();
                    let second = ds.canon_morph(&x, &n, &p).unwrap();
                    let composed = ds.compose_d(&a, &second).unwrap();
                    prop_assert_eq!(composed.key(), whole.key());
                }
            }
        }
    }

    #[test]
    fn kg_round_trip(seed in 0u64..10_000, k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if k == 1 { random_1graph(&mut rng, 4) } else { product(seed, seed % 2 == 0) };
        let KgDocument::Graph(back) = parse_kg(&write_kg(&g)).unwrap() else { panic!("not a graph") };
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.square_list(), g.square_list());
        prop_assert_eq!(write_kg(&back), write_kg(&g));
    }

    #[test]
    fn matrix_laws(entries in proptest::collection::vec((0usize..5, 0usize..5, -2i64..3), 0..12),
                   other in proptest::collection::vec((0usize..5, 0usize..5, -2i64..3), 0..12)) {
        let a = Matrix::from_entries(5, entries);
        let b = Matrix::from_entries(5, other);
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &Matrix::identity(5), a);
    }

    #[test]
    fn report_round_trip(names in proptest::collection::vec("[a-z]{1,6}", 0..6), bound in 0u32..5) {
        let g = product(1, false);
        let mut r = AnalysisReport::new("check", GraphMeta::of("g", &g));
        for (i, n) in names.iter().enumerate() {
            r.push(match i % 3 {
                0 => Verdict::pass(n),
                1 => Verdict::unknown(n, &Degree::new(vec![bound, bound])),
                _ => Verdict::fail(n, "w"),
            });
        }
        let back: AnalysisReport = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert!(r.verdicts.iter().filter(|v| !v.exact).all(|v| v.bound.is_some()));
    }
}
