use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use homlab::approx::{is_t_approximation, quotient_approximation, theta_oracle};
use homlab::canon::canonical_code;
use homlab::generators::{graphs_up_to, random_high_girth, subdivision_closure};
use homlab::hom::{core, hom_equivalent, hom_exists, is_core, HomSearchConfig};
use homlab::io::{format_auto, parse};
use homlab::ops::{categorical_product, disjoint_union, is_connected, subdivide};
use homlab::sparsity::{girth, low_td_coloring, Girth};
use homlab::{Graph, Signature, Structure, ToStructure};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| *e);
            Graph::new(n, edges).unwrap()
        })
    })
}

fn ternary(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        let tuple = proptest::collection::vec(0..n, 3);
        let edge = proptest::collection::vec(0..n, 2);
        (proptest::collection::vec(tuple, 0..5), proptest::collection::vec(edge, 0..5)).prop_map(move |(ts, es)| {
            let sig = Signature::new([("R", 3), ("E", 2)]).unwrap();
            let tuples = ts.into_iter().map(|t| (0, t)).chain(es.into_iter().map(|e| (1, e)));
            Structure::from_tuples(sig, n, tuples).unwrap()
        })
    })
}

fn cfg() -> HomSearchConfig {
    HomSearchConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_code_ignores_labels(s in ternary(6), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..s.order()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(canonical_code(&s).unwrap(), canonical_code(&s.relabel(&perm)).unwrap());
    }

    #[test]
    fn equal_codes_mean_isomorphic(a in graph(5), b in graph(5)) {
        if canonical_code(&a).unwrap() == canonical_code(&b).unwrap() {
            let both = a.order() == b.order() && a.edge_count() == b.edge_count();
            prop_assert!(both);
            let iso = hom_exists(&a, &b, &cfg().injective()).unwrap();
            prop_assert!(iso.is_some());
        }
    }

    #[test]
    fn core_is_a_hom_equivalent_retract(g in graph(7)) {
        let c = core(&g).unwrap();
        prop_assert!(is_core(&c.core, &cfg()).unwrap());
        prop_assert!(c.retraction.is_valid(&g, &c.core));
        for (i, &x) in c.embedding.iter().enumerate() {
            prop_assert_eq!(c.retraction.apply(x), i);
        }
        prop_assert!(hom_equivalent(&g, &c.core, &cfg()).unwrap());
    }

    #[test]
    fn structure_cores_are_cores(s in ternary(5)) {
        let c = core(&s).unwrap();
        prop_assert!(is_core(&c.core, &cfg()).unwrap());
        prop_assert!(c.retraction.is_valid(&s, &c.core));
    }

    #[test]
    fn product_is_a_meet(x in graph(4), a in graph(4), b in graph(4)) {
        let p = categorical_product(&a, &b).unwrap();
        let into_p = hom_exists(&x, &p, &cfg()).unwrap().is_some();
        let both = hom_exists(&x, &a, &cfg()).unwrap().is_some() && hom_exists(&x, &b, &cfg()).unwrap().is_some();
        prop_assert_eq!(into_p, both);
    }

    #[test]
    fn connected_source_into_union(x in graph(4), a in graph(4), b in graph(4)) {
        let xs = x.to_structure().into_owned();
        prop_assume!(is_connected(&xs));
        let u = disjoint_union(&a, &b).unwrap();
        let into_u = hom_exists(&x, &u, &cfg()).unwrap().is_some();
        let either = hom_exists(&x, &a, &cfg()).unwrap().is_some() || hom_exists(&x, &b, &cfg()).unwrap().is_some();
        prop_assert_eq!(into_u, either);
    }

    #[test]
    fn subdivision_counts(g in graph(6), k in 0usize..4) {
        let s = subdivide(&g, k).unwrap();
        prop_assert_eq!(s.order(), g.order() + k * g.edge_count());
        prop_assert_eq!(s.edge_count(), (k + 1) * g.edge_count());
        if let Girth::Finite(l) = girth(&g) {
            prop_assert_eq!(girth(&s), Girth::Finite(l * (k + 1)));
        }
    }

    #[test]
    fn text_round_trip(s in ternary(6), g in graph(8)) {
        prop_assert_eq!(parse(&format_auto(&s)).unwrap().into_structure(), s);
        let back = parse(&format_auto(&g.to_structure())).unwrap();
        prop_assert_eq!(back.as_graph(), Some(&g));
    }

    #[test]
    fn low_td_colorings_are_valid(g in graph(9), t in 1usize..4) {
        let c = low_td_coloring(&g, t).unwrap();
        prop_assert!(c.is_valid(&g).unwrap());
    }

    #[test]
    fn quotient_is_an_approximation(g in graph(7), t in 2usize..4) {
        let (r, trace) = quotient_approximation(&g, t, &cfg()).unwrap();
        prop_assert!(r.forward.is_valid(&g, &r.approx));
        prop_assert!(is_t_approximation(&g, &r.approx, t, &cfg()).unwrap().holds);
        prop_assert_eq!(trace.classes.len(), r.approx.order());
    }

    #[test]
    fn quotient_handles_ternary_relations(s in ternary(6)) {
        let (r, _) = quotient_approximation(&s, 3, &cfg()).unwrap();
        prop_assert!(is_t_approximation(&s, &r.approx, 3, &cfg()).unwrap().holds);
    }

    #[test]
    fn random_high_girth_is_reproducible(n in 4usize..12, g in 3usize..7, seed in any::<u64>()) {
        let a = random_high_girth(n, g, 6, seed, 3.0).unwrap().unwrap();
        let b = random_high_girth(n, g, 6, seed, 3.0).unwrap().unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(girth(&a) >= Girth::Finite(g));
    }
}

#[test]
fn theta_is_monotone_in_t() {
    for g in graphs_up_to(1, 5).unwrap() {
        let mut last = 0;
        for t in 1..=4 {
            let r = theta_oracle(&g, t, g.order(), &cfg()).unwrap().found().unwrap();
            assert!(r.approx.order() >= last, "{g:?} at t = {t}");
            assert!(r.forward.is_valid(&g, &r.approx));
            last = r.approx.order();
        }
    }
}

#[test]
fn theta_is_minimal() {
    let sample = graphs_up_to(1, 4).unwrap();
    for g in &sample {
        for t in 1..=4 {
            let r = theta_oracle(g, t, g.order(), &cfg()).unwrap().found().unwrap();
            for smaller in sample.iter().filter(|b| b.order() < r.approx.order()) {
                assert!(!is_t_approximation(g, smaller, t, &cfg()).unwrap().holds);
            }
        }
    }
}

#[test]
fn theta_is_a_hom_equivalence_invariant() {
    for g in graphs_up_to(1, 4).unwrap() {
        let padded = disjoint_union(&g, &core(&g).unwrap().core).unwrap();
        for t in 1..=3 {
            let a = theta_oracle(&g, t, 6, &cfg()).unwrap().found().unwrap();
            let b = theta_oracle(&padded, t, 6, &cfg()).unwrap().found().unwrap();
            assert_eq!(a.approx.order(), b.approx.order(), "{g:?} at t = {t}");
        }
    }
}

#[test]
fn small_random_graphs_cannot_beat_two_colors() {
    let g = random_high_girth(5, 6, 50, 7, 3.0).unwrap().unwrap();
    assert!(girth(&g) >= Girth::Finite(6));
    assert_eq!(homlab::hom::chromatic_number(&g).unwrap(), if g.edge_count() > 0 { 2 } else { 1 });
    let any = random_high_girth(8, 3, 10, 1, 3.0).unwrap().unwrap();
    assert_eq!(any.order(), 8);
}

#[test]
fn triangle_subdivision_closure() {
    let closure = subdivision_closure(&[Graph::complete(3)], 2, 9).unwrap();
    let orders: Vec<usize> = closure.iter().map(|(g, _)| g.order()).collect();
    assert_eq!(orders, (3..=9).collect::<Vec<_>>());
    for (g, cert) in &closure {
        assert_eq!(girth(g), Girth::Finite(g.order()));
        assert!(cert.lengths.iter().all(|&l| (1..=3).contains(&l)));
        assert!(cert.certifies(&g.to_structure()).unwrap());
    }
}
