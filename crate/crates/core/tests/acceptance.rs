//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure. Independent brute-force oracles live in `common`.

mod common;

use std::ops::ControlFlow;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use homlab::approx::{is_t_approximation, quotient_approximation, theta_oracle};
use homlab::duality::{dual_construct, ghrv_instance, theta_product_bound, verify_duality, ApproxStrategy};
use homlab::generators::{enumerate, graphs_up_to, GeneratorSpec};
use homlab::hom::{chromatic_number, for_each_hom, hom_count, hom_exists, is_subgraph_isomorphic, HomSearchConfig};
use homlab::ops::{pre_set_keeping_loops, subdivide};
use homlab::sparsity::{chi_t_exact, dvorak_threshold, odd_girth, tree_depth};
use homlab::{Graph, Signature, Structure, ToStructure};

use common::{adjacency, forest_tree_depth, naive_chromatic, naive_hom_count, rooted_forests};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: homlab::Error) -> String {
    err.to_string()
}

/// The graph itself, its reversal, and two seeded shuffles.
fn relabelings(g: &Graph, seed: u64) -> Vec<Graph> {
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![g.clone(), g.relabel(&(0..n).rev().collect::<Vec<_>>())];
    for _ in 0..2 {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        out.push(g.relabel(&p));
    }
    out
}

fn hom_oracle_equivalence() -> Outcome {
    let cfg = HomSearchConfig::default();
    let graphs = graphs_up_to(1, 4).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pairs = 0;
    for a in &graphs {
        for b in &graphs {
            let mut variants = vec![(a.clone(), b.clone())];
            for _ in 0..3 {
                let mut pa: Vec<usize> = (0..a.order()).collect();
                let mut pb: Vec<usize> = (0..b.order()).collect();
                pa.shuffle(&mut rng);
                pb.shuffle(&mut rng);
                variants.push((a.relabel(&pa), b.relabel(&pb)));
            }
            for (x, y) in variants {
                let expected = naive_hom_count(&adjacency(&x), &adjacency(&y));
                let found = hom_exists(&x, &y, &cfg).map_err(e)?;
                check(found.is_some() == (expected > 0), || format!("existence disagrees on {x:?} -> {y:?}"))?;
                if let Some(h) = found {
                    check(h.is_valid(&x, &y), || "invalid witness".into())?;
                }
                let counted = hom_count(&x, &y).map_err(e)?;
                check(counted == expected as u128, || format!("count {counted} vs {expected}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} classes, {pairs} labelled pairs agree with full-map enumeration", graphs.len()))
}

fn ghrv_exhaustive() -> Outcome {
    let sample = enumerate(&GeneratorSpec::all_digraphs(4)).map_err(e)?;
    let cfg = HomSearchConfig::default();
    for k in 1..=3 {
        let v = verify_duality(&ghrv_instance(k).map_err(e)?, &sample, &cfg).map_err(e)?;
        check(v.holds, || format!("k = {k} fails ({:?})", v.direction))?;
        check(v.family_avoids_dual == Some(true), || format!("k = {k}: path maps to tournament"))?;
    }
    Ok(format!("k = 1, 2, 3 hold over {} ({} digraphs)", sample.description(), sample.len()))
}

fn pre_lemma() -> Outcome {
    let cfg = HomSearchConfig::default();
    let graphs = graphs_up_to(1, 5).map_err(e)?;
    let mut pairs = 0;
    for f in &graphs {
        let pre = pre_set_keeping_loops(&f.to_structure()).map_err(e)?;
        for g in &graphs {
            let lhs = hom_exists(f, g, &cfg).map_err(e)?.is_some();
            let mut rhs = is_subgraph_isomorphic(f, g, &cfg).map_err(e)?;
            for p in &pre {
                if rhs {
                    break;
                }
                rhs = hom_exists(p, g, &cfg).map_err(e)?.is_some();
            }
            check(lhs == rhs, || format!("decomposition fails for {f:?} -> {g:?}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs of graphs with <= 5 vertices"))
}

fn tree_depth_oracle() -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        let forests = rooted_forests(n);
        for g in graphs_up_to(n, n).map_err(e)? {
            for h in relabelings(&g, n as u64) {
                let fast = tree_depth(&h).map_err(e)?;
                let slow = forest_tree_depth(&h, &forests);
                check(fast == slow, || format!("td {fast} vs forest {slow} on {h:?}"))?;
                count += 1;
            }
        }
    }
    let p4 = tree_depth(&Graph::path(4)).map_err(e)?;
    let k5 = tree_depth(&Graph::complete(5)).map_err(e)?;
    check(p4 == 3 && k5 == 5, || format!("td(P4) = {p4}, td(K5) = {k5}"))?;
    Ok(format!("{count} labelled graphs (208 classes, <= 6 vertices); td(P4) = 3, td(K5) = 5"))
}

fn chi_t_sanity() -> Outcome {
    let mut count = 0;
    for g in graphs_up_to(1, 6).map_err(e)? {
        let chi = naive_chromatic(&g);
        for h in relabelings(&g, 17) {
            let chi1 = chi_t_exact(&h, 1).map_err(e)?;
            check(chi1 == chi, || format!("chi_1 {chi1} vs chi {chi} on {h:?}"))?;
            check(chromatic_number(&h).map_err(e)? == chi, || "library chromatic number disagrees".into())?;
            count += 1;
        }
    }
    let p4 = chi_t_exact(&Graph::path(4), 2).map_err(e)?;
    check(p4 == 3, || format!("chi_2(P4) = {p4}"))?;
    Ok(format!("{count} labelled graphs (208 classes, <= 6 vertices); chi_2(P4) = 3"))
}

fn forward_construction() -> Outcome {
    let cfg = HomSearchConfig::default();
    let sample = enumerate(&GeneratorSpec::bounded_treedepth(2, 5)).map_err(e)?;
    let triangle = Graph::cycle(3).to_structure().into_owned();
    let built = dual_construct(std::slice::from_ref(&triangle), &sample, 4, ApproxStrategy::Auto, &cfg).map_err(e)?;
    check(hom_exists(&triangle, &built.dual, &cfg).map_err(e)?.is_none(), || "C3 maps to D".into())?;
    check(built.verdict.holds, || "restricted duality fails over the sample".into())?;
    let bound = theta_product_bound(&sample, 4, 6, &cfg).map_err(e)?;
    check(bound.failures.is_empty(), || format!("{} members without a valid product approximation", bound.failures.len()))?;
    check(bound.sup_theta <= bound.bound, || format!("sup theta {} > C(4) = {}", bound.sup_theta, bound.bound))?;
    Ok(format!(
        "{}: |D| = {}, C3 -/-> D, duality verified on {} members; sup theta^4 = {} <= C(4) = {} ({} template duals)",
        sample.description(),
        built.dual.order(),
        built.verdict.checked,
        bound.sup_theta,
        bound.bound,
        bound.templates.len()
    ))
}

fn quotient_validity() -> Outcome {
    let cfg = HomSearchConfig::default();
    let mut compared = 0;
    let mut total = 0;
    for a in graphs_up_to(1, 6).map_err(e)? {
        let (res, _) = quotient_approximation(&a, 3, &cfg).map_err(e)?;
        let v = is_t_approximation(&a, &res.approx, 3, &cfg).map_err(e)?;
        check(v.holds, || format!("quotient of {a:?} is not a 3-approximation"))?;
        if a.order() <= 5 {
            if let Some(exact) = theta_oracle(&a, 3, 5, &cfg).map_err(e)?.found() {
                check(res.approx.order() >= exact.approx.order(), || {
                    format!("quotient order {} below theta {} on {a:?}", res.approx.order(), exact.approx.order())
                })?;
                compared += 1;
            }
        }
        total += 1;
    }
    Ok(format!("{total} graphs with <= 6 vertices pass; {compared} compared with the exact oracle"))
}

/// Pins two branching vertices to the same target vertex through unary relations.
fn pinned(sub: &Graph, u: usize, v: usize, h: &Graph, x: usize) -> (Structure, Structure) {
    let sig = Signature::new([("E", 2), ("U", 1), ("V", 1)]).expect("signature");
    let edges = |g: &Graph| {
        g.edges()
            .flat_map(|(a, b)| [(0, vec![a, b]), (0, vec![b, a])])
            .collect::<Vec<_>>()
    };
    let mut src = edges(sub);
    src.push((1, vec![u]));
    src.push((2, vec![v]));
    let mut tgt = edges(h);
    tgt.push((1, vec![x]));
    tgt.push((2, vec![x]));
    (
        Structure::from_tuples(sig.clone(), sub.order(), src).expect("source"),
        Structure::from_tuples(sig, h.order(), tgt).expect("target"),
    )
}

fn branching_invariant() -> Outcome {
    const ENUMERATION_CAP: u64 = 100_000;
    let cfg = HomSearchConfig::default().enumerating();
    let targets = [("C5", Graph::cycle(5)), ("C7", Graph::cycle(7)), ("petersen", Graph::petersen())];
    let mut cases = 0;
    let mut enumerated = 0u64;
    let mut pinned_checks = 0;
    for g in graphs_up_to(1, 4).map_err(e)? {
        for p in 1..=2usize {
            let sub = subdivide(&g, 2 * p).map_err(e)?;
            for (name, h) in &targets {
                if !odd_girth(h).exceeds(2 * p + 1) {
                    continue;
                }
                cases += 1;
                let n = g.order();
                let mut bad = false;
                let mut seen = 0u64;
                for_each_hom(&sub, h, &cfg, |m| {
                    seen += 1;
                    if !g.is_proper_coloring(&m[..n]) {
                        bad = true;
                        return ControlFlow::Break(());
                    }
                    if seen >= ENUMERATION_CAP {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                })
                .map_err(e)?;
                check(!bad, || format!("improper restriction: {g:?}, p = {p}, H = {name}"))?;
                enumerated += seen;
                // beyond the enumeration cap: no edge may have equal images at all
                for (u, v) in g.edges() {
                    for x in 0..h.order() {
                        let (s, t) = pinned(&sub, u, v, h, x);
                        let hit = hom_exists(&s, &t, &HomSearchConfig::default()).map_err(e)?;
                        check(hit.is_none(), || format!("edge {u}-{v} collapses: {g:?}, p = {p}, H = {name}"))?;
                        pinned_checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{cases} (G, p, H) cases; {enumerated} homomorphisms enumerated (cap {ENUMERATION_CAP} per case), {pinned_checks} pinned collapse checks"
    ))
}

fn dvorak_formula() -> Outcome {
    let ours = dvorak_threshold(4).map_err(e)?;
    let reference = 504.0 * 3f64.ln() / (4f64.ln() - 3f64.ln());
    let rel = ((ours - reference) / reference).abs();
    check(rel <= 1e-6, || format!("{ours} vs {reference}, relative error {rel:e}"))?;
    Ok(format!("threshold(4) = {ours:.6}, reference {reference:.6}, relative error {rel:.1e}"))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "hom search agrees with full-map enumeration", hom_oracle_equivalence),
        (2, "directed path / transitive tournament duality", ghrv_exhaustive),
        (3, "identification decomposition of homomorphisms", pre_lemma),
        (4, "tree-depth against elimination forests", tree_depth_oracle),
        (5, "low tree-depth coloring sanity", chi_t_sanity),
        (6, "forward dual construction and product bound", forward_construction),
        (7, "quotient approximation validity", quotient_validity),
        (8, "branching vertices are properly colored", branching_invariant),
        (9, "degree threshold formula", dvorak_formula),
    ];
    let mut failed = 0;
    let mut substitutes_pass = true;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                if (6..=8).contains(&id) {
                    substitutes_pass = false;
                }
                println!("FAIL [{id}] {name}: {why} ({secs:.1}s)");
            }
        }
    }
    let note = "infinite-class statements and the large-girth density argument are out of desk scale; covered by the construction-step suites 6-8";
    if substitutes_pass {
        println!("PASS [10] explicit substitution: {note}");
    } else {
        failed += 1;
        println!("FAIL [10] explicit substitution: a substitute suite failed; {note}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
