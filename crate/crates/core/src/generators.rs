//! Finite samples standing in for graph classes: isomorphism-free
//! enumeration, subdivision closures, bounded tree-depth families, and a
//! seeded search for graphs of large girth and chromatic number.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::{canonical_form, canonical_labeling, CANON_CAP};
use crate::duality::{dual_construct, ApproxStrategy, ClassFlags, ClassSample, Direction, Verdict};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::hom::{chromatic_number_with, hom_exists, HomSearchConfig};
use crate::named;
use crate::ops::subdivide_general;
use crate::sparsity::{girth, odd_girth, tree_depth, Girth};
use crate::structure::{Signature, Structure, ToStructure};

/// Largest order for exhaustive graph enumeration.
pub const GRAPH_ENUM_CAP: usize = 7;
/// Largest order for exhaustive digraph enumeration.
pub const DIGRAPH_ENUM_CAP: usize = 5;
/// Largest vertex count for the random high-girth search.
pub const RANDOM_GRAPH_CAP: usize = 40;
/// Largest number of candidate tuple sets tried per order when
/// enumerating structures of an arbitrary signature.
pub const STRUCTURE_ENUM_CAP: usize = 1 << 21;

fn graph_tiers() -> &'static Mutex<Vec<Vec<Graph>>> {
    static TIERS: OnceLock<Mutex<Vec<Vec<Graph>>>> = OnceLock::new();
    TIERS.get_or_init(|| Mutex::new(vec![vec![Graph::edgeless(0)]]))
}

fn digraph_tiers() -> &'static Mutex<Vec<Vec<Digraph>>> {
    static TIERS: OnceLock<Mutex<Vec<Vec<Digraph>>>> = OnceLock::new();
    TIERS.get_or_init(|| Mutex::new(vec![vec![Digraph::new(0, []).expect("empty digraph")]]))
}

fn canonical_key<A: ToStructure>(a: &A) -> Result<(Vec<u8>, Structure)> {
    let s = a.to_structure().into_owned();
    let (code, perm) = canonical_labeling(&s, CANON_CAP)?;
    Ok((code, s.relabel(&perm)))
}

/// All graphs on exactly `n` vertices up to isomorphism, in canonical labelling,
/// ordered by canonical code. Built by adding one vertex in every possible
/// way to each graph of order `n - 1`.
pub fn graphs_of_order(n: usize) -> Result<Vec<Graph>> {
    if n > GRAPH_ENUM_CAP {
        return Err(Error::capacity("graph enumeration order", n, GRAPH_ENUM_CAP));
    }
    let mut tiers = graph_tiers().lock().expect("graph cache poisoned");
    while tiers.len() <= n {
        let m = tiers.len();
        let mut next: BTreeMap<Vec<u8>, Graph> = BTreeMap::new();
        for g in &tiers[m - 1] {
            for nbrs in 0u32..(1 << (m - 1)) {
                let edges = g
                    .edges()
                    .chain((0..m - 1).filter(|&v| nbrs & (1 << v) != 0).map(|v| (v, m - 1)));
                let h = Graph::new(m, edges)?;
                let (code, canon) = canonical_key(&h)?;
                next.entry(code)
                    .or_insert_with(|| canon.as_graph().expect("still a graph"));
            }
        }
        tiers.push(next.into_values().collect());
    }
    Ok(tiers[n].clone())
}

/// All digraphs (loopless, no parallel arcs) on exactly `n` vertices up to
/// isomorphism.
pub fn digraphs_of_order(n: usize) -> Result<Vec<Digraph>> {
    if n > DIGRAPH_ENUM_CAP {
        return Err(Error::capacity("digraph enumeration order", n, DIGRAPH_ENUM_CAP));
    }
    let mut tiers = digraph_tiers().lock().expect("digraph cache poisoned");
    while tiers.len() <= n {
        let m = tiers.len();
        let mut next: BTreeMap<Vec<u8>, Digraph> = BTreeMap::new();
        for d in &tiers[m - 1] {
            for choice in 0u32..(1 << (2 * (m - 1))) {
                let new = m - 1;
                let arcs = d.arcs().chain((0..new).flat_map(|v| {
                    let mut extra = Vec::new();
                    if choice & (1 << (2 * v)) != 0 {
                        extra.push((v, new));
                    }
                    if choice & (1 << (2 * v + 1)) != 0 {
                        extra.push((new, v));
                    }
                    extra
                }));
                let h = Digraph::new(m, arcs)?;
                let (code, canon) = canonical_key(&h)?;
                next.entry(code)
                    .or_insert_with(|| canon.as_digraph().expect("still a digraph"));
            }
        }
        tiers.push(next.into_values().collect());
    }
    Ok(tiers[n].clone())
}

pub fn graphs_up_to(min_order: usize, max_order: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in min_order..=max_order {
        out.extend(graphs_of_order(n)?);
    }
    Ok(out)
}

pub fn digraphs_up_to(min_order: usize, max_order: usize) -> Result<Vec<Digraph>> {
    let mut out = Vec::new();
    for n in min_order..=max_order {
        out.extend(digraphs_of_order(n)?);
    }
    Ok(out)
}

/// All structures over `sig` on exactly `n` elements with at most
/// `tuple_cap` tuples per relation, up to isomorphism, ordered by code.
pub fn structures_of_order(sig: &Signature, n: usize, tuple_cap: usize) -> Result<Vec<Structure>> {
    if n > CANON_CAP {
        return Err(Error::capacity("structure enumeration order", n, CANON_CAP));
    }
    // every tuple of every relation, then all small subsets per relation
    let mut per_relation: Vec<Vec<BTreeSet<Vec<usize>>>> = Vec::new();
    let mut total: usize = 1;
    for sym in sig.symbols() {
        let all: Vec<Vec<usize>> = (0..n.pow(sym.arity as u32))
            .map(|mut code| {
                let mut t = vec![0; sym.arity];
                for slot in t.iter_mut().rev() {
                    *slot = code % n.max(1);
                    code /= n.max(1);
                }
                t
            })
            .collect();
        let all = if n == 0 { Vec::new() } else { all };
        let mut subsets = vec![BTreeSet::new()];
        for t in &all {
            let grown: Vec<BTreeSet<Vec<usize>>> = subsets
                .iter()
                .filter(|s| s.len() < tuple_cap)
                .map(|s| {
                    let mut s = s.clone();
                    s.insert(t.clone());
                    s
                })
                .collect();
            subsets.extend(grown);
            if subsets.len() > STRUCTURE_ENUM_CAP {
                return Err(Error::capacity("structure candidates", subsets.len(), STRUCTURE_ENUM_CAP));
            }
        }
        total = total.saturating_mul(subsets.len());
        if total > STRUCTURE_ENUM_CAP {
            return Err(Error::capacity("structure candidates", total, STRUCTURE_ENUM_CAP));
        }
        per_relation.push(subsets);
    }
    let mut out: BTreeMap<Vec<u8>, Structure> = BTreeMap::new();
    let mut idx = vec![0usize; sig.len()];
    loop {
        let relations = idx
            .iter()
            .zip(&per_relation)
            .map(|(&i, options)| options[i].clone())
            .collect();
        let s = Structure::new(sig.clone(), n, relations)?;
        let (code, canon) = canonical_key(&s)?;
        out.entry(code).or_insert(canon);
        // odometer over relation choices
        let mut r = 0;
        loop {
            if r == idx.len() {
                return Ok(out.into_values().collect());
            }
            idx[r] += 1;
            if idx[r] < per_relation[r].len() {
                break;
            }
            idx[r] = 0;
            r += 1;
        }
    }
}

/// Records how a sample member arises as a subdivision of a base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionCertificate {
    pub base: Graph,
    /// Path length per base edge, in edge order.
    pub lengths: Vec<usize>,
}

impl SubdivisionCertificate {
    /// Re-derives the subdivision and compares it with `member` up to isomorphism.
    pub fn certifies(&self, member: &Structure) -> Result<bool> {
        let built = subdivide_general(&self.base, &self.lengths)?;
        let built = canonical_form(&built.to_structure(), CANON_CAP)?;
        Ok(built == canonical_form(member, CANON_CAP)?)
    }
}

/// All subdivisions of `bases` with each edge replaced by a path of length
/// `1..=q+1`, keeping those with at most `max_order` vertices. One
/// certificate per isomorphism class.
pub fn subdivision_closure(
    bases: &[Graph],
    q: usize,
    max_order: usize,
) -> Result<Vec<(Graph, SubdivisionCertificate)>> {
    let mut found: BTreeMap<(usize, Vec<u8>), (Graph, SubdivisionCertificate)> = BTreeMap::new();
    for base in bases {
        let m = base.edge_count();
        let mut lengths = vec![1; m];
        loop {
            let order = base.order() + lengths.iter().map(|l| l - 1).sum::<usize>();
            if order <= max_order {
                let g = subdivide_general(base, &lengths)?;
                let (code, canon) = canonical_key(&g)?;
                found.entry((order, code)).or_insert_with(|| {
                    (
                        canon.as_graph().expect("graph"),
                        SubdivisionCertificate {
                            base: base.clone(),
                            lengths: lengths.clone(),
                        },
                    )
                });
            }
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                lengths[i] += 1;
                if lengths[i] <= q + 1 {
                    break;
                }
                lengths[i] = 1;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    Ok(found.into_values().collect())
}

/// A shortest cycle's closing edge and its length, if any cycle exists.
fn shortest_cycle_edge(g: &Graph) -> Option<(usize, (usize, usize))> {
    let mut best: Option<(usize, (usize, usize))> = None;
    for root in 0..g.order() {
        let mut dist = vec![usize::MAX; g.order()];
        let mut parent = vec![usize::MAX; g.order()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w && parent[w] != u && dist[w] >= dist[u] {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|(b, _)| len < b) {
                        best = Some((len, (u.min(w), u.max(w))));
                    }
                }
            }
        }
    }
    best
}

/// Seeded search for a graph on `n` vertices with girth at least `g`.
/// Each trial samples `G(n, c/n)` and deletes a closing edge of a shortest
/// cycle while that cycle is shorter than `g`; the trial with the largest
/// chromatic number wins (earliest on ties).
pub fn random_high_girth(n: usize, g: usize, trials: usize, seed: u64, c: f64) -> Result<Option<Graph>> {
    if n > RANDOM_GRAPH_CAP {
        return Err(Error::capacity("random graph order", n, RANDOM_GRAPH_CAP));
    }
    if !(c >= 0.0) {
        return Err(Error::Argument(format!("edge density constant must be >= 0, got {c}")));
    }
    let p = if n == 0 { 0.0 } else { (c / n as f64).min(1.0) };
    let cfg = HomSearchConfig::default();
    let results: Vec<Result<(usize, Graph)>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut edges = BTreeSet::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.insert((u, v));
                    }
                }
            }
            let mut graph = Graph::new(n, edges.iter().copied())?;
            while let Some((len, e)) = shortest_cycle_edge(&graph) {
                if len >= g {
                    break;
                }
                edges.remove(&e);
                graph = Graph::new(n, edges.iter().copied())?;
            }
            debug_assert!(girth(&graph) >= Girth::Finite(g) || girth(&graph).is_infinite());
            let chi = chromatic_number_with(&graph, RANDOM_GRAPH_CAP, &cfg)?;
            Ok((chi, graph))
        })
        .collect();
    let mut best: Option<(usize, Graph)> = None;
    for r in results {
        let (chi, graph) = r?;
        if best.as_ref().is_none_or(|(b, _)| chi > *b) {
            best = Some((chi, graph));
        }
    }
    Ok(best.map(|(_, g)| g))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    AllGraphs,
    AllDigraphs,
    SubdivisionClosure { bases: Vec<String>, q: usize },
    BoundedTreedepth { td: usize },
    RandomHighGirth { n: usize, g: usize, trials: usize, seed: u64, c: f64 },
}

/// What sample to generate; parsed from `kind:key=value,...`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub min_order: usize,
    pub max_order: usize,
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for kv in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Argument(format!("expected key=value, got {kv:?}")))?;
            if map.insert(k, v).is_some() {
                return Err(Error::Argument(format!("duplicate key {k:?}")));
            }
        }
        fn take<T: FromStr>(map: &mut BTreeMap<&str, &str>, key: &str) -> Result<Option<T>> {
            map.remove(key)
                .map(|v| {
                    v.parse()
                        .map_err(|_| Error::Argument(format!("bad value {v:?} for {key}")))
                })
                .transpose()
        }
        fn need<T: FromStr>(map: &mut BTreeMap<&str, &str>, key: &str) -> Result<T> {
            take(map, key)?.ok_or_else(|| Error::Argument(format!("missing parameter {key}")))
        }
        let min_order = take(&mut map, "min")?.unwrap_or(1);
        let (kind, max_order) = match kind {
            "all_graphs" | "graphs" => (GeneratorKind::AllGraphs, need(&mut map, "max")?),
            "all_digraphs" | "digraphs" => (GeneratorKind::AllDigraphs, need(&mut map, "max")?),
            "subdiv" | "subdivision_closure" => {
                let bases: String = need(&mut map, "base")?;
                let bases: Vec<String> = bases.split('|').map(str::to_string).collect();
                for b in &bases {
                    if named::graph(b).is_none() {
                        return Err(Error::Argument(format!("unknown base graph {b:?}")));
                    }
                }
                let q = need(&mut map, "q")?;
                (GeneratorKind::SubdivisionClosure { bases, q }, need(&mut map, "max")?)
            }
            "treedepth" | "bounded_treedepth" => {
                let td = need(&mut map, "td")?;
                (GeneratorKind::BoundedTreedepth { td }, need(&mut map, "max")?)
            }
            "rhg" | "random_high_girth" => {
                let n: usize = need(&mut map, "n")?;
                let g = need(&mut map, "g")?;
                let trials = need(&mut map, "trials")?;
                let seed = take(&mut map, "seed")?
                    .ok_or_else(|| Error::Argument("randomised samples need an explicit seed".into()))?;
                let c = take(&mut map, "c")?.unwrap_or(3.0);
                (GeneratorKind::RandomHighGirth { n, g, trials, seed, c }, n)
            }
            other => return Err(Error::Argument(format!("unknown generator kind {other:?}"))),
        };
        if let Some(k) = map.keys().next() {
            return Err(Error::Argument(format!("unknown parameter {k:?}")));
        }
        Ok(GeneratorSpec {
            kind,
            min_order,
            max_order,
        })
    }
}

impl GeneratorSpec {
    pub fn all_graphs(max_order: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::AllGraphs,
            min_order: 1,
            max_order,
        }
    }

    pub fn all_digraphs(max_order: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::AllDigraphs,
            min_order: 1,
            max_order,
        }
    }

    pub fn bounded_treedepth(td: usize, max_order: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::BoundedTreedepth { td },
            min_order: 1,
            max_order,
        }
    }

    fn order_range(&self, noun: &str) -> String {
        if self.min_order <= 1 {
            format!("{noun}<={}", self.max_order)
        } else {
            format!("{noun}{}..={}", self.min_order, self.max_order)
        }
    }
}

/// Generates the sample a spec describes. The description echoes the
/// order budget so reports never over-claim.
pub fn enumerate(spec: &GeneratorSpec) -> Result<ClassSample> {
    let (lo, hi) = (spec.min_order, spec.max_order);
    match &spec.kind {
        GeneratorKind::AllGraphs => {
            let members = graphs_up_to(lo, hi)?.iter().map(|g| g.to_structure().into_owned()).collect();
            ClassSample::new(members, ClassFlags::hereditary_addable_monotone(), spec.order_range("graphs"))
        }
        GeneratorKind::AllDigraphs => {
            let members = digraphs_up_to(lo, hi)?.iter().map(|g| g.to_structure().into_owned()).collect();
            ClassSample::new(members, ClassFlags::hereditary_addable_monotone(), spec.order_range("digraphs"))
        }
        GeneratorKind::BoundedTreedepth { td } => {
            let mut members = Vec::new();
            for g in graphs_up_to(lo, hi)? {
                if tree_depth(&g)? <= *td {
                    members.push(g.to_structure().into_owned());
                }
            }
            let desc = format!("td<={td} {}", spec.order_range("graphs"));
            ClassSample::new(members, ClassFlags::hereditary_addable_monotone(), desc)
        }
        GeneratorKind::SubdivisionClosure { bases, q } => {
            let graphs: Vec<Graph> = bases
                .iter()
                .map(|b| named::graph(b).ok_or_else(|| Error::Argument(format!("unknown base {b:?}"))))
                .collect::<Result<_>>()?;
            let closure = subdivision_closure(&graphs, *q, hi)?;
            let (members, certs): (Vec<Structure>, Vec<_>) = closure
                .into_iter()
                .filter(|(g, _)| g.order() >= lo)
                .map(|(g, c)| (g.to_structure().into_owned(), Some(c)))
                .unzip();
            let flags = ClassFlags {
                topologically_closed: true,
                ..ClassFlags::default()
            };
            let desc = format!("subdiv({};q<={q}) {}", bases.join("|"), spec.order_range("graphs"));
            let mut sample = ClassSample::new(members, flags, desc)?;
            sample.set_certificates(certs)?;
            Ok(sample)
        }
        GeneratorKind::RandomHighGirth { n, g, trials, seed, c } => {
            let members = random_high_girth(*n, *g, *trials, *seed, *c)?
                .into_iter()
                .map(|g| g.to_structure().into_owned())
                .collect();
            let desc = format!("rhg(n={n},g={g},trials={trials},seed={seed},c={c})");
            ClassSample::new(members, ClassFlags::default(), desc)
        }
    }
}

/// Result of the odd-girth criterion experiment.
#[derive(Clone, Debug)]
pub struct OddGirthExperiment {
    pub verdict: Verdict,
    /// The constructed dual of `C_g` relative to the sample.
    pub dual: Structure,
}

/// Builds the dual of `C_g` relative to `sample` and checks that every
/// sample graph of odd-girth greater than `g` maps to it while `C_g` does not.
pub fn odd_girth_criterion_experiment(
    sample: &ClassSample,
    g: usize,
    t: usize,
    strategy: ApproxStrategy,
    cfg: &HomSearchConfig,
) -> Result<OddGirthExperiment> {
    if g < 3 || g % 2 == 0 {
        return Err(Error::Argument(format!("odd-girth bound must be odd and >= 3, got {g}")));
    }
    let cycle = Graph::cycle(g).to_structure().into_owned();
    let built = dual_construct(std::slice::from_ref(&cycle), sample, t, strategy, cfg)?;
    let dual = built.dual;
    let scope = sample.description().to_string();
    for member in sample.members() {
        let graph = member
            .as_graph()
            .ok_or_else(|| Error::Precondition("odd-girth experiment needs a sample of graphs".into()))?;
        if odd_girth(&graph).exceeds(g) && hom_exists(member, &dual, cfg)?.is_none() {
            return Ok(OddGirthExperiment {
                verdict: Verdict::fails(scope, Direction::OddGirthGraphAvoidsDual, member.clone(), None),
                dual,
            });
        }
    }
    if let Some(w) = hom_exists(&cycle, &dual, cfg)? {
        return Ok(OddGirthExperiment {
            verdict: Verdict::fails(scope, Direction::CycleMapsToDual, cycle, Some(w)),
            dual,
        });
    }
    Ok(OddGirthExperiment {
        verdict: Verdict::holds(scope, sample.len()),
        dual,
    })
}
