//! Homomorphism search, counting, cores and derived invariants.
//!
//! The search assigns the most constrained source element first and keeps
//! binary constraints arc-consistent. Tuples of other arities are checked
//! once all of their elements are fixed.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ops::induced_substructure;
use crate::structure::{Homomorphism, Structure, ToStructure};

/// Default node budget for a single search.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;
/// Default universe cap for [`core`].
pub const CORE_CAP: usize = 9;
/// Default vertex cap for exact chromatic and clique numbers.
pub const CHROMATIC_CAP: usize = 12;
const COUNT_NODE_CAP: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    None,
    ArcConsistency,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSearchConfig {
    /// Maximum number of value assignments tried before giving up.
    pub node_budget: u64,
    /// Whether [`hom_enumerate`] collects every homomorphism or stops at one.
    pub enumerate_all: bool,
    pub propagation: Propagation,
    /// Restrict to injective maps (subgraph embeddings for graphs).
    pub injective: bool,
}

impl Default for HomSearchConfig {
    fn default() -> Self {
        HomSearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            enumerate_all: false,
            propagation: Propagation::ArcConsistency,
            injective: false,
        }
    }
}

impl HomSearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        HomSearchConfig {
            node_budget,
            ..Self::default()
        }
    }

    pub fn enumerating(mut self) -> Self {
        self.enumerate_all = true;
        self
    }

    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.node_budget == 0 {
            return Err(Error::Argument("node budget must be positive".into()));
        }
        Ok(())
    }
}

/// Counters reported by a finished search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: u64,
}

#[derive(Clone, Copy)]
struct Arc {
    other: usize,
    rel: usize,
    /// The owning element is the first entry of the tuple.
    first: bool,
}

struct Compiled {
    n_src: usize,
    n_tgt: usize,
    arcs: Vec<Vec<Arc>>,
    fwd: Vec<Vec<FixedBitSet>>,
    bwd: Vec<Vec<FixedBitSet>>,
    checks: Vec<(usize, Vec<usize>)>,
    checks_of: Vec<Vec<usize>>,
    initial: Vec<FixedBitSet>,
}

impl Compiled {
    fn new(a: &Structure, b: &Structure) -> Result<Self> {
        if a.signature() != b.signature() {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                a.signature(),
                b.signature()
            )));
        }
        let (n_src, n_tgt) = (a.order(), b.order());
        let nrel = a.signature().len();
        let mut fwd = vec![Vec::new(); nrel];
        let mut bwd = vec![Vec::new(); nrel];
        let mut allowed_at: Vec<Vec<FixedBitSet>> = Vec::with_capacity(nrel);
        for (r, sym) in b.signature().symbols().iter().enumerate() {
            let mut at = vec![FixedBitSet::with_capacity(n_tgt); sym.arity];
            for t in b.relation(r) {
                for (p, &x) in t.iter().enumerate() {
                    at[p].insert(x);
                }
            }
            allowed_at.push(at);
            if sym.arity == 2 {
                fwd[r] = vec![FixedBitSet::with_capacity(n_tgt); n_tgt];
                bwd[r] = vec![FixedBitSet::with_capacity(n_tgt); n_tgt];
                for t in b.relation(r) {
                    fwd[r][t[0]].insert(t[1]);
                    bwd[r][t[1]].insert(t[0]);
                }
            }
        }

        let mut full = FixedBitSet::with_capacity(n_tgt);
        full.insert_range(..);
        let mut initial = vec![full; n_src];
        let mut arcs = vec![Vec::new(); n_src];
        let mut checks = Vec::new();
        let mut checks_of = vec![Vec::new(); n_src];
        for (r, rel) in a.relations().iter().enumerate() {
            for t in rel {
                for (p, &x) in t.iter().enumerate() {
                    initial[x].intersect_with(&allowed_at[r][p]);
                }
                match t.as_slice() {
                    [_] => {}
                    &[x, y] if x == y => {
                        let mut loops = FixedBitSet::with_capacity(n_tgt);
                        for u in 0..n_tgt {
                            if fwd[r][u].contains(u) {
                                loops.insert(u);
                            }
                        }
                        initial[x].intersect_with(&loops);
                    }
                    &[x, y] => {
                        arcs[x].push(Arc {
                            other: y,
                            rel: r,
                            first: true,
                        });
                        arcs[y].push(Arc {
                            other: x,
                            rel: r,
                            first: false,
                        });
                    }
                    _ => {
                        let idx = checks.len();
                        let mut vars = t.clone();
                        vars.sort_unstable();
                        vars.dedup();
                        for x in vars {
                            checks_of[x].push(idx);
                        }
                        checks.push((r, t.clone()));
                    }
                }
            }
        }
        Ok(Compiled {
            n_src,
            n_tgt,
            arcs,
            fwd,
            bwd,
            checks,
            checks_of,
            initial,
        })
    }

    fn support<'s>(&'s self, arc_rel: usize, owner_first: bool, value: usize) -> &'s FixedBitSet {
        if owner_first {
            &self.fwd[arc_rel][value]
        } else {
            &self.bwd[arc_rel][value]
        }
    }
}

struct Search<'a, 'b, F> {
    c: &'a Compiled,
    b: &'b Structure,
    cfg: &'a HomSearchConfig,
    stats: SearchStats,
    visit: F,
}

impl<F> Search<'_, '_, F>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn tick(&mut self) -> Result<()> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.cfg.node_budget {
            return Err(Error::Budget {
                budget: self.cfg.node_budget,
            });
        }
        Ok(())
    }

    /// AC-3 starting from the elements in `queue`. Returns false on wipe-out.
    fn propagate(&self, domains: &mut [FixedBitSet], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; domains.len()];
        for &z in &queue {
            queued[z] = true;
        }
        while let Some(z) = queue.pop() {
            queued[z] = false;
            for arc in &self.c.arcs[z] {
                let y = arc.other;
                // y sees the same tuple from the other end
                let y_first = !arc.first;
                let mut removed = false;
                let candidates: Vec<usize> = domains[y].ones().collect();
                for v in candidates {
                    if self.c.support(arc.rel, y_first, v).is_disjoint(&domains[z]) {
                        domains[y].remove(v);
                        removed = true;
                    }
                }
                if removed {
                    if domains[y].is_clear() {
                        return false;
                    }
                    if !queued[y] {
                        queued[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
        true
    }

    fn checks_hold(&self, x: usize, value_of: impl Fn(usize) -> Option<usize>) -> bool {
        self.c.checks_of[x].iter().all(|&i| {
            let (r, ref t) = self.c.checks[i];
            let image: Option<Vec<usize>> = t.iter().map(|&y| value_of(y)).collect();
            image.is_none_or(|img| self.b.contains(r, &img))
        })
    }

    fn run_ac(&mut self, domains: Vec<FixedBitSet>, assigned: &mut Vec<Option<usize>>) -> Result<ControlFlow<()>> {
        let next = (0..self.c.n_src)
            .filter(|&x| assigned[x].is_none())
            .min_by_key(|&x| (domains[x].count_ones(..), x));
        let Some(x) = next else {
            let map: Vec<usize> = assigned.iter().map(|v| v.expect("complete")).collect();
            self.stats.solutions += 1;
            return Ok((self.visit)(&map));
        };
        for a in domains[x].ones() {
            self.tick()?;
            let mut d = domains.clone();
            d[x].clear();
            d[x].insert(a);
            if self.cfg.injective {
                let mut wiped = false;
                for y in 0..self.c.n_src {
                    if y != x && assigned[y].is_none() {
                        d[y].remove(a);
                        wiped |= d[y].is_clear();
                    }
                }
                if wiped {
                    continue;
                }
            }
            let mut seeds = vec![x];
            if self.cfg.injective {
                seeds.extend((0..self.c.n_src).filter(|&y| y != x && assigned[y].is_none()));
            }
            if !self.propagate(&mut d, seeds) {
                continue;
            }
            assigned[x] = Some(a);
            let ok = self.checks_hold(x, |y| {
                (d[y].count_ones(..) == 1).then(|| d[y].ones().next().expect("singleton"))
            });
            if ok {
                if let ControlFlow::Break(()) = self.run_ac(d, assigned)? {
                    assigned[x] = None;
                    return Ok(ControlFlow::Break(()));
                }
            }
            assigned[x] = None;
        }
        Ok(ControlFlow::Continue(()))
    }

    fn run_plain(&mut self, x: usize, assigned: &mut Vec<Option<usize>>) -> Result<ControlFlow<()>> {
        if x == self.c.n_src {
            let map: Vec<usize> = assigned.iter().map(|v| v.expect("complete")).collect();
            self.stats.solutions += 1;
            return Ok((self.visit)(&map));
        }
        for a in self.c.initial[x].ones() {
            self.tick()?;
            if self.cfg.injective && assigned[..x].contains(&Some(a)) {
                continue;
            }
            let consistent = self.c.arcs[x].iter().all(|arc| match assigned[arc.other] {
                Some(b) => self.c.support(arc.rel, arc.first, a).contains(b),
                None => true,
            });
            if !consistent {
                continue;
            }
            assigned[x] = Some(a);
            if self.checks_hold(x, |y| assigned[y]) {
                if let ControlFlow::Break(()) = self.run_plain(x + 1, assigned)? {
                    assigned[x] = None;
                    return Ok(ControlFlow::Break(()));
                }
            }
            assigned[x] = None;
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit` on every homomorphism `a -> b` in deterministic order
/// until it returns `Break`.
pub fn for_each_hom<A, B, F>(a: &A, b: &B, cfg: &HomSearchConfig, visit: F) -> Result<SearchStats>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    cfg.validate()?;
    let (a, b) = (a.to_structure(), b.to_structure());
    let c = Compiled::new(&a, &b)?;
    if cfg.injective && c.n_src > c.n_tgt {
        return Ok(SearchStats::default());
    }
    let mut search = Search {
        c: &c,
        b: &b,
        cfg,
        stats: SearchStats::default(),
        visit,
    };
    let mut assigned = vec![None; c.n_src];
    if c.initial.iter().any(FixedBitSet::is_clear) {
        return Ok(search.stats);
    }
    match cfg.propagation {
        Propagation::ArcConsistency => {
            let mut domains = c.initial.clone();
            if search.propagate(&mut domains, (0..c.n_src).collect()) {
                let _ = search.run_ac(domains, &mut assigned)?;
            }
        }
        Propagation::None => {
            let _ = search.run_plain(0, &mut assigned)?;
        }
    }
    Ok(search.stats)
}

/// Some homomorphism `a -> b`, or `None` when none exists. Running out of
/// budget is an error, never `None`.
pub fn hom_exists<A, B>(a: &A, b: &B, cfg: &HomSearchConfig) -> Result<Option<Homomorphism>>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    let mut found = None;
    for_each_hom(a, b, cfg, |m| {
        found = Some(Homomorphism::new(m.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Boolean form of [`hom_exists`] with the default configuration.
pub fn maps_to<A, B>(a: &A, b: &B) -> Result<bool>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    Ok(hom_exists(a, b, &HomSearchConfig::default())?.is_some())
}

/// Every homomorphism when `cfg.enumerate_all` is set, otherwise at most one.
pub fn hom_enumerate<A, B>(a: &A, b: &B, cfg: &HomSearchConfig) -> Result<Vec<Homomorphism>>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    let mut out = Vec::new();
    let all = cfg.enumerate_all;
    for_each_hom(a, b, cfg, |m| {
        out.push(Homomorphism::new(m.to_vec()));
        if all {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    })?;
    Ok(out)
}

/// Exact number of homomorphisms by plain backtracking over all maps,
/// checking each tuple once its largest element is assigned. Shares no
/// code with the propagating search.
pub fn hom_count<A, B>(a: &A, b: &B) -> Result<u128>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    let (a, b) = (a.to_structure(), b.to_structure());
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            a.signature(),
            b.signature()
        )));
    }
    let n = a.order();
    let mut closing: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n];
    for (r, rel) in a.relations().iter().enumerate() {
        for t in rel {
            let last = *t.iter().max().expect("non-empty tuple");
            closing[last].push((r, t));
        }
    }

    struct Counter<'s> {
        b: &'s Structure,
        closing: Vec<Vec<(usize, &'s [usize])>>,
        map: Vec<usize>,
        nodes: u64,
    }
    impl Counter<'_> {
        fn go(&mut self, x: usize) -> Result<u128> {
            if x == self.map.len() {
                return Ok(1);
            }
            let mut total = 0;
            for v in 0..self.b.order() {
                self.nodes += 1;
                if self.nodes > COUNT_NODE_CAP {
                    return Err(Error::capacity(
                        "brute-force count nodes",
                        COUNT_NODE_CAP as usize + 1,
                        COUNT_NODE_CAP as usize,
                    ));
                }
                self.map[x] = v;
                let ok = self.closing[x].iter().all(|&(r, t)| {
                    let image: Vec<usize> = t.iter().map(|&y| self.map[y]).collect();
                    self.b.contains(r, &image)
                });
                if ok {
                    total += self.go(x + 1)?;
                }
            }
            Ok(total)
        }
    }
    let mut counter = Counter {
        b: &b,
        closing,
        map: vec![0; n],
        nodes: 0,
    };
    counter.go(0)
}

/// Whether `a -> b` and `b -> a`.
pub fn hom_equivalent<A, B>(a: &A, b: &B, cfg: &HomSearchConfig) -> Result<bool>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    Ok(hom_exists(a, b, cfg)?.is_some() && hom_exists(b, a, cfg)?.is_some())
}

/// Whether `f` is isomorphic to a (not necessarily induced) subgraph of `g`.
pub fn is_subgraph_isomorphic<A, B>(f: &A, g: &B, cfg: &HomSearchConfig) -> Result<bool>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    let cfg = cfg.clone().injective();
    Ok(hom_exists(f, g, &cfg)?.is_some())
}

/// A core of a structure together with a retraction onto it.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: Structure,
    /// Input element realising each core element; the core is the induced
    /// substructure of the input on these elements.
    pub embedding: Vec<usize>,
    /// Homomorphism from the input onto the core, identity on the embedded copy.
    pub retraction: Homomorphism,
}

pub fn core<A: ToStructure + ?Sized>(a: &A) -> Result<CoreResult> {
    core_with(a, CORE_CAP, &HomSearchConfig::default())
}

/// Retracts repeatedly: while some endomorphism misses an element, the
/// structure is replaced by the image of the first such endomorphism found.
pub fn core_with<A: ToStructure + ?Sized>(
    a: &A,
    cap: usize,
    cfg: &HomSearchConfig,
) -> Result<CoreResult> {
    let a = a.to_structure();
    if a.order() > cap {
        return Err(Error::capacity("core input order", a.order(), cap));
    }
    let cfg = HomSearchConfig {
        enumerate_all: false,
        injective: false,
        ..cfg.clone()
    };
    let mut current: Structure = a.clone().into_owned();
    let mut kept: Vec<usize> = (0..a.order()).collect();
    let mut to_current = Homomorphism::identity(a.order());
    'shrink: loop {
        for v in 0..current.order() {
            let rest: Vec<usize> = (0..current.order()).filter(|&x| x != v).collect();
            let target = induced_substructure(&current, &rest)?;
            if let Some(f) = hom_exists(&current, &target, &cfg)? {
                let endo = Homomorphism::new(f.map().iter().map(|&i| rest[i]).collect());
                let image: Vec<usize> = endo.image().into_iter().collect();
                let mut pos = vec![usize::MAX; current.order()];
                for (i, &x) in image.iter().enumerate() {
                    pos[x] = i;
                }
                let step = Homomorphism::new(endo.map().iter().map(|&x| pos[x]).collect());
                to_current = to_current.then(&step);
                kept = image.iter().map(|&x| kept[x]).collect();
                current = induced_substructure(&current, &image)?;
                continue 'shrink;
            }
        }
        break;
    }
    // to_current restricted to the kept copy is an automorphism; undo it
    let k = current.order();
    let mut inverse = vec![0; k];
    for (i, &orig) in kept.iter().enumerate() {
        inverse[to_current.apply(orig)] = i;
    }
    let retraction = to_current.then(&Homomorphism::new(inverse));
    Ok(CoreResult {
        core: current,
        embedding: kept,
        retraction,
    })
}

/// Whether every endomorphism is a bijection, by full enumeration.
pub fn is_core<A: ToStructure + ?Sized>(a: &A, cfg: &HomSearchConfig) -> Result<bool> {
    let a = a.to_structure();
    let mut all_bijective = true;
    for_each_hom(&*a, &*a, cfg, |m| {
        let mut seen = vec![false; m.len()];
        for &y in m {
            if std::mem::replace(&mut seen[y], true) {
                all_bijective = false;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(all_bijective)
}

pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with(g, CHROMATIC_CAP, &HomSearchConfig::default())
}

/// Least `k` with `g -> K_k`.
pub fn chromatic_number_with(g: &Graph, cap: usize, cfg: &HomSearchConfig) -> Result<usize> {
    if g.order() > cap {
        return Err(Error::capacity("chromatic number order", g.order(), cap));
    }
    if g.order() == 0 {
        return Ok(0);
    }
    let start = if g.edge_count() == 0 { 1 } else { 2 };
    for k in start..=g.order() {
        if hom_exists(g, &Graph::complete(k), cfg)?.is_some() {
            return Ok(k);
        }
    }
    unreachable!("every graph maps to the complete graph on its vertices")
}

pub fn clique_number(g: &Graph) -> Result<usize> {
    clique_number_with(g, CHROMATIC_CAP, &HomSearchConfig::default())
}

/// Largest `k` with `K_k -> g`.
pub fn clique_number_with(g: &Graph, cap: usize, cfg: &HomSearchConfig) -> Result<usize> {
    if g.order() > cap {
        return Err(Error::capacity("clique number order", g.order(), cap));
    }
    let mut k = 0;
    while k < g.order() && hom_exists(&Graph::complete(k + 1), g, cfg)?.is_some() {
        k += 1;
    }
    Ok(k)
}
