use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;

use crate::canon::canonical_code;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{chromatic_number_with, clique_number_with, HomSearchConfig};

/// Largest host graph accepted by the shallow topological minor search.
pub const SHALLOW_MINOR_CAP: usize = 24;

/// Depth of a shallow topological minor, stored as the maximum number of
/// internal subdivision vertices per edge (`s = floor(2p)` for depth `p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DepthParam {
    pub s: usize,
}

impl DepthParam {
    pub fn new(s: usize) -> Self {
        DepthParam { s }
    }

    /// From a (possibly half-integer) depth `p >= 0`.
    pub fn from_depth(p: f64) -> Result<Self> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::Argument(format!("depth must be finite and >= 0, got {p}")));
        }
        Ok(DepthParam {
            s: (2.0 * p).floor() as usize,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Omega,
    Chi,
    AvgDegree,
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(Measure::Omega),
            "chi" => Ok(Measure::Chi),
            "avg_degree" | "avg-degree" => Ok(Measure::AvgDegree),
            other => Err(Error::Argument(format!("unknown measure {other:?}"))),
        }
    }
}

/// Candidate branch paths between two branch vertices: the mask of internal
/// vertices of each path of length at most `s + 1`.
fn branch_paths(g: &Graph, from: usize, to: usize, branch: u64, s: usize) -> Vec<u64> {
    fn walk(
        g: &Graph,
        at: usize,
        to: usize,
        branch: u64,
        left: usize,
        used: u64,
        out: &mut HashSet<u64>,
    ) {
        for &w in g.neighbors(at) {
            if w == to {
                out.insert(used);
            } else if left > 0 && branch & (1 << w) == 0 && used & (1 << w) == 0 {
                walk(g, w, to, branch, left - 1, used | (1 << w), out);
            }
        }
    }
    let mut out = HashSet::new();
    walk(g, from, to, branch, s, 0, &mut out);
    let mut v: Vec<u64> = out.into_iter().collect();
    v.sort_unstable();
    v
}

fn edge_sets(paths: &[Vec<u64>]) -> HashSet<u64> {
    fn go(
        p: usize,
        paths: &[Vec<u64>],
        edges: u64,
        used: u64,
        seen: &mut HashSet<(usize, u64, u64)>,
        out: &mut HashSet<u64>,
    ) {
        if !seen.insert((p, edges, used)) {
            return;
        }
        if p == paths.len() {
            out.insert(edges);
            return;
        }
        go(p + 1, paths, edges, used, seen, out);
        for &mask in &paths[p] {
            if mask & used == 0 {
                go(p + 1, paths, edges | (1 << p), used | mask, seen, out);
            }
        }
    }
    let mut out = HashSet::new();
    go(0, paths, 0, 0, &mut HashSet::new(), &mut out);
    out
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// Every graph `H` with `1..=max_order` vertices (up to isomorphism) such
/// that some subdivision of `H` with at most `d.s` internal vertices per
/// edge is a subgraph of `g`. Sorted by order, then canonical code.
pub fn shallow_top_minors(g: &Graph, d: DepthParam, max_order: usize) -> Result<Vec<Graph>> {
    if g.order() > SHALLOW_MINOR_CAP {
        return Err(Error::capacity("shallow minor host order", g.order(), SHALLOW_MINOR_CAP));
    }
    let max_order = max_order.min(g.order());
    let mut shapes: HashSet<(usize, u64)> = HashSet::new();
    for k in 1..=max_order {
        if k * (k - 1) / 2 > 64 {
            return Err(Error::capacity("minor order", k, 11));
        }
        combinations(g.order(), k, |branch| {
            let bmask = branch.iter().fold(0u64, |m, &v| m | (1 << v));
            let mut paths = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    paths.push(branch_paths(g, branch[i], branch[j], bmask, d.s));
                }
            }
            for edges in edge_sets(&paths) {
                shapes.insert((k, edges));
            }
        });
    }
    let mut found: BTreeMap<(usize, Vec<u8>), Graph> = BTreeMap::new();
    for (k, edges) in shapes {
        let mut list = Vec::new();
        let mut p = 0;
        for i in 0..k {
            for j in i + 1..k {
                if edges & (1 << p) != 0 {
                    list.push((i, j));
                }
                p += 1;
            }
        }
        let h = Graph::new(k, list)?;
        let code = canonical_code(&h)?;
        found.entry((k, code)).or_insert(h);
    }
    Ok(found.into_values().collect())
}

/// Maximum of `measure` over the shallow topological minors of `g` at depth
/// `d` with at most `max_order` vertices; zero when there are none.
pub fn grade(g: &Graph, d: DepthParam, measure: Measure, max_order: usize) -> Result<Ratio<usize>> {
    let cfg = HomSearchConfig::default();
    let mut cache: HashMap<Vec<u8>, Ratio<usize>> = HashMap::new();
    let mut best = Ratio::from_integer(0);
    for h in shallow_top_minors(g, d, max_order)? {
        let code = canonical_code(&h)?;
        let value = match cache.get(&code) {
            Some(&v) => v,
            None => {
                let v = match measure {
                    Measure::Omega => Ratio::from_integer(clique_number_with(&h, h.order(), &cfg)?),
                    Measure::Chi => Ratio::from_integer(chromatic_number_with(&h, h.order(), &cfg)?),
                    Measure::AvgDegree => Ratio::new(2 * h.edge_count(), h.order()),
                };
                cache.insert(code, v);
                v
            }
        };
        best = best.max(value);
    }
    Ok(best)
}
