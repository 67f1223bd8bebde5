//! Brute-force oracles sharing no code with the library beyond reading
//! its graph types.
#![allow(dead_code)]

use homlab::{Digraph, Graph};

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

pub fn arc_matrix(d: &Digraph) -> Vec<Vec<bool>> {
    let n = d.order();
    (0..n).map(|u| (0..n).map(|v| d.has_arc(u, v)).collect()).collect()
}

/// Calls `f` on every map `0..n -> 0..m`, as an odometer.
pub fn for_each_map(n: usize, m: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if n > 0 && m == 0 {
        return;
    }
    let mut map = vec![0; n];
    loop {
        if !f(&map) {
            return;
        }
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

fn preserves(a: &[Vec<bool>], b: &[Vec<bool>], map: &[usize]) -> bool {
    let n = a.len();
    (0..n).all(|u| (0..n).all(|v| !a[u][v] || b[map[u]][map[v]]))
}

pub fn naive_hom_count(a: &[Vec<bool>], b: &[Vec<bool>]) -> u64 {
    let mut count = 0;
    for_each_map(a.len(), b.len(), |m| {
        if preserves(a, b, m) {
            count += 1;
        }
        true
    });
    count
}

pub fn naive_hom_exists(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    let mut found = false;
    for_each_map(a.len(), b.len(), |m| {
        found = preserves(a, b, m);
        !found
    });
    found
}

/// Smallest `k` admitting a proper `k`-coloring, by trying every coloring.
pub fn naive_chromatic(g: &Graph) -> usize {
    let a = adjacency(g);
    let n = a.len();
    for k in 0..=n {
        let mut ok = false;
        for_each_map(n, k, |c| {
            ok = (0..n).all(|u| (0..n).all(|v| !a[u][v] || c[u] != c[v]));
            !ok
        });
        if ok {
            return k;
        }
    }
    n
}

/// Every rooted forest on `n` labelled vertices, as (ancestor-or-self
/// masks, height). Parent `n` means root.
pub fn rooted_forests(n: usize) -> Vec<(Vec<u32>, usize)> {
    let mut out = Vec::new();
    for_each_map(n, n + 1, |parent| {
        let mut masks = vec![0u32; n];
        let mut height = 0;
        for v in 0..n {
            let mut x = v;
            let mut mask = 0u32;
            let mut depth = 0;
            while x < n {
                if mask & (1 << x) != 0 {
                    return true;
                }
                mask |= 1 << x;
                depth += 1;
                x = parent[x];
            }
            masks[v] = mask;
            height = height.max(depth);
        }
        out.push((masks, height));
        true
    });
    out
}

/// Minimum height of a rooted forest whose ancestor relation covers every edge.
pub fn forest_tree_depth(g: &Graph, forests: &[(Vec<u32>, usize)]) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    forests
        .iter()
        .filter(|(masks, _)| edges.iter().all(|&(u, v)| masks[u] & (1 << v) != 0 || masks[v] & (1 << u) != 0))
        .map(|(_, h)| *h)
        .min()
        .unwrap_or(0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of unlabelled graphs on `n` vertices: every labelled graph is
/// reduced to the least edge mask over all relabellings.
pub fn naive_graph_census(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let least = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .fold(0u64, |m, (_, &(u, v))| m | (1 << index(p[u], p[v])))
            })
            .min()
            .unwrap();
        seen.insert(least);
    }
    seen.len()
}

/// Directed analogue of [`naive_graph_census`].
pub fn naive_digraph_census(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u, v)).unwrap();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let least = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .fold(0u64, |m, (_, &(u, v))| m | (1 << index(p[u], p[v])))
            })
            .min()
            .unwrap();
        seen.insert(least);
    }
    seen.len()
}
