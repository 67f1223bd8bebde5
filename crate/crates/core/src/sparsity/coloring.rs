use crate::error::{Error, Result};
use crate::graph::Graph;

use super::treedepth::{TreeDepthMemo, TREE_DEPTH_CAP};

/// Largest graph for which [`chi_t_exact`] searches exhaustively.
pub const CHI_T_EXACT_CAP: usize = 10;
/// Largest `t` for which [`chi_t_exact`] searches exhaustively.
pub const CHI_T_MAX_T: usize = 4;

/// A low tree-depth coloring: the union of any `k <= t` color classes
/// induces a subgraph of tree-depth at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdColoring {
    pub t: usize,
    pub colors: Vec<usize>,
    pub color_count: usize,
}

impl TdColoring {
    /// Members of each color class.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.color_count];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Checks the defining property by direct tree-depth evaluation over
    /// every set of at most `t` classes.
    pub fn is_valid(&self, g: &Graph) -> Result<bool> {
        if self.colors.len() != g.order() || self.colors.iter().any(|&c| c >= self.color_count) {
            return Ok(false);
        }
        let mut memo = TreeDepthMemo::new(g)?;
        let class_masks: Vec<u64> = self
            .classes()
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        let mut ok = true;
        for k in 1..=self.t.min(self.color_count) {
            for_each_subset(self.color_count, k, &mut |subset| {
                let mask = subset.iter().fold(0, |m, &c| m | class_masks[c]);
                if ok && memo.tree_depth(mask) > k {
                    ok = false;
                }
            });
        }
        Ok(ok)
    }
}

pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Whether every union of `<= t` classes containing `color` (among the
/// colors in `0..used`) stays within its tree-depth bound. `masks[c]` holds
/// the vertices currently colored `c`.
fn extension_ok(memo: &mut TreeDepthMemo, masks: &[u64], used: usize, color: usize, t: usize) -> Result<bool> {
    let others: Vec<usize> = (0..used).filter(|&c| c != color).collect();
    for extra in 0..t.min(others.len() + 1) {
        let mut ok = true;
        let mut err = None;
        for_each_subset(others.len(), extra, &mut |subset| {
            if !ok || err.is_some() {
                return;
            }
            let mask = subset.iter().fold(masks[color], |m, &i| m | masks[others[i]]);
            if mask.count_ones() as usize > TREE_DEPTH_CAP.max(CHI_T_EXACT_CAP) * 2 {
                err = Some(Error::capacity(
                    "low tree-depth union size",
                    mask.count_ones() as usize,
                    TREE_DEPTH_CAP * 2,
                ));
                return;
            }
            if memo.tree_depth(mask) > extra + 1 {
                ok = false;
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn search(
    order: &[usize],
    i: usize,
    n_colors: usize,
    t: usize,
    memo: &mut TreeDepthMemo,
    masks: &mut Vec<u64>,
    colors: &mut Vec<usize>,
) -> Result<bool> {
    if i == order.len() {
        return Ok(true);
    }
    let v = order[i];
    let used = masks.iter().filter(|&&m| m != 0).count();
    for c in 0..(used + 1).min(n_colors) {
        masks[c] |= 1 << v;
        let now_used = used.max(c + 1);
        if extension_ok(memo, masks, now_used, c, t)? {
            colors[v] = c;
            if search(order, i + 1, n_colors, t, memo, masks, colors)? {
                return Ok(true);
            }
        }
        masks[c] &= !(1 << v);
    }
    Ok(false)
}

fn check_exact_caps(g: &Graph, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::Argument("t must be at least 1".into()));
    }
    if g.order() > CHI_T_EXACT_CAP {
        return Err(Error::capacity("chi_t order", g.order(), CHI_T_EXACT_CAP));
    }
    if t > CHI_T_MAX_T {
        return Err(Error::capacity("chi_t parameter", t, CHI_T_MAX_T));
    }
    Ok(())
}

/// A coloring with the minimum number of colors, found by trying
/// `N = 1, 2, ...` with backtracking.
pub fn optimal_td_coloring(g: &Graph, t: usize) -> Result<TdColoring> {
    check_exact_caps(g, t)?;
    let n = g.order();
    // high degree first; ties by id
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut memo = TreeDepthMemo::new(g)?;
    for n_colors in 0..=n {
        if n_colors == 0 && n > 0 {
            continue;
        }
        let mut masks = vec![0u64; n_colors];
        let mut colors = vec![0; n];
        if search(&order, 0, n_colors, t, &mut memo, &mut masks, &mut colors)? {
            let coloring = normalise(TdColoring {
                t,
                colors,
                color_count: n_colors,
            });
            debug_assert!(coloring.is_valid(g)?);
            return Ok(coloring);
        }
    }
    unreachable!("n distinct colors always form a valid coloring")
}

/// Minimum number of colors of a low tree-depth coloring with parameter `t`.
pub fn chi_t_exact(g: &Graph, t: usize) -> Result<usize> {
    Ok(optimal_td_coloring(g, t)?.color_count)
}

/// Renumbers colors by first appearance and drops unused ones.
fn normalise(c: TdColoring) -> TdColoring {
    let mut map = vec![usize::MAX; c.color_count];
    let mut next = 0;
    let colors = c
        .colors
        .iter()
        .map(|&x| {
            if map[x] == usize::MAX {
                map[x] = next;
                next += 1;
            }
            map[x]
        })
        .collect();
    TdColoring {
        t: c.t,
        colors,
        color_count: next,
    }
}

/// Some valid low tree-depth coloring: optimal within the exhaustive caps,
/// otherwise greedy along a degeneracy order. Always validated.
pub fn low_td_coloring(g: &Graph, t: usize) -> Result<TdColoring> {
    if t == 0 {
        return Err(Error::Argument("t must be at least 1".into()));
    }
    if g.order() <= CHI_T_EXACT_CAP && t <= CHI_T_MAX_T {
        return optimal_td_coloring(g, t);
    }
    let coloring = greedy_td_coloring(g, t)?;
    if !coloring.is_valid(g)? {
        return Err(Error::Construction(
            "greedy low tree-depth coloring failed validation".into(),
        ));
    }
    Ok(coloring)
}

/// Smallest-last order: repeatedly remove a minimum-degree vertex, then
/// color in reverse removal order.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut removed = vec![false; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex left");
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    order.reverse();
    order
}

fn greedy_td_coloring(g: &Graph, t: usize) -> Result<TdColoring> {
    let mut memo = TreeDepthMemo::new(g)?;
    let mut masks: Vec<u64> = Vec::new();
    let mut colors = vec![0; g.order()];
    for v in degeneracy_order(g) {
        let mut chosen = None;
        for c in 0..=masks.len() {
            if c == masks.len() {
                masks.push(0);
            }
            masks[c] |= 1 << v;
            if extension_ok(&mut memo, &masks, masks.len(), c, t)? {
                chosen = Some(c);
                break;
            }
            masks[c] &= !(1 << v);
        }
        let c = chosen.ok_or_else(|| Error::Construction("no color fits".into()))?;
        colors[v] = c;
        if masks.last() == Some(&0) {
            masks.pop();
        }
    }
    Ok(TdColoring {
        t,
        color_count: masks.len(),
        colors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::chromatic_number;

    #[test]
    fn examples() {
        assert_eq!(chi_t_exact(&Graph::path(4), 2).unwrap(), 3);
        for n in 1..=5 {
            for t in 1..=3 {
                assert_eq!(chi_t_exact(&Graph::complete(n), t).unwrap(), n);
            }
        }
        let p = Graph::path(4);
        let hand = TdColoring {
            t: 2,
            colors: vec![0, 1, 2, 0],
            color_count: 3,
        };
        assert!(hand.is_valid(&p).unwrap());
        let two = TdColoring {
            t: 2,
            colors: vec![0, 1, 0, 1],
            color_count: 2,
        };
        assert!(!two.is_valid(&p).unwrap());
    }

    #[test]
    fn t_one_is_chromatic_number() {
        for g in [Graph::cycle(5), Graph::petersen(), Graph::complete_bipartite(2, 3)] {
            assert_eq!(chi_t_exact(&g, 1).unwrap(), chromatic_number(&g).unwrap());
        }
    }

    #[test]
    fn greedy_fallback_is_valid() {
        let g = Graph::cycle(12);
        let c = low_td_coloring(&g, 2).unwrap();
        assert!(c.is_valid(&g).unwrap());
        assert!(chi_t_exact(&g, 5).is_err());
    }
}
