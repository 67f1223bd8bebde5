use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default vertex cap for exact tree-depth.
pub const TREE_DEPTH_CAP: usize = 14;

pub fn tree_depth(g: &Graph) -> Result<usize> {
    tree_depth_with_cap(g, TREE_DEPTH_CAP)
}

/// Exact tree-depth: 0 for the empty graph, the maximum over components
/// when disconnected, and `1 + min_v td(G - v)` when connected.
pub fn tree_depth_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    if g.order() > cap {
        return Err(Error::capacity("tree-depth order", g.order(), cap));
    }
    let mut memo = TreeDepthMemo::new(g)?;
    Ok(memo.tree_depth(memo.full()))
}

/// Tree-depth of induced subgraphs of one graph, memoised on vertex masks.
#[derive(Clone, Debug)]
pub struct TreeDepthMemo {
    adj: Vec<u64>,
    memo: HashMap<u64, usize>,
}

impl TreeDepthMemo {
    pub fn new(g: &Graph) -> Result<Self> {
        if g.order() > 64 {
            return Err(Error::capacity("tree-depth mask width", g.order(), 64));
        }
        let adj = (0..g.order())
            .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect();
        Ok(TreeDepthMemo {
            adj,
            memo: HashMap::new(),
        })
    }

    pub fn full(&self) -> u64 {
        if self.adj.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.adj.len()) - 1
        }
    }

    fn component_of(&self, mask: u64, start: usize) -> u64 {
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp
    }

    /// Tree-depth of the subgraph induced by `mask`.
    pub fn tree_depth(&mut self, mask: u64) -> usize {
        if mask == 0 {
            return 0;
        }
        if mask.count_ones() == 1 {
            return 1;
        }
        if let Some(&d) = self.memo.get(&mask) {
            return d;
        }
        let first = mask.trailing_zeros() as usize;
        let comp = self.component_of(mask, first);
        let depth = if comp != mask {
            let mut rest = mask;
            let mut best = 0;
            while rest != 0 {
                let c = self.component_of(rest, rest.trailing_zeros() as usize);
                rest &= !c;
                best = best.max(self.tree_depth(c));
            }
            best
        } else {
            let mut best = usize::MAX;
            let mut it = mask;
            while it != 0 {
                let v = it.trailing_zeros();
                it &= it - 1;
                best = best.min(self.tree_depth(mask & !(1u64 << v)));
                // a connected graph with an edge has tree-depth at least 2
                if best == 1 {
                    break;
                }
            }
            best + 1
        };
        self.memo.insert(mask, depth);
        depth
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(tree_depth(&Graph::edgeless(5)).unwrap(), 1);
        assert_eq!(tree_depth(&Graph::edgeless(0)).unwrap(), 0);
        assert_eq!(tree_depth(&Graph::path(4)).unwrap(), 3);
        assert_eq!(tree_depth(&Graph::path(7)).unwrap(), 3);
        assert_eq!(tree_depth(&Graph::path(8)).unwrap(), 4);
        // centre last, so early deletions are leaves
        let star = Graph::new(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        assert_eq!(tree_depth(&star).unwrap(), 2);
        for n in 1..=7 {
            assert_eq!(tree_depth(&Graph::complete(n)).unwrap(), n);
        }
        assert!(tree_depth(&Graph::edgeless(15)).is_err());
    }

    #[test]
    fn deleting_a_vertex_lowers_depth_by_at_most_one() {
        let g = Graph::petersen();
        let mut memo = TreeDepthMemo::new(&g).unwrap();
        let full = memo.full();
        let td = memo.tree_depth(full);
        for v in 0..10 {
            assert!(memo.tree_depth(full & !(1 << v)) + 1 >= td);
        }
    }
}
