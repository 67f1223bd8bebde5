use std::collections::VecDeque;
use std::fmt;

use crate::graph::Graph;

/// Length of a shortest (odd) cycle; `Infinite` when there is none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Girth::Infinite
    }

    /// Whether this girth strictly exceeds `bound`.
    pub fn exceeds(self, bound: usize) -> bool {
        self > Girth::Finite(bound)
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

fn bfs(g: &Graph, root: usize) -> (Vec<usize>, Vec<usize>) {
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
            }
        }
    }
    (dist, parent)
}

/// Shortest cycle length, from a breadth-first search at every vertex.
pub fn girth(g: &Graph) -> Girth {
    let mut best = usize::MAX;
    for root in 0..g.order() {
        let (dist, parent) = bfs(g, root);
        for (u, w) in g.edges() {
            if dist[u] == usize::MAX || parent[u] == w || parent[w] == u {
                continue;
            }
            best = best.min(dist[u] + dist[w] + 1);
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Shortest odd cycle length. An edge between two vertices at equal
/// distance from a root closes an odd walk of length `2d + 1`.
pub fn odd_girth(g: &Graph) -> Girth {
    let mut best = usize::MAX;
    for root in 0..g.order() {
        let (dist, _) = bfs(g, root);
        for (u, w) in g.edges() {
            if dist[u] != usize::MAX && dist[u] == dist[w] {
                best = best.min(2 * dist[u] + 1);
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}
