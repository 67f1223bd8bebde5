//! Built-in named graphs and digraphs: `K3`, `C5`, `P4`, `E3` (edgeless),
//! `K3_3`, `petersen`, `T3` (transitive tournament), `DP3` (directed path).

use crate::graph::{Digraph, Graph};

/// A named object: undirected names give graphs, `T`/`DP` give digraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    Graph(Graph),
    Digraph(Digraph),
}

fn number(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn lookup(name: &str) -> Option<Named> {
    if name.eq_ignore_ascii_case("petersen") {
        return Some(Named::Graph(Graph::petersen()));
    }
    if let Some(rest) = name.strip_prefix("DP") {
        return number(rest).filter(|&n| n >= 1).map(|n| Named::Digraph(Digraph::directed_path(n)));
    }
    if let Some(rest) = name.strip_prefix('T') {
        return number(rest).map(|k| Named::Digraph(Digraph::transitive_tournament(k)));
    }
    if let Some(rest) = name.strip_prefix('K') {
        if let Some((a, b)) = rest.split_once('_') {
            return Some(Named::Graph(Graph::complete_bipartite(number(a)?, number(b)?)));
        }
        return number(rest).map(|n| Named::Graph(Graph::complete(n)));
    }
    if let Some(rest) = name.strip_prefix('C') {
        return number(rest).filter(|&n| n >= 3).map(|n| Named::Graph(Graph::cycle(n)));
    }
    if let Some(rest) = name.strip_prefix('P') {
        return number(rest).filter(|&n| n >= 1).map(|n| Named::Graph(Graph::path(n)));
    }
    if let Some(rest) = name.strip_prefix('E') {
        return number(rest).map(|n| Named::Graph(Graph::edgeless(n)));
    }
    None
}

pub fn graph(name: &str) -> Option<Graph> {
    match lookup(name)? {
        Named::Graph(g) => Some(g),
        Named::Digraph(_) => None,
    }
}
