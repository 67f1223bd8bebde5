//! Constructive operations on graphs and structures.

use std::collections::{BTreeSet, HashSet};

use crate::canon::{canonical_code, CANON_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, VERTEX_BUDGET};
use crate::structure::{Signature, Structure, ToStructure};

/// The `k`-subdivision: every edge becomes a path with `k` new internal
/// vertices. Original vertices keep ids `0..n` and new vertices follow, edge
/// by edge in edge order.
pub fn subdivide(g: &Graph, k: usize) -> Result<Graph> {
    let lengths = vec![k + 1; g.edge_count()];
    subdivide_general(g, &lengths)
}

/// Replaces the `i`-th edge (in [`Graph::edges`] order) by a path with
/// `lengths[i]` edges. A length of 1 keeps the edge.
pub fn subdivide_general(g: &Graph, lengths: &[usize]) -> Result<Graph> {
    if lengths.len() != g.edge_count() {
        return Err(Error::Argument(format!(
            "{} lengths for {} edges",
            lengths.len(),
            g.edge_count()
        )));
    }
    if lengths.contains(&0) {
        return Err(Error::Argument("path lengths must be positive".into()));
    }
    let extra: usize = lengths.iter().map(|l| l - 1).sum();
    let total = g.order().saturating_add(extra);
    if total > VERTEX_BUDGET {
        return Err(Error::capacity("subdivision order", total, VERTEX_BUDGET));
    }
    let mut next = g.order();
    let mut edges = BTreeSet::new();
    for ((u, v), &len) in g.edges().zip(lengths) {
        let mut prev = u;
        for _ in 1..len {
            edges.insert((prev.min(next), prev.max(next)));
            prev = next;
            next += 1;
        }
        edges.insert((prev.min(v), prev.max(v)));
    }
    Ok(Graph::from_set(total, edges))
}

/// Disjoint union; `b`'s elements are shifted by `|a|`.
pub fn disjoint_union<A, B>(a: &A, b: &B) -> Result<Structure>
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
    let shift = a.order();
    let relations = a
        .relations()
        .iter()
        .zip(b.relations())
        .map(|(ra, rb)| {
            ra.iter()
                .cloned()
                .chain(rb.iter().map(|t| t.iter().map(|&x| x + shift).collect()))
                .collect()
        })
        .collect();
    Structure::new(a.signature().clone(), a.order() + b.order(), relations)
}

/// Disjoint union of a list of structures over `sig`; the empty list gives
/// the empty structure.
pub fn disjoint_union_all<'a, I>(sig: &Signature, parts: I) -> Result<Structure>
where
    I: IntoIterator<Item = &'a Structure>,
{
    parts
        .into_iter()
        .try_fold(Structure::empty(sig.clone(), 0), |acc, s| disjoint_union(&acc, s))
}

/// Merges `v` into `u`. The surviving vertex keeps the smaller id and ids
/// above the larger one shift down by one. An edge `uv` would become a loop
/// and is dropped; parallel edges collapse.
pub fn identify_vertices(g: &Graph, u: usize, v: usize) -> Result<Graph> {
    if u == v {
        return Err(Error::Argument("cannot identify a vertex with itself".into()));
    }
    if u >= g.order() || v >= g.order() {
        return Err(Error::Argument(format!(
            "vertex out of range for {} vertices",
            g.order()
        )));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let relabel = |x: usize| {
        if x == gone {
            keep
        } else if x > gone {
            x - 1
        } else {
            x
        }
    };
    let edges = g
        .edges()
        .map(|(a, b)| (relabel(a), relabel(b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    Ok(Graph::from_set(g.order() - 1, edges))
}

/// All graphs obtained by identifying one unordered pair of vertices,
/// deduplicated up to isomorphism, in order of first appearance.
pub fn pre_set(g: &Graph) -> Result<Vec<Graph>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for u in 0..g.order() {
        for v in u + 1..g.order() {
            let h = identify_vertices(g, u, v)?;
            if seen.insert(canonical_code(&h)?) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Identifies two elements of a structure. Tuples that would repeat an
/// element are dropped when `drop_degenerate` is set.
pub fn identify_elements(
    a: &Structure,
    u: usize,
    v: usize,
    drop_degenerate: bool,
) -> Result<Structure> {
    if u == v || u >= a.order() || v >= a.order() {
        return Err(Error::Argument(format!(
            "cannot identify {u} and {v} in a universe of {}",
            a.order()
        )));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let relabel = |x: usize| match x.cmp(&gone) {
        std::cmp::Ordering::Equal => keep,
        std::cmp::Ordering::Greater => x - 1,
        std::cmp::Ordering::Less => x,
    };
    let relations = a
        .relations()
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|t| t.iter().map(|&x| relabel(x)).collect::<Vec<_>>())
                .filter(|t| {
                    if !drop_degenerate {
                        return true;
                    }
                    let distinct: BTreeSet<_> = t.iter().collect();
                    distinct.len() == t.len()
                })
                .collect()
        })
        .collect();
    Structure::new(a.signature().clone(), a.order() - 1, relations)
}

/// `Pre` for structures: one identified pair, deduplicated up to
/// isomorphism. Degenerate tuples are dropped iff the input has none, so
/// loop-free inputs stay loop-free.
pub fn pre_set_structure(a: &Structure) -> Result<Vec<Structure>> {
    pre_set_with(a, !a.has_degenerate_tuple())
}

/// Like [`pre_set_structure`] but an identified tuple becomes degenerate
/// instead of disappearing, so identifying two adjacent vertices of a
/// graph leaves a loop. Such members map to no loop-free structure.
pub fn pre_set_keeping_loops(a: &Structure) -> Result<Vec<Structure>> {
    pre_set_with(a, false)
}

fn pre_set_with(a: &Structure, drop: bool) -> Result<Vec<Structure>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for u in 0..a.order() {
        for v in u + 1..a.order() {
            let s = identify_elements(a, u, v, drop)?;
            if seen.insert(canonical_code(&s)?) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Categorical (tensor) product. Element `(a, b)` has id `a * |B| + b`.
pub fn categorical_product<A, B>(a: &A, b: &B) -> Result<Structure>
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
    let order = a
        .order()
        .checked_mul(b.order())
        .filter(|&o| o <= VERTEX_BUDGET)
        .ok_or_else(|| Error::capacity("product order", usize::MAX, VERTEX_BUDGET))?;
    let nb = b.order();
    let relations = a
        .relations()
        .iter()
        .zip(b.relations())
        .map(|(ra, rb)| {
            let mut out = BTreeSet::new();
            for ta in ra {
                for tb in rb {
                    out.insert(ta.iter().zip(tb).map(|(&x, &y)| x * nb + y).collect());
                }
            }
            out
        })
        .collect();
    Structure::new(a.signature().clone(), order, relations)
}

/// Gaifman graph: elements adjacent iff they co-occur in a tuple of arity >= 2.
pub fn gaifman<A: ToStructure + ?Sized>(a: &A) -> Graph {
    let a = a.to_structure();
    let mut edges = BTreeSet::new();
    for t in a.relations().iter().flatten() {
        for (i, &x) in t.iter().enumerate() {
            for &y in &t[i + 1..] {
                if x != y {
                    edges.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    Graph::from_set(a.order(), edges)
}

/// Bipartite incidence graph. Elements keep ids `0..n`; block `i` (in
/// [`Structure::blocks`] order) becomes vertex `n + i`.
pub fn incidence<A: ToStructure + ?Sized>(a: &A) -> Graph {
    let a = a.to_structure();
    let n = a.order();
    let mut edges = BTreeSet::new();
    let mut blocks = 0;
    for (i, block) in a.blocks().enumerate() {
        for &x in &block.tuple {
            edges.insert((x, n + i));
        }
        blocks += 1;
    }
    Graph::from_set(n + blocks, edges)
}

/// Induced substructure on `subset` (in the given order, which becomes the
/// new labelling).
pub fn induced_substructure<A: ToStructure + ?Sized>(a: &A, subset: &[usize]) -> Result<Structure> {
    let a = a.to_structure();
    let mut pos = vec![usize::MAX; a.order()];
    for (i, &x) in subset.iter().enumerate() {
        if x >= a.order() {
            return Err(Error::Argument(format!(
                "element {x} out of range for universe of {}",
                a.order()
            )));
        }
        if pos[x] != usize::MAX {
            return Err(Error::Argument(format!("element {x} listed twice")));
        }
        pos[x] = i;
    }
    let relations = a
        .relations()
        .iter()
        .map(|rel| {
            rel.iter()
                .filter(|t| t.iter().all(|&x| pos[x] != usize::MAX))
                .map(|t| t.iter().map(|&x| pos[x]).collect())
                .collect()
        })
        .collect();
    Ok(Structure::from_parts_unchecked(
        a.signature().clone(),
        subset.len(),
        relations,
    ))
}

/// Components of the Gaifman graph as induced substructures.
pub fn components(a: &Structure) -> Vec<Structure> {
    gaifman(a)
        .components()
        .iter()
        .map(|c| induced_substructure(a, c).expect("component in range"))
        .collect()
}

/// Whether the Gaifman graph is connected (the empty structure counts as
/// disconnected: it has no component).
pub fn is_connected(a: &Structure) -> bool {
    a.order() > 0 && gaifman(a).is_connected()
}

/// Number of isomorphism classes among `items`, using canonical codes.
pub fn count_isomorphism_classes<'a, I>(items: I) -> Result<usize>
where
    I: IntoIterator<Item = &'a Structure>,
{
    let mut seen = HashSet::new();
    for s in items {
        seen.insert(crate::canon::canonical_code_with_cap(s, CANON_CAP)?);
    }
    Ok(seen.len())
}
