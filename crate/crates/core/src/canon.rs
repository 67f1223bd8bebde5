//! Canonical codes for small structures.
//!
//! Ordered-partition refinement with individualisation; leaves are compared
//! by their relabelled encoding and the lexicographically least one wins.
//! Transpositions that are automorphisms (twins) prune sibling branches.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::{Structure, ToStructure};

/// Default universe cap for full canonicalisation.
pub const CANON_CAP: usize = 10;

/// Isomorphism-invariant byte code; equal iff the structures are isomorphic.
pub fn canonical_code<A: ToStructure + ?Sized>(a: &A) -> Result<Vec<u8>> {
    canonical_code_with_cap(a, CANON_CAP)
}

pub fn canonical_code_with_cap<A: ToStructure + ?Sized>(a: &A, cap: usize) -> Result<Vec<u8>> {
    Ok(canonical_labeling(&a.to_structure(), cap)?.0)
}

/// Canonical code together with a labelling `v -> position` realising it.
pub fn canonical_labeling(a: &Structure, cap: usize) -> Result<(Vec<u8>, Vec<usize>)> {
    if a.order() > cap.min(u8::MAX as usize) {
        return Err(Error::capacity("canonicalisation order", a.order(), cap.min(u8::MAX as usize)));
    }
    let canon = Canonizer::new(a);
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    let cells = if a.order() == 0 {
        Vec::new()
    } else {
        vec![(0..a.order()).collect()]
    };
    canon.search(cells, &mut best);
    Ok(best.unwrap_or_else(|| (canon.encode(&[]), Vec::new())))
}

/// Relabels `a` into its canonical form.
pub fn canonical_form(a: &Structure, cap: usize) -> Result<Structure> {
    let (_, perm) = canonical_labeling(a, cap)?;
    Ok(a.relabel(&perm))
}

struct Canonizer<'a> {
    a: &'a Structure,
    tuples: Vec<(usize, &'a [usize])>,
    incident: Vec<Vec<usize>>,
    twins: Vec<Vec<bool>>,
}

type Cells = Vec<Vec<usize>>;

impl<'a> Canonizer<'a> {
    fn new(a: &'a Structure) -> Self {
        let n = a.order();
        let tuples: Vec<(usize, &[usize])> = a
            .relations()
            .iter()
            .enumerate()
            .flat_map(|(r, rel)| rel.iter().map(move |t| (r, t.as_slice())))
            .collect();
        let mut incident = vec![Vec::new(); n];
        for (i, (_, t)) in tuples.iter().enumerate() {
            for &x in t.iter() {
                if incident[x].last() != Some(&i) {
                    incident[x].push(i);
                }
            }
        }
        let mut twins = vec![vec![false; n]; n];
        for u in 0..n {
            for w in u + 1..n {
                let swap = |x: usize| {
                    if x == u {
                        w
                    } else if x == w {
                        u
                    } else {
                        x
                    }
                };
                let ok = incident[u].iter().chain(&incident[w]).all(|&i| {
                    let (r, t) = tuples[i];
                    let image: Vec<usize> = t.iter().map(|&x| swap(x)).collect();
                    a.contains(r, &image)
                });
                twins[u][w] = ok;
                twins[w][u] = ok;
            }
        }
        Canonizer {
            a,
            tuples,
            incident,
            twins,
        }
    }

    fn colors(&self, cells: &Cells) -> Vec<usize> {
        let mut color = vec![0; self.a.order()];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                color[v] = c;
            }
        }
        color
    }

    /// Splits cells by the multiset of (symbol, own positions, entry colors)
    /// over incident tuples until stable.
    fn refine(&self, mut cells: Cells) -> Cells {
        loop {
            let color = self.colors(&cells);
            let mut next: Cells = Vec::with_capacity(cells.len());
            let mut changed = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<Vec<(usize, u32, Vec<usize>)>, Vec<usize>> =
                    BTreeMap::new();
                for &v in cell {
                    let mut inv: Vec<(usize, u32, Vec<usize>)> = self.incident[v]
                        .iter()
                        .map(|&i| {
                            let (r, t) = self.tuples[i];
                            let mask = t
                                .iter()
                                .enumerate()
                                .filter(|&(_, &x)| x == v)
                                .fold(0u32, |m, (p, _)| m | (1 << p));
                            (r, mask, t.iter().map(|&x| color[x]).collect())
                        })
                        .collect();
                    inv.sort_unstable();
                    groups.entry(inv).or_default().push(v);
                }
                if groups.len() > 1 {
                    changed = true;
                }
                next.extend(groups.into_values());
            }
            cells = next;
            if !changed {
                return cells;
            }
        }
    }

    fn search(&self, cells: Cells, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
        let cells = self.refine(cells);
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(ti) = target else {
            let perm = self.colors(&cells);
            let code = self.encode(&perm);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, perm));
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[ti] {
            if tried.iter().any(|&u| self.twins[u][v]) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..ti]);
            next.push(vec![v]);
            next.push(cells[ti].iter().copied().filter(|&x| x != v).collect());
            next.extend_from_slice(&cells[ti + 1..]);
            self.search(next, best);
        }
    }

    fn encode(&self, perm: &[usize]) -> Vec<u8> {
        let sig = self.a.signature();
        let mut out = Vec::new();
        for s in sig.symbols() {
            out.extend_from_slice(s.name.as_bytes());
            out.push(0);
            out.push(s.arity as u8);
        }
        out.push(0xff);
        out.extend_from_slice(&(self.a.order() as u32).to_le_bytes());
        for rel in self.a.relations() {
            let mut ts: Vec<Vec<usize>> = rel
                .iter()
                .map(|t| t.iter().map(|&x| perm[x]).collect())
                .collect();
            ts.sort_unstable();
            out.extend_from_slice(&(ts.len() as u32).to_le_bytes());
            for t in ts {
                for x in t {
                    out.push(x as u8);
                }
            }
        }
        out
    }
}
