//! `t`-approximations: structures `B` with `A -> B` such that every
//! substructure of `B` on fewer than `t` elements maps back to `A`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::duality::{Direction, Verdict};
use crate::error::{Error, Result};
use crate::generators::{digraphs_of_order, graphs_of_order, structures_of_order};
use crate::hom::{core_with, hom_exists, HomSearchConfig};
use crate::ops::{gaifman, induced_substructure};
use crate::sparsity::{low_td_coloring, TdColoring};
use crate::structure::{Homomorphism, Structure, ToStructure};

/// Default per-relation tuple cap for oracle candidates over general signatures.
pub const ORACLE_TUPLE_CAP: usize = 6;
/// Largest input order for the quotient construction.
pub const QUOTIENT_CAP: usize = 16;

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub approx: Structure,
    /// Homomorphism from the source into `approx`.
    pub forward: Homomorphism,
    pub t: usize,
    /// Set when `approx` has minimum order.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub enum ThetaOutcome {
    Found(ApproxResult),
    NotFound { t: usize, max_order: usize },
}

impl ThetaOutcome {
    pub fn found(self) -> Option<ApproxResult> {
        match self {
            ThetaOutcome::Found(r) => Some(r),
            ThetaOutcome::NotFound { .. } => None,
        }
    }
}

/// Checks that `b` is a `t`-approximation of `a`. Induced substructures
/// are tried by increasing size so a reported counterexample is smallest.
pub fn is_t_approximation<A, B>(a: &A, b: &B, t: usize, cfg: &HomSearchConfig) -> Result<Verdict>
where
    A: ToStructure + ?Sized,
    B: ToStructure + ?Sized,
{
    let (a, b) = (a.to_structure(), b.to_structure());
    let scope = format!("induced substructures of order < {t}");
    if hom_exists(&*a, &*b, cfg)?.is_none() {
        return Ok(Verdict::fails(scope, Direction::SourceAvoidsApprox, a.into_owned(), None));
    }
    let mut checked = 0;
    for k in 1..t.min(b.order() + 1) {
        let mut failure: Option<Result<Structure>> = None;
        crate::sparsity::for_each_subset(b.order(), k, &mut |subset| {
            if failure.is_some() {
                return;
            }
            checked += 1;
            let sub = match induced_substructure(&*b, subset) {
                Ok(s) => s,
                Err(e) => return failure = Some(Err(e)),
            };
            match hom_exists(&sub, &*a, cfg) {
                Ok(Some(_)) => {}
                Ok(None) => failure = Some(Ok(sub)),
                Err(e) => failure = Some(Err(e)),
            }
        });
        if let Some(f) = failure {
            return Ok(Verdict::fails(scope, Direction::SubstructureAvoidsSource, f?, None));
        }
    }
    Ok(Verdict::holds(scope, checked))
}

fn candidates(a: &Structure, m: usize, tuple_cap: usize) -> Result<Vec<Structure>> {
    Ok(if a.as_graph().is_some() {
        graphs_of_order(m)?.iter().map(|g| g.to_structure().into_owned()).collect()
    } else if a.as_digraph().is_some() {
        digraphs_of_order(m)?.iter().map(|g| g.to_structure().into_owned()).collect()
    } else {
        structures_of_order(a.signature(), m, tuple_cap)?
    })
}

/// Minimum-order `t`-approximation by exhaustive search over candidates
/// of increasing order, up to `max_order`. Graph inputs are searched among
/// simple graphs, digraph inputs among loopless digraphs, anything else
/// among all structures of the signature with at most
/// [`ORACLE_TUPLE_CAP`] tuples per relation.
pub fn theta_oracle<A: ToStructure + ?Sized>(a: &A, t: usize, max_order: usize, cfg: &HomSearchConfig) -> Result<ThetaOutcome> {
    theta_oracle_with(a, t, max_order, ORACLE_TUPLE_CAP, cfg)
}

pub fn theta_oracle_with<A: ToStructure + ?Sized>(
    a: &A,
    t: usize,
    max_order: usize,
    tuple_cap: usize,
    cfg: &HomSearchConfig,
) -> Result<ThetaOutcome> {
    let a = a.to_structure();
    if t == 0 {
        return Err(Error::Argument("t must be positive".into()));
    }
    for m in 0..=max_order {
        let tier = if m == 0 {
            vec![Structure::empty(a.signature().clone(), 0)]
        } else {
            candidates(&a, m, tuple_cap)?
        };
        // the whole tier is checked before the earliest hit is taken
        let hits: Vec<Result<Option<Homomorphism>>> = tier
            .par_iter()
            .map(|b| {
                let Some(forward) = hom_exists(&*a, b, cfg)? else {
                    return Ok(None);
                };
                Ok(is_t_approximation(&*a, b, t, cfg)?.holds.then_some(forward))
            })
            .collect();
        for (b, hit) in tier.into_iter().zip(hits) {
            if let Some(forward) = hit? {
                return Ok(ThetaOutcome::Found(ApproxResult {
                    approx: b,
                    forward,
                    t,
                    exact: true,
                }));
            }
        }
    }
    Ok(ThetaOutcome::NotFound { t, max_order })
}

/// Intermediate data of the quotient construction.
#[derive(Clone, Debug)]
pub struct QuotientTrace {
    pub coloring: TdColoring,
    /// Each color subset with the retraction of its induced substructure,
    /// as `(element, image)` pairs in input labels.
    pub retractions: Vec<(Vec<usize>, Vec<(usize, usize)>)>,
    /// Core order of each color subset's induced substructure.
    pub core_orders: Vec<usize>,
    /// Equivalence classes, indexed by quotient element.
    pub classes: Vec<Vec<usize>>,
}

impl QuotientTrace {
    /// Line-oriented text form for inspection and snapshots.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "t {}", self.coloring.t);
        let _ = writeln!(out, "colors {}", self.coloring.color_count);
        let _ = writeln!(out, "coloring {}", join(&self.coloring.colors));
        for ((subset, map), core) in self.retractions.iter().zip(&self.core_orders) {
            let pairs: Vec<String> = map.iter().map(|(x, y)| format!("{x}->{y}")).collect();
            let _ = writeln!(out, "subset {} core {} map {}", join(subset), core, pairs.join(" "));
        }
        for (i, class) in self.classes.iter().enumerate() {
            let _ = writeln!(out, "class {i}: {}", join(class));
        }
        out
    }
}

/// The quotient `t`-approximation: color the Gaifman graph with a low
/// tree-depth coloring, retract each union of `min(t, N)` color classes
/// onto its core, identify elements of equal color that every relevant
/// retraction sends to the same place, and keep a tuple of classes exactly
/// when every relevant retraction sends it into a tuple of `a`.
pub fn quotient_approximation<A: ToStructure + ?Sized>(
    a: &A,
    t: usize,
    cfg: &HomSearchConfig,
) -> Result<(ApproxResult, QuotientTrace)> {
    let a = a.to_structure();
    if t == 0 {
        return Err(Error::Argument("t must be positive".into()));
    }
    if t < a.signature().max_arity() {
        return Err(Error::Precondition(format!(
            "t = {t} is below the maximum arity {}",
            a.signature().max_arity()
        )));
    }
    let n = a.order();
    if n > QUOTIENT_CAP {
        return Err(Error::capacity("quotient input order", n, QUOTIENT_CAP));
    }
    let coloring = low_td_coloring(&gaifman(&*a), t)?;
    let colors = coloring.color_count;
    let k = t.min(colors);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    if n > 0 {
        crate::sparsity::for_each_subset(colors, k, &mut |s| subsets.push(s.to_vec()));
    }
    // images[i][x]: where the retraction of subset i sends x, if x is in it
    let mut images: Vec<Vec<Option<usize>>> = Vec::with_capacity(subsets.len());
    let mut retractions = Vec::with_capacity(subsets.len());
    let mut core_orders = Vec::with_capacity(subsets.len());
    for subset in &subsets {
        let members: Vec<usize> = (0..n).filter(|&x| subset.contains(&coloring.colors[x])).collect();
        let part = induced_substructure(&*a, &members)?;
        let c = core_with(&part, QUOTIENT_CAP, cfg)?;
        let endo = Homomorphism::new(c.retraction.map().iter().map(|&i| c.embedding[i]).collect());
        if !endo.is_valid(&part, &part) {
            return Err(Error::Construction("retraction is not an endomorphism".into()));
        }
        let mut image = vec![None; n];
        let mut pairs = Vec::with_capacity(members.len());
        for (local, &x) in members.iter().enumerate() {
            let y = members[endo.apply(local)];
            image[x] = Some(y);
            pairs.push((x, y));
        }
        images.push(image);
        retractions.push((subset.clone(), pairs));
        core_orders.push(c.core.order());
    }
    let mut class_of = vec![0; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_key: BTreeMap<(usize, Vec<Option<usize>>), usize> = BTreeMap::new();
    for x in 0..n {
        let key = (coloring.colors[x], images.iter().map(|im| im[x]).collect());
        let id = *by_key.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[x] = id;
        classes[id].push(x);
    }
    let q = classes.len();
    let class_color: Vec<usize> = classes.iter().map(|c| coloring.colors[c[0]]).collect();
    let mut relations = Vec::with_capacity(a.signature().len());
    for (r, sym) in a.signature().symbols().iter().enumerate() {
        let mut rel = std::collections::BTreeSet::new();
        let total = q.checked_pow(sym.arity as u32).unwrap_or(usize::MAX);
        if total > 1 << 22 {
            return Err(Error::capacity("quotient tuple candidates", total, 1 << 22));
        }
        for code in 0..total {
            let mut tuple = vec![0; sym.arity];
            let mut c = code;
            for slot in tuple.iter_mut().rev() {
                *slot = c % q;
                c /= q;
            }
            let mut relevant = false;
            let mut kept = true;
            for (subset, image) in subsets.iter().zip(&images) {
                if !tuple.iter().all(|&cl| subset.contains(&class_color[cl])) {
                    continue;
                }
                relevant = true;
                // every representative choice must give the same tuple
                let reps: Vec<usize> = tuple.iter().map(|&cl| classes[cl][0]).collect();
                let mapped: Vec<usize> = reps.iter().map(|&x| image[x].expect("class inside subset")).collect();
                for (pos, &cl) in tuple.iter().enumerate() {
                    for &other in &classes[cl][1..] {
                        if image[other] != Some(mapped[pos]) {
                            return Err(Error::Construction("class representatives disagree under a retraction".into()));
                        }
                    }
                }
                if !a.contains(r, &mapped) {
                    kept = false;
                    break;
                }
            }
            if relevant && kept {
                rel.insert(tuple);
            }
        }
        relations.push(rel);
    }
    let approx = Structure::new(a.signature().clone(), q, relations)?;
    let forward = Homomorphism::new(class_of);
    if !forward.is_valid(&*a, &approx) {
        return Err(Error::Construction("quotient map is not a homomorphism".into()));
    }
    let check = is_t_approximation(&*a, &approx, t, cfg)?;
    if !check.holds {
        return Err(Error::Construction(format!(
            "quotient is not a {t}-approximation ({})",
            check.direction.map_or("unknown", Direction::as_str)
        )));
    }
    let trace = QuotientTrace {
        coloring,
        retractions,
        core_orders,
        classes,
    };
    Ok((
        ApproxResult {
            approx,
            forward,
            t,
            exact: false,
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::hom::hom_equivalent;

    fn theta(g: &Graph, t: usize, max: usize) -> usize {
        theta_oracle(g, t, max, &HomSearchConfig::default())
            .unwrap()
            .found()
            .unwrap()
            .approx
            .order()
    }

    #[test]
    fn oracle_values() {
        assert_eq!(theta(&Graph::cycle(6), 2, 6), 2);
        assert_eq!(theta(&Graph::cycle(5), 4, 5), 5);
        assert_eq!(theta(&Graph::cycle(6), 3, 6), 2);
        let none = theta_oracle(&Graph::cycle(5), 4, 4, &HomSearchConfig::default()).unwrap();
        assert!(matches!(none, ThetaOutcome::NotFound { max_order: 4, .. }));
    }

    #[test]
    fn approximation_checks() {
        let cfg = HomSearchConfig::default();
        assert!(is_t_approximation(&Graph::cycle(6), &Graph::complete(2), 10, &cfg).unwrap().holds);
        let v = is_t_approximation(&Graph::cycle(5), &Graph::complete(3), 4, &cfg).unwrap();
        assert_eq!(v.direction, Some(Direction::SubstructureAvoidsSource));
        assert_eq!(v.counterexample.unwrap().order(), 3);
        let p = Graph::petersen();
        assert!(is_t_approximation(&p, &p, 4, &cfg).unwrap().holds);
    }

    #[test]
    fn quotient_keeps_a_core() {
        let cfg = HomSearchConfig::default();
        let (r, trace) = quotient_approximation(&Graph::complete(3), 3, &cfg).unwrap();
        assert!(r.approx.order() <= 3);
        assert!(hom_equivalent(&r.approx, &Graph::complete(3), &cfg).unwrap());
        assert!(trace.to_text().contains("class 2"));
    }

    #[test]
    fn quotient_collapses_even_path() {
        let cfg = HomSearchConfig::default();
        let p = Graph::path(10);
        let (r, _) = quotient_approximation(&p, 2, &cfg).unwrap();
        assert!(r.approx.order() < 10);
        assert!(is_t_approximation(&p, &r.approx, 2, &cfg).unwrap().holds);
    }

    #[test]
    fn quotient_of_edgeless_is_a_point() {
        let (r, trace) = quotient_approximation(&Graph::edgeless(5), 2, &HomSearchConfig::default()).unwrap();
        assert_eq!(r.approx.order(), 1);
        assert_eq!(trace.classes, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn quotient_needs_t_at_least_arity() {
        assert!(matches!(
            quotient_approximation(&Graph::complete(2), 1, &HomSearchConfig::default()),
            Err(Error::Precondition(_))
        ));
    }
}
