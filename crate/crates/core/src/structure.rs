//! Relational signatures, finite structures and homomorphism certificates.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph, VERTEX_BUDGET};

/// Largest arity a relation symbol may have.
pub const MAX_ARITY: usize = 8;

/// Name of the single binary symbol used when graphs and digraphs are viewed
/// as structures.
pub const EDGE_SYMBOL: &str = "E";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with unique names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out: Vec<Symbol> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::Argument(format!("invalid symbol name {name:?}")));
            }
            if arity == 0 || arity > MAX_ARITY {
                return Err(Error::Argument(format!(
                    "symbol {name} has arity {arity}, allowed 1..={MAX_ARITY}"
                )));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(Error::Argument(format!("duplicate symbol {name}")));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    /// The signature `{E/2}` shared by graphs and digraphs.
    pub fn binary() -> Self {
        Signature {
            symbols: vec![Symbol {
                name: EDGE_SYMBOL.to_string(),
                arity: 2,
            }],
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// One tuple of one relation: `(R, x_1, ..., x_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub symbol: usize,
    pub tuple: Vec<usize>,
}

/// A finite structure over a [`Signature`] with universe `0..n`.
///
/// Relations are stored as sorted tuple sets and are taken literally: a
/// symmetric binary relation must contain both orientations explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    sig: Signature,
    n: usize,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl Structure {
    pub fn new(sig: Signature, n: usize, relations: Vec<BTreeSet<Vec<usize>>>) -> Result<Self> {
        if n > VERTEX_BUDGET {
            return Err(Error::capacity("universe size", n, VERTEX_BUDGET));
        }
        if relations.len() != sig.len() {
            return Err(Error::Argument(format!(
                "{} relations given for {} symbols",
                relations.len(),
                sig.len()
            )));
        }
        for (sym, rel) in sig.symbols().iter().zip(&relations) {
            for t in rel {
                if t.len() != sym.arity {
                    return Err(Error::Argument(format!(
                        "tuple {t:?} has length {}, {} has arity {}",
                        t.len(),
                        sym.name,
                        sym.arity
                    )));
                }
                if let Some(&x) = t.iter().find(|&&x| x >= n) {
                    return Err(Error::Argument(format!(
                        "tuple {t:?} of {} mentions {x}, universe has {n} elements",
                        sym.name
                    )));
                }
            }
        }
        Ok(Structure { sig, n, relations })
    }

    /// Structure with no tuples at all.
    pub fn empty(sig: Signature, n: usize) -> Self {
        let relations = vec![BTreeSet::new(); sig.len()];
        Structure { sig, n, relations }
    }

    /// Builds from `(symbol index, tuple)` pairs.
    pub fn from_tuples<I>(sig: Signature, n: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Vec<usize>)>,
    {
        let mut relations = vec![BTreeSet::new(); sig.len()];
        for (sym, t) in tuples {
            if sym >= sig.len() {
                return Err(Error::Argument(format!("symbol index {sym} out of range")));
            }
            relations[sym].insert(t);
        }
        Self::new(sig, n, relations)
    }

    pub(crate) fn from_parts_unchecked(
        sig: Signature,
        n: usize,
        relations: Vec<BTreeSet<Vec<usize>>>,
    ) -> Self {
        Structure { sig, n, relations }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Universe size.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn relation(&self, symbol: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[symbol]
    }

    pub fn relations(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.relations
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn contains(&self, symbol: usize, tuple: &[usize]) -> bool {
        self.relations[symbol].contains(tuple)
    }

    /// All blocks, ordered by symbol then tuple.
    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        self.relations.iter().enumerate().flat_map(|(symbol, rel)| {
            rel.iter().map(move |t| Block {
                symbol,
                tuple: t.clone(),
            })
        })
    }

    /// Applies `v -> perm[v]` to every tuple.
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| t.iter().map(|&x| perm[x]).collect())
                    .collect()
            })
            .collect();
        Structure::from_parts_unchecked(self.sig.clone(), self.n, relations)
    }

    /// True when some tuple repeats an element (a loop, for binary relations).
    pub fn has_degenerate_tuple(&self) -> bool {
        self.relations.iter().flatten().any(|t| {
            let mut seen = t.clone();
            seen.sort_unstable();
            seen.windows(2).any(|w| w[0] == w[1])
        })
    }

    /// Recovers a simple graph when this is a single symmetric, irreflexive
    /// binary relation.
    pub fn as_graph(&self) -> Option<Graph> {
        let rel = self.binary_relation()?;
        if rel.iter().any(|t| t[0] == t[1] || !rel.contains(&vec![t[1], t[0]])) {
            return None;
        }
        Graph::new(self.n, rel.iter().map(|t| (t[0], t[1]))).ok()
    }

    /// Recovers a loopless digraph when this is a single irreflexive binary
    /// relation.
    pub fn as_digraph(&self) -> Option<Digraph> {
        let rel = self.binary_relation()?;
        Digraph::new(self.n, rel.iter().map(|t| (t[0], t[1]))).ok()
    }

    fn binary_relation(&self) -> Option<&BTreeSet<Vec<usize>>> {
        match self.sig.symbols() {
            [s] if s.arity == 2 => Some(&self.relations[0]),
            _ => None,
        }
    }
}

/// Anything that can be viewed as a relational structure.
pub trait ToStructure {
    fn to_structure(&self) -> Cow<'_, Structure>;
}

impl ToStructure for Structure {
    fn to_structure(&self) -> Cow<'_, Structure> {
        Cow::Borrowed(self)
    }
}

impl ToStructure for Graph {
    /// Both orientations of every edge under the symbol `E`.
    fn to_structure(&self) -> Cow<'_, Structure> {
        let rel = self
            .edges()
            .flat_map(|(u, v)| [vec![u, v], vec![v, u]])
            .collect();
        Cow::Owned(Structure::from_parts_unchecked(
            Signature::binary(),
            self.order(),
            vec![rel],
        ))
    }
}

impl ToStructure for Digraph {
    fn to_structure(&self) -> Cow<'_, Structure> {
        let rel = self.arcs().map(|(u, v)| vec![u, v]).collect();
        Cow::Owned(Structure::from_parts_unchecked(
            Signature::binary(),
            self.order(),
            vec![rel],
        ))
    }
}

impl<T: ToStructure + ?Sized> ToStructure for &T {
    fn to_structure(&self) -> Cow<'_, Structure> {
        (**self).to_structure()
    }
}

/// A total map between universes. Validity against a concrete pair of
/// structures is checked by [`Homomorphism::is_valid`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homomorphism {
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism {
            map: (0..n).collect(),
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    /// Checks totality, range and tuple preservation directly from the
    /// definition.
    pub fn is_valid<A: ToStructure + ?Sized, B: ToStructure + ?Sized>(
        &self,
        source: &A,
        target: &B,
    ) -> bool {
        let (src, tgt) = (source.to_structure(), target.to_structure());
        if src.signature() != tgt.signature()
            || self.map.len() != src.order()
            || self.map.iter().any(|&y| y >= tgt.order())
        {
            return false;
        }
        src.relations().iter().enumerate().all(|(r, rel)| {
            rel.iter().all(|t| {
                let image: Vec<usize> = t.iter().map(|&x| self.map[x]).collect();
                tgt.contains(r, &image)
            })
        })
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.map.iter().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(x, y)| format!("{x}->{y}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_validation() {
        assert!(Signature::new([("R", 0)]).is_err());
        assert!(Signature::new([("R", 9)]).is_err());
        assert!(Signature::new([("R", 2), ("R", 3)]).is_err());
        let sig = Signature::new([("R", 2), ("S", 3)]).unwrap();
        assert_eq!(sig.max_arity(), 3);
        assert_eq!(sig.to_string(), "R/2 S/3");
    }

    #[test]
    fn structure_rejects_bad_tuples() {
        let sig = Signature::new([("R", 2)]).unwrap();
        assert!(Structure::from_tuples(sig.clone(), 2, [(0, vec![0, 2])]).is_err());
        assert!(Structure::from_tuples(sig, 2, [(0, vec![0])]).is_err());
    }

    #[test]
    fn graph_round_trips_through_structure() {
        let g = Graph::petersen();
        let s = g.to_structure().into_owned();
        assert_eq!(s.tuple_count(), 30);
        assert_eq!(s.as_graph().unwrap(), g);
        let d = Digraph::directed_path(3);
        let ds = d.to_structure().into_owned();
        assert!(ds.as_graph().is_none());
        assert_eq!(ds.as_digraph().unwrap(), d);
    }

    #[test]
    fn homomorphism_validity_and_composition() {
        let c6 = Graph::cycle(6);
        let k2 = Graph::complete(2);
        let fold = Homomorphism::new((0..6).map(|i| i % 2).collect());
        assert!(fold.is_valid(&c6, &k2));
        assert!(!Homomorphism::new(vec![0; 6]).is_valid(&c6, &k2));
        let swap = Homomorphism::new(vec![1, 0]);
        let composed = fold.then(&swap);
        assert!(composed.is_valid(&c6, &k2));
        assert_eq!(composed.apply(0), 1);
    }
}
