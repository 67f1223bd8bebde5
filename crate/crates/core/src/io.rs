//! Text formats for graphs, digraphs and structures.
//!
//! ```text
//! # graph           # digraph        # structure
//! n 3               n 2              sig R/3 E/2
//! e 0 1             a 0 1            n 3
//! e 1 2                              t R 0 1 2
//! ```
//!
//! Blank lines and `#` comments are ignored; ids are 0-based decimals.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::named::{self, Named};
use crate::structure::{Signature, Structure, ToStructure};

/// A parsed object, keeping the kind the file declared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Graph(Graph),
    Digraph(Digraph),
    Structure(Structure),
}

impl Parsed {
    pub fn kind(&self) -> &'static str {
        match self {
            Parsed::Graph(_) => "graph",
            Parsed::Digraph(_) => "digraph",
            Parsed::Structure(_) => "structure",
        }
    }

    pub fn as_graph(&self) -> Option<&Graph> {
        match self {
            Parsed::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn into_structure(self) -> Structure {
        self.to_structure().into_owned()
    }
}

impl ToStructure for Parsed {
    fn to_structure(&self) -> std::borrow::Cow<'_, Structure> {
        match self {
            Parsed::Graph(g) => g.to_structure(),
            Parsed::Digraph(d) => d.to_structure(),
            Parsed::Structure(s) => s.to_structure(),
        }
    }
}

impl From<Named> for Parsed {
    fn from(n: Named) -> Self {
        match n {
            Named::Graph(g) => Parsed::Graph(g),
            Named::Digraph(d) => Parsed::Digraph(d),
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_error(line, format!("expected a non-negative integer, got {tok:?}")))
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Kind {
    Unknown,
    Edges,
    Arcs,
    Tuples,
}

pub fn parse(text: &str) -> Result<Parsed> {
    let mut n: Option<usize> = None;
    let mut sig: Option<Signature> = None;
    let mut kind = Kind::Unknown;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut tuples: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let head = toks.next().expect("non-empty line");
        let rest: Vec<&str> = toks.collect();
        match head {
            "n" => {
                if n.is_some() {
                    return Err(parse_error(line, "duplicate `n` line"));
                }
                let [count] = rest.as_slice() else {
                    return Err(parse_error(line, "`n` takes exactly one count"));
                };
                n = Some(parse_id(count, line)?);
            }
            "sig" => {
                if sig.is_some() || kind != Kind::Unknown {
                    return Err(parse_error(line, "`sig` must come once, before any tuple"));
                }
                let mut syms = Vec::new();
                for s in &rest {
                    let (name, arity) = s
                        .split_once('/')
                        .ok_or_else(|| parse_error(line, format!("expected name/arity, got {s:?}")))?;
                    syms.push((name.to_string(), parse_id(arity, line)?));
                }
                let parsed = Signature::new(syms).map_err(|e| parse_error(line, e.to_string()))?;
                tuples = vec![BTreeSet::new(); parsed.len()];
                sig = Some(parsed);
            }
            "e" | "a" => {
                let this = if head == "e" { Kind::Edges } else { Kind::Arcs };
                if sig.is_some() || (kind != Kind::Unknown && kind != this) {
                    return Err(parse_error(line, "cannot mix `e`, `a` and `t` lines"));
                }
                kind = this;
                let count = n.ok_or_else(|| parse_error(line, "`n` must precede edges"))?;
                let [u, v] = rest.as_slice() else {
                    return Err(parse_error(line, format!("`{head}` takes two vertex ids")));
                };
                let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
                if u >= count || v >= count {
                    return Err(parse_error(
                        line,
                        format!("vertex out of range: ({u}, {v}) with n = {count}"),
                    ));
                }
                if u == v {
                    return Err(parse_error(line, format!("loop at vertex {u}")));
                }
                pairs.push((u, v));
            }
            "t" => {
                let s = sig
                    .as_ref()
                    .ok_or_else(|| parse_error(line, "`t` needs a preceding `sig` line"))?;
                kind = Kind::Tuples;
                let count = n.ok_or_else(|| parse_error(line, "`n` must precede tuples"))?;
                let (name, ids) = rest
                    .split_first()
                    .ok_or_else(|| parse_error(line, "`t` needs a symbol name"))?;
                let r = s
                    .index_of(name)
                    .ok_or_else(|| parse_error(line, format!("unknown symbol {name:?}")))?;
                let arity = s.symbols()[r].arity;
                if ids.len() != arity {
                    return Err(parse_error(
                        line,
                        format!("{name} has arity {arity}, got {} ids", ids.len()),
                    ));
                }
                let t = ids
                    .iter()
                    .map(|x| parse_id(x, line))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(x) = t.iter().find(|&&x| x >= count) {
                    return Err(parse_error(line, format!("element {x} out of range, n = {count}")));
                }
                tuples[r].insert(t);
            }
            other => return Err(parse_error(line, format!("unknown directive {other:?}"))),
        }
    }
    let last = text.lines().count().max(1);
    let n = n.ok_or_else(|| parse_error(last, "missing `n` line"))?;
    if let Some(sig) = sig {
        return Ok(Parsed::Structure(Structure::new(sig, n, tuples)?));
    }
    match kind {
        Kind::Arcs => Ok(Parsed::Digraph(Digraph::new(n, pairs)?)),
        _ => Ok(Parsed::Graph(Graph::new(n, pairs)?)),
    }
}

/// Reads `path`, or resolves a built-in name when no such file exists.
/// A missing `K3.g` falls back to the built-in `K3`.
pub fn load(spec: &str) -> Result<Parsed> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        return parse(&text);
    }
    named::lookup(spec)
        .or_else(|| spec.strip_suffix(".g").and_then(named::lookup))
        .map(Parsed::from)
        .ok_or_else(|| Error::Io(format!("{spec}: no such file or built-in name")))
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn format_digraph(d: &Digraph) -> String {
    let mut out = format!("n {}\n", d.order());
    for (u, v) in d.arcs() {
        out.push_str(&format!("a {u} {v}\n"));
    }
    out
}

pub fn format_structure(s: &Structure) -> String {
    let mut out = format!("sig {}\nn {}\n", s.signature(), s.order());
    for block in s.blocks() {
        let name = &s.signature().symbols()[block.symbol].name;
        let ids: Vec<String> = block.tuple.iter().map(ToString::to_string).collect();
        out.push_str(&format!("t {name} {}\n", ids.join(" ")));
    }
    out
}

pub fn format(p: &Parsed) -> String {
    match p {
        Parsed::Graph(g) => format_graph(g),
        Parsed::Digraph(d) => format_digraph(d),
        Parsed::Structure(s) => format_structure(s),
    }
}

/// Prefers the graph or digraph format when the structure is one.
pub fn format_auto(s: &Structure) -> String {
    if *s.signature() == Signature::binary() {
        if let Some(g) = s.as_graph() {
            return format_graph(&g);
        }
        if let Some(d) = s.as_digraph() {
            return format_digraph(&d);
        }
    }
    format_structure(s)
}

pub fn write(path: &Path, p: &Parsed) -> Result<()> {
    fs::write(path, format(p)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_structure(path: &Path, s: &Structure) -> Result<()> {
    fs::write(path, format_auto(s)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k2() {
        assert_eq!(parse("n 2\ne 0 1").unwrap(), Parsed::Graph(Graph::complete(2)));
    }

    #[test]
    fn reports_line_of_bad_edge() {
        let err = parse("n 2\ne 0 5\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "vertex out of range: (0, 5) with n = 2".into() });
        assert!(matches!(parse("# c\n\nn 2\nx 1").unwrap_err(), Error::Parse { line: 4, .. }));
        assert!(matches!(parse("e 0 1").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse("n 3\ne 0 1\na 1 2").unwrap_err(), Error::Parse { line: 3, .. }));
    }

    #[test]
    fn round_trips() {
        let p = Parsed::Graph(Graph::petersen());
        assert_eq!(parse(&format(&p)).unwrap(), p);
        let d = Parsed::Digraph(Digraph::transitive_tournament(4));
        assert_eq!(parse(&format(&d)).unwrap(), d);
        let sig = Signature::new([("R", 3), ("U", 1)]).unwrap();
        let s = Structure::from_tuples(sig, 4, [(0, vec![0, 1, 2]), (0, vec![3, 3, 1]), (1, vec![2])]).unwrap();
        let s = Parsed::Structure(s);
        assert_eq!(parse(&format(&s)).unwrap(), s);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# triangle\n\nn 3  # three\ne 0 1\ne 1 2\ne 0 2\n";
        assert_eq!(parse(text).unwrap(), Parsed::Graph(Graph::complete(3)));
    }
}
