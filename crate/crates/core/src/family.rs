//! Named graph families and their text literals.
//!
//! Literals: `K:n`, `C:n`, `E:n`, `P:n` (path on n vertices), `W:n:k`
//! (`C_n + ε_k`), `S:n`, `PETAL:n:i` (i-th member of the petal set with n
//! edges, canonical order), `J(a,b,...)` for joins and `U(a,b,...)` for
//! disjoint unions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_graph_uncapped, CanonicalForm};
use crate::error::GraphError;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum FamilySpec {
    Complete { n: usize },
    Cycle { n: usize },
    Empty { n: usize },
    Path { n: usize },
    Wheel { n: usize, k: usize },
    S { n: usize },
    Petal { edges: usize, index: usize },
    Flower { center: Box<FamilySpec>, edges: usize, index: usize },
    Join { parts: Vec<FamilySpec> },
    DisjointUnion { parts: Vec<FamilySpec> },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        use FamilySpec::*;
        match self {
            Complete { n } => Graph::complete(*n),
            Empty { n } => Graph::empty(*n),
            Cycle { n } => {
                if *n < 3 {
                    return Err(GraphError::Family(format!("C requires n >= 3, got {n}")));
                }
                cycle(*n)
            }
            Path { n } => {
                if *n < 1 {
                    return Err(GraphError::Family("P requires n >= 1".into()));
                }
                Graph::from_edges(*n, (1..*n).map(|i| (i - 1, i)))
            }
            Wheel { n, k } => {
                if *n < 3 || *k < 1 {
                    return Err(GraphError::Family(format!(
                        "W(n,k) requires n >= 3 and k >= 1, got n={n} k={k}"
                    )));
                }
                cycle(*n)?.join(&Graph::empty(*k)?)
            }
            S { n } => s_graph(*n),
            Petal { edges, index } => petal(*edges, *index),
            Flower { center, edges, index } => center.build()?.join(&petal(*edges, *index)?),
            Join { parts } => fold(parts, Graph::join),
            DisjointUnion { parts } => fold(parts, Graph::disjoint_union),
        }
    }
}

fn fold(
    parts: &[FamilySpec],
    op: fn(&Graph, &Graph) -> Result<Graph, GraphError>,
) -> Result<Graph, GraphError> {
    let mut it = parts.iter();
    let first = it
        .next()
        .ok_or_else(|| GraphError::Family("J/U require at least one part".into()))?;
    it.try_fold(first.build()?, |acc, p| op(&acc, &p.build()?))
}

fn cycle(n: usize) -> Result<Graph, GraphError> {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `S_1 = ε_1`, `S_2 = ε_2`, `S_3 = ε_3`, `S_n = K_{n-3} + ε_3`.
pub fn s_graph(n: usize) -> Result<Graph, GraphError> {
    match n {
        0 => Err(GraphError::Family("S requires n >= 1".into())),
        1..=3 => Graph::empty(n),
        _ => Graph::complete(n - 3)?.join(&Graph::empty(3)?),
    }
}

fn petal(edges: usize, index: usize) -> Result<Graph, GraphError> {
    let all = enumerate_petals(edges)?;
    let count = all.len();
    all.into_iter().nth(index).ok_or_else(|| {
        GraphError::Family(format!("PETAL:{edges} has {count} members, index {index} out of range"))
    })
}

/// Largest edge count accepted by [`enumerate_petals`].
pub const PETAL_CAP: usize = 12;

/// All graphs with exactly `n` edges in which every vertex has degree one or
/// two, up to isomorphism, sorted by canonical form.
///
/// Grown edge by edge: each step attaches an edge between two existing
/// vertices of degree < 2, from such a vertex to a new vertex, or as a new
/// component, deduplicating by canonical form.
pub fn enumerate_petals(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 {
        return Err(GraphError::Family("petal sets need n >= 1".into()));
    }
    if n > PETAL_CAP {
        return Err(GraphError::CapExceeded {
            what: "petal enumeration (edges)",
            cap: PETAL_CAP,
            n,
        });
    }
    let mut level: Vec<(CanonicalForm, Graph)> =
        vec![canonical_graph_uncapped(&Graph::complete(2)?)];
    for _ in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (_, g) in &level {
            let open: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) < 2).collect();
            let mut children = Vec::new();
            for (i, &u) in open.iter().enumerate() {
                for &v in &open[i + 1..] {
                    if !g.has_edge(u, v) {
                        let mut h = g.clone();
                        h.add_edge(u, v)?;
                        children.push(h);
                    }
                }
                let mut h = g.disjoint_union(&Graph::empty(1)?)?;
                h.add_edge(u, g.vertex_count())?;
                children.push(h);
            }
            children.push(g.disjoint_union(&Graph::complete(2)?)?);
            for h in children {
                let (form, canon) = canonical_graph_uncapped(&h);
                if seen.insert(form.clone()) {
                    next.push((form, canon));
                }
            }
        }
        level = next;
    }
    level.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(level.into_iter().map(|(_, g)| g).collect())
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        let list = |f: &mut fmt::Formatter<'_>, tag: &str, parts: &[FamilySpec]| {
            write!(f, "{tag}(")?;
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        };
        match self {
            Complete { n } => write!(f, "K:{n}"),
            Cycle { n } => write!(f, "C:{n}"),
            Empty { n } => write!(f, "E:{n}"),
            Path { n } => write!(f, "P:{n}"),
            Wheel { n, k } => write!(f, "W:{n}:{k}"),
            S { n } => write!(f, "S:{n}"),
            Petal { edges, index } => write!(f, "PETAL:{edges}:{index}"),
            Flower { center, edges, index } => write!(f, "J({center},PETAL:{edges}:{index})"),
            Join { parts } => list(f, "J", parts),
            DisjointUnion { parts } => list(f, "U", parts),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || GraphError::UnknownFamily { literal: s.to_string() };
        if let Some(body) = s.strip_prefix("J(").or_else(|| s.strip_prefix("U(")) {
            let body = body.strip_suffix(')').ok_or_else(unknown)?;
            let parts = split_top_level(body)
                .ok_or_else(unknown)?
                .into_iter()
                .map(FamilySpec::from_str)
                .collect::<Result<Vec<_>, _>>()?;
            if parts.is_empty() {
                return Err(unknown());
            }
            return Ok(if s.starts_with('J') {
                FamilySpec::Join { parts }
            } else {
                FamilySpec::DisjointUnion { parts }
            });
        }
        let fields: Vec<&str> = s.split(':').collect();
        let nums = fields[1..]
            .iter()
            .map(|x| x.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| unknown())?;
        let spec = match (fields[0], nums.as_slice()) {
            ("K", [n]) => FamilySpec::Complete { n: *n },
            ("C", [n]) => FamilySpec::Cycle { n: *n },
            ("E", [n]) => FamilySpec::Empty { n: *n },
            ("P", [n]) => FamilySpec::Path { n: *n },
            ("W", [n, k]) => FamilySpec::Wheel { n: *n, k: *k },
            ("S", [n]) => FamilySpec::S { n: *n },
            ("PETAL", [e, i]) => FamilySpec::Petal { edges: *e, index: *i },
            _ => return Err(unknown()),
        };
        Ok(spec)
    }
}

fn split_top_level(body: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&body[start..]);
    Some(parts)
}

/// Reads a graph from either a family literal or the text format.
pub fn parse_graph_argument(arg: &str) -> Result<Graph, GraphError> {
    match arg.parse::<FamilySpec>() {
        Ok(spec) => spec.build(),
        Err(e) if arg.contains(':') || arg.contains('(') => Err(e),
        Err(_) => Graph::parse_text(arg),
    }
}
