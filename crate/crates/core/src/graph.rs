//! Finite simple graphs on at most 64 vertices, stored as adjacency bitmasks.
//!
//! Vertex ids are `0..vertex_count`. Two graphs compare equal iff they have
//! the same vertex count and the same labeled edge set; use
//! [`crate::canon::canonical_form`] for equality up to isomorphism.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Hard ceiling imposed by the `u64` adjacency rows.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

/// One step of the minor relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinorOp {
    VertexRemoval { vertex: usize },
    EdgeRemoval { u: usize, v: usize },
    EdgeContraction { u: usize, v: usize },
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n, max: MAX_VERTICES });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            g.adj[u] = full_mask(n) & !(1u64 << u);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Inserts `u v`. Self-loops and repeated edges are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in bits(self.adj[u] >> (u + 1) << (u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|&m| m == 0)
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) + 1 == self.n)
    }

    pub fn complement(&self) -> Graph {
        let full = full_mask(self.n);
        let adj = (0..self.n)
            .map(|v| !self.adj[v] & full & !(1u64 << v))
            .collect();
        Graph { n: self.n, adj }
    }

    /// Induced subgraph on the vertices of `mask`, relabeled in ascending order.
    pub fn induced(&self, mask: u64) -> Graph {
        let keep: Vec<usize> = bits(mask & full_mask(self.n)).collect();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                bits(self.adj[v] & mask).fold(0u64, |acc, w| acc | 1 << index[w])
            })
            .collect();
        Graph { n: keep.len(), adj }
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for u in 0..self.n {
            for v in bits(self.adj[u]) {
                adj[perm[u]] |= 1 << perm[v];
            }
        }
        Graph { n: self.n, adj }
    }

    /// Connected components as vertex masks, ordered by smallest member.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn all_vertices(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|m| m << self.n));
        Ok(Graph { n, adj })
    }

    /// `self + other`: disjoint union plus every cross edge.
    pub fn join(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut g = self.disjoint_union(other)?;
        let left = full_mask(self.n);
        let right = full_mask(g.n) & !left;
        for v in 0..g.n {
            g.adj[v] |= if v < self.n { right } else { left };
        }
        Ok(g)
    }

    pub fn apply(&self, op: MinorOp) -> Result<Graph, GraphError> {
        match op {
            MinorOp::VertexRemoval { vertex } => {
                self.check_target(vertex)?;
                Ok(self.induced(self.all_vertices() & !(1u64 << vertex)))
            }
            MinorOp::EdgeRemoval { u, v } => {
                if !self.has_edge(u, v) {
                    return Err(GraphError::MissingEdge(u, v));
                }
                let mut g = self.clone();
                g.adj[u] &= !(1u64 << v);
                g.adj[v] &= !(1u64 << u);
                Ok(g)
            }
            MinorOp::EdgeContraction { u, v } => {
                if !self.has_edge(u, v) {
                    return Err(GraphError::MissingEdge(u, v));
                }
                let (keep, gone) = (u.min(v), u.max(v));
                let mut g = self.clone();
                let merged = (g.adj[keep] | g.adj[gone]) & !(1u64 << keep) & !(1u64 << gone);
                g.adj[keep] = merged;
                for w in bits(merged) {
                    g.adj[w] |= 1 << keep;
                }
                Ok(g.induced(g.all_vertices() & !(1u64 << gone)))
            }
        }
    }

    /// Every single-step minor operation applicable to this graph.
    pub fn minor_ops(&self) -> Vec<MinorOp> {
        let mut ops: Vec<MinorOp> = (0..self.n)
            .map(|vertex| MinorOp::VertexRemoval { vertex })
            .collect();
        for (u, v) in self.edges() {
            ops.push(MinorOp::EdgeRemoval { u, v });
            ops.push(MinorOp::EdgeContraction { u, v });
        }
        ops
    }

    /// True when `self` (with its labels) is a spanning subgraph of `other`.
    pub fn is_labeled_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && (0..self.n).all(|v| self.adj[v] & !other.adj[v] == 0)
    }

    /// Serializes to the text format: vertex count then one `u v` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing vertex count".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| GraphError::Parse {
            line: 1,
            msg: format!("expected vertex count, found `{}`", first.trim()),
        })?;
        let mut g = Graph::empty(n)?;
        for (i, line) in lines {
            let lineno = i + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("expected vertex id, found `{s}`"),
                })
            };
            if parts.len() != 2 {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "expected `u v`".into(),
                });
            }
            let (u, v) = (parse(parts[0])?, parse(parts[1])?);
            g.add_edge(u, v).map_err(|e| GraphError::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_target(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::MissingVertex(v))
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            vertex_count: usize,
            edges: Vec<(usize, usize)>,
        }
        Repr {
            vertex_count: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            vertex_count: usize,
            edges: Vec<(usize, usize)>,
        }
        let r = Repr::deserialize(d)?;
        Graph::from_edges(r.vertex_count, r.edges).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of `mask` in ascending order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
