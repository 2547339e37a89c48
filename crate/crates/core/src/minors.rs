//! Minor closure and join decomposition.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::canon::{canonical_graph, CanonicalForm};
use crate::error::GraphError;
use crate::graph::Graph;

pub const DEFAULT_CLOSURE_CAP: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct ClosureOptions {
    pub proper_only: bool,
    pub include_empty: bool,
    pub cap: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            proper_only: false,
            include_empty: true,
            cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

/// One representative per isomorphism class of minors, canonically labeled
/// and sorted by canonical form.
pub fn minor_closure(
    g: &Graph,
    opts: ClosureOptions,
) -> Result<Vec<(CanonicalForm, Graph)>, GraphError> {
    if g.vertex_count() > opts.cap {
        return Err(GraphError::CapExceeded {
            what: "minor closure",
            cap: opts.cap,
            n: g.vertex_count(),
        });
    }
    let (root_form, root) = canonical_graph(g)?;
    let mut seen: HashMap<CanonicalForm, Graph> = HashMap::new();
    seen.insert(root_form.clone(), root.clone());
    let mut frontier: VecDeque<Graph> = VecDeque::from([root]);
    // Each BFS layer expands in parallel; insertion order does not matter
    // because the output is sorted.
    while !frontier.is_empty() {
        let layer: Vec<Graph> = frontier.drain(..).collect();
        let children: Vec<(CanonicalForm, Graph)> = layer
            .par_iter()
            .flat_map_iter(|h| one_step_minors(h).into_iter())
            .collect::<Result<Vec<_>, _>>()?;
        for (form, child) in children {
            if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(form) {
                slot.insert(child.clone());
                frontier.push_back(child);
            }
        }
    }
    if opts.proper_only {
        seen.remove(&root_form);
    }
    if !opts.include_empty {
        seen.retain(|_, h| h.vertex_count() > 0);
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Canonical representatives of every graph one minor operation away.
pub fn one_step_minors(g: &Graph) -> Vec<Result<(CanonicalForm, Graph), GraphError>> {
    g.minor_ops()
        .into_iter()
        .map(|op| g.apply(op).and_then(|h| canonical_graph(&h)))
        .collect()
}

/// Vertex sets of the join factors: the connected components of the
/// complement, ordered by smallest vertex.
pub fn join_factor_masks(g: &Graph) -> Vec<u64> {
    g.complement().components()
}

/// Splits `g` into join-indecomposable factors `G_1 + ... + G_k`.
pub fn join_decompose(g: &Graph) -> Vec<Graph> {
    join_factor_masks(g).into_iter().map(|m| g.induced(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::family::FamilySpec;

    fn build(lit: &str) -> Graph {
        lit.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    #[test]
    fn k33_splits_into_two_triples() {
        let f = join_decompose(&build("J(E:3,E:3)"));
        assert_eq!(f, vec![Graph::empty(3).unwrap(), Graph::empty(3).unwrap()]);
    }

    #[test]
    fn w62_splits_into_cycle_and_pair() {
        let f = join_decompose(&build("W:6:2"));
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], build("C:6"));
        assert_eq!(f[1], Graph::empty(2).unwrap());
    }

    #[test]
    fn c5_is_indecomposable() {
        assert_eq!(join_decompose(&build("C:5")), vec![build("C:5")]);
    }

    #[test]
    fn single_vertex_proper_minors() {
        let opts = ClosureOptions { proper_only: true, ..Default::default() };
        let m = minor_closure(&Graph::empty(1).unwrap(), opts).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].1.vertex_count(), 0);
    }

    #[test]
    fn k4_closure_contains_k3() {
        let m = minor_closure(&Graph::complete(4).unwrap(), ClosureOptions::default()).unwrap();
        let k3 = canonical_form(&Graph::complete(3).unwrap()).unwrap();
        assert!(m.iter().any(|(f, _)| *f == k3));
    }

    #[test]
    fn closure_cap() {
        let opts = ClosureOptions { cap: 5, ..Default::default() };
        let err = minor_closure(&Graph::complete(6).unwrap(), opts).unwrap_err();
        assert!(err.to_string().contains("--cap"));
    }
}
