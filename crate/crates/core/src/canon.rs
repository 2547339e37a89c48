//! Canonical labeling by individualization and refinement.
//!
//! The canonical form is the lexicographically smallest adjacency string over
//! every leaf of an isomorphism-invariant search tree. Equitable refinement
//! prunes the permutation space; interchangeable twins are individualized
//! only once.

use crate::error::GraphError;
use crate::graph::{bits, Graph};

/// Largest graph accepted by [`canonical_form`].
pub const CANON_CAP: usize = 12;

/// Canonical byte string: vertex count followed by the packed upper triangle
/// of the canonically relabeled adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, GraphError> {
    if g.vertex_count() > CANON_CAP {
        return Err(GraphError::CapExceeded {
            what: "canonical labeling",
            cap: CANON_CAP,
            n: g.vertex_count(),
        });
    }
    Ok(canonical_labeling(g).0)
}

/// The canonical form together with the canonically relabeled graph.
pub fn canonical_graph(g: &Graph) -> Result<(CanonicalForm, Graph), GraphError> {
    if g.vertex_count() > CANON_CAP {
        return Err(GraphError::CapExceeded {
            what: "canonical labeling",
            cap: CANON_CAP,
            n: g.vertex_count(),
        });
    }
    let (form, perm) = canonical_labeling(g);
    Ok((form, g.permuted(&perm)))
}

/// Same as [`canonical_graph`] without the size cap. Only for graphs whose
/// structure keeps the search small (paths, cycles, matchings).
pub(crate) fn canonical_graph_uncapped(g: &Graph) -> (CanonicalForm, Graph) {
    let (form, perm) = canonical_labeling(g);
    (form, g.permuted(&perm))
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Packs the upper triangle of `g` (row-major) after applying `perm`.
pub(crate) fn encode(g: &Graph, perm: &[usize]) -> Vec<u8> {
    let n = g.vertex_count();
    let mut inv = vec![0usize; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut out = Vec::with_capacity(1 + n * n / 16 + 1);
    out.push(n as u8);
    let (mut byte, mut filled) = (0u8, 0);
    for i in 0..n {
        for j in i + 1..n {
            byte = byte << 1 | g.has_edge(inv[i], inv[j]) as u8;
            filled += 1;
            if filled == 8 {
                out.push(byte);
                byte = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(byte << (8 - filled));
    }
    out
}

fn canonical_labeling(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let n = g.vertex_count();
    if n == 0 {
        return (CanonicalForm(vec![0]), Vec::new());
    }
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    let root = refine(g, vec![(0..n).collect()]);
    search(g, root, &mut best);
    let (bytes, perm) = best.expect("search visits at least one leaf");
    (CanonicalForm(bytes), perm)
}

fn search(g: &Graph, cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let mut perm = vec![0usize; g.vertex_count()];
        for (pos, cell) in cells.iter().enumerate() {
            perm[cell[0]] = pos;
        }
        let bytes = encode(g, &perm);
        if best.as_ref().is_none_or(|(b, _)| bytes < *b) {
            *best = Some((bytes, perm));
        }
        return;
    };
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cells[target] {
        if tried.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = Vec::with_capacity(cells.len() + 1);
        next.extend_from_slice(&cells[..target]);
        next.push(vec![v]);
        next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
        next.extend_from_slice(&cells[target + 1..]);
        search(g, refine(g, next), best);
    }
}

/// Swapping twins is an automorphism fixing every other vertex.
fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    let strip = !(1u64 << u | 1u64 << v);
    g.neighbors_mask(u) & strip == g.neighbors_mask(v) & strip
}

/// Splits cells by neighbor counts into every cell until the partition is
/// equitable. Sub-cells are ordered by their signatures, which keeps the
/// result independent of vertex labels.
fn refine(g: &Graph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u64> = cells
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut next = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let nb = g.neighbors_mask(v);
                    (masks.iter().map(|m| (nb & m).count_ones()).collect(), v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
            changed |= keyed.first().map(|f| &f.0) != keyed.last().map(|l| &l.0);
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

/// Size of a largest clique, by exhaustive branch and bound.
pub fn clique_number(g: &Graph) -> usize {
    fn grow(g: &Graph, clique: usize, candidates: u64, best: &mut usize) {
        if clique + candidates.count_ones() as usize <= *best {
            return;
        }
        if candidates == 0 {
            *best = (*best).max(clique);
            return;
        }
        let mut rest = candidates;
        for v in bits(candidates) {
            rest &= !(1u64 << v);
            grow(g, clique + 1, rest & g.neighbors_mask(v), best);
            if clique + rest.count_ones() as usize <= *best {
                return;
            }
        }
    }
    let mut best = 0;
    grow(g, 0, g.all_vertices(), &mut best);
    best
}
