//! Exhaustive minor-minimality checks on small graphs.
//!
//! A proper minor is settled below the target value by a rule bound, a
//! validated embedding one dimension down, or by being a subgraph of a minor
//! already settled (both invariants are monotone under subgraphs). Minors are
//! processed largest first so one embedding settles many subgraphs.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_graph, CanonicalForm};
use crate::embedder::{find_embedding, fitted_sphere, EmbedOutcome, EmbedRequest, DEFAULT_RESTARTS};
use crate::engine::{describe, Engine, Kind, Mode};
use crate::error::{EngineError, GraphError};
use crate::geometry::HALF_SQRT2;
use crate::graph::{Graph, MinorOp};
use crate::minors::{minor_closure, ClosureOptions, DEFAULT_CLOSURE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinimalityOptions {
    pub restarts: usize,
    pub cap: usize,
}

impl Default for MinimalityOptions {
    fn default() -> Self {
        MinimalityOptions { restarts: DEFAULT_RESTARTS, cap: DEFAULT_CLOSURE_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalityVerdict {
    Minimal,
    NotMinimal,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorFailure {
    pub minor: Graph,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SettledCounts {
    pub by_rule: usize,
    pub by_embedding: usize,
    pub by_subgraph: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub graph: Graph,
    pub kind: Kind,
    pub mode: Mode,
    pub value: i64,
    pub minors_checked: usize,
    pub failures: Vec<MinorFailure>,
    pub verdict: MinimalityVerdict,
    pub inconclusive_minors: Vec<Graph>,
    pub settled: SettledCounts,
}

#[derive(Clone, Debug, PartialEq)]
enum Status {
    Below,
    Failed(String),
    Open,
}

/// Seed derived from the canonical form and the target dimension.
pub fn minor_seed(form: &CanonicalForm, dim: i64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in form.as_bytes().iter().chain(dim.to_le_bytes().iter()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn embed_below(g: &Graph, form: &CanonicalForm, d: i64, kind: Kind, mode: Mode, restarts: usize) -> bool {
    if d < 1 {
        return false;
    }
    let mut req = EmbedRequest::new(g.clone(), d as usize)
        .non_crossing(mode == Mode::NonCrossing)
        .restarts(restarts)
        .seed(minor_seed(form, d));
    if kind == Kind::Sdim {
        req = req.on_sphere(None);
    }
    matches!(find_embedding(&req), Ok(EmbedOutcome::Found { .. }))
}

/// Deletion-only children, canonicalized.
fn deletion_children(g: &Graph) -> Vec<CanonicalForm> {
    g.minor_ops()
        .into_iter()
        .filter(|op| !matches!(op, MinorOp::EdgeContraction { .. }))
        .filter_map(|op| g.apply(op).ok())
        .filter_map(|h| canonical_graph(&h).ok().map(|(f, _)| f))
        .collect()
}

/// Marks `root` and every subgraph of it present in `status` as settled.
fn settle(root: &CanonicalForm, graphs: &HashMap<CanonicalForm, Graph>, status: &mut HashMap<CanonicalForm, Status>) -> usize {
    let mut marked = 0;
    let mut stack = vec![root.clone()];
    while let Some(f) = stack.pop() {
        let Some(g) = graphs.get(&f) else { continue };
        for child in deletion_children(g) {
            if matches!(status.get(&child), Some(Status::Open)) {
                status.insert(child.clone(), Status::Below);
                marked += 1;
                stack.push(child);
            }
        }
    }
    marked
}

pub fn verify_minor_minimal(
    g: &Graph,
    kind: Kind,
    mode: Mode,
    opts: &MinimalityOptions,
) -> Result<MinimalityReport, EngineError> {
    let engine = Engine::new(mode);
    let root = engine.bounds(g, kind);
    let value = root.value().ok_or_else(|| {
        EngineError::InconclusiveRoot(format!("{kind} of {} is only known to lie in {root}", describe(g)))
    })?;
    let closure = minor_closure(
        g,
        ClosureOptions { proper_only: true, include_empty: true, cap: opts.cap },
    )?;
    let graphs: HashMap<CanonicalForm, Graph> = closure.iter().cloned().collect();
    let mut status: HashMap<CanonicalForm, Status> =
        closure.iter().map(|(f, _)| (f.clone(), Status::Open)).collect();
    let mut settled = SettledCounts::default();

    let mut levels: Vec<(usize, usize)> = closure
        .iter()
        .map(|(_, h)| (h.vertex_count(), h.edge_count()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    for level in levels {
        let open: Vec<&(CanonicalForm, Graph)> = closure
            .iter()
            .filter(|(f, h)| (h.vertex_count(), h.edge_count()) == level && status[f] == Status::Open)
            .collect();
        let mut to_embed = Vec::new();
        for (f, h) in open {
            let b = engine.bounds(h, kind);
            if b.upper.is_some_and(|u| u < crate::engine::Bound::Finite(value)) {
                status.insert(f.clone(), Status::Below);
                settled.by_rule += 1;
                settled.by_subgraph += settle(f, &graphs, &mut status);
            } else if b.lower_value().is_some_and(|l| l >= value) {
                status.insert(f.clone(), Status::Failed(format!("{kind} >= {} by rule: {b}", b.lower)));
            } else {
                to_embed.push((f, h));
            }
        }
        let found: Vec<(CanonicalForm, bool)> = to_embed
            .par_iter()
            .map(|(f, h)| ((*f).clone(), embed_below(h, f, value - 1, kind, mode, opts.restarts)))
            .collect();
        for (f, ok) in found {
            if ok {
                status.insert(f.clone(), Status::Below);
                settled.by_embedding += 1;
                settled.by_subgraph += settle(&f, &graphs, &mut status);
            }
        }
    }

    let mut failures = Vec::new();
    let mut inconclusive_minors = Vec::new();
    for (f, h) in &closure {
        match &status[f] {
            Status::Below => {}
            Status::Failed(reason) => failures.push(MinorFailure { minor: h.clone(), reason: reason.clone() }),
            Status::Open => inconclusive_minors.push(h.clone()),
        }
    }
    let verdict = if !failures.is_empty() {
        MinimalityVerdict::NotMinimal
    } else if !inconclusive_minors.is_empty() {
        MinimalityVerdict::Inconclusive
    } else {
        MinimalityVerdict::Minimal
    };
    Ok(MinimalityReport {
        graph: g.clone(),
        kind,
        mode,
        value,
        minors_checked: closure.len(),
        failures,
        verdict,
        inconclusive_minors,
        settled,
    })
}

/// Every graph on `n` vertices up to isomorphism, sorted by canonical form.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    let mut seen: HashMap<CanonicalForm, Graph> = HashMap::new();
    let (f0, g0) = canonical_graph(&Graph::empty(n)?)?;
    seen.insert(f0, g0.clone());
    let mut level = vec![g0];
    while !level.is_empty() {
        let mut next = Vec::new();
        for g in &level {
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(u, v)?;
                    let (f, c) = canonical_graph(&h)?;
                    if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(f) {
                        slot.insert(c.clone());
                        next.push(c);
                    }
                }
            }
        }
        level = next;
    }
    let mut out: Vec<(CanonicalForm, Graph)> = seen.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, g)| g).collect())
}

pub const S_CANDIDATE_CAP: usize = 7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SCandidates {
    pub n: usize,
    pub graphs_examined: usize,
    pub minimal: Vec<Graph>,
    /// Graphs whose status could not be settled either way.
    pub inconclusive: Vec<Graph>,
}

/// All `n`-vertex graphs minor minimal for `sdim = n - 1`.
///
/// Proper minors with fewer vertices have `sdim <= n - 2` automatically, so a
/// graph qualifies iff `sdim G = n - 1` and every single-edge deletion drops
/// to `n - 2`.
pub fn enumerate_s_candidates(n: usize, mode: Mode, opts: &MinimalityOptions) -> Result<SCandidates, EngineError> {
    if n == 0 || n > S_CANDIDATE_CAP {
        return Err(EngineError::InvalidArgument(format!("n must be in 1..={S_CANDIDATE_CAP}, got {n}")));
    }
    let engine = Engine::new(mode);
    let target = n as i64 - 1;
    let mut graphs = all_graphs(n)?;
    graphs.sort_by_key(|g| std::cmp::Reverse(g.edge_count()));
    let forms: Vec<CanonicalForm> = graphs.iter().map(|g| canonical_graph(g).map(|(f, _)| f)).collect::<Result<_, _>>()?;
    let by_form: HashMap<CanonicalForm, Graph> = forms.iter().cloned().zip(graphs.iter().cloned()).collect();
    let mut top = HashSet::new();
    let mut status: HashMap<CanonicalForm, Status> = HashMap::new();
    for (f, g) in forms.iter().zip(&graphs) {
        let b = engine.bounds(g, Kind::Sdim);
        if b.lower_value().is_some_and(|l| l >= target) {
            top.insert(f.clone());
            status.insert(f.clone(), Status::Failed("top".into()));
        } else if b.upper_value().is_some_and(|u| u < target) {
            status.insert(f.clone(), Status::Below);
        } else {
            status.insert(f.clone(), Status::Open);
        }
    }
    let mut edges_desc: Vec<usize> = graphs.iter().map(Graph::edge_count).collect();
    edges_desc.dedup();
    for m in edges_desc {
        let open: Vec<(CanonicalForm, Graph)> = forms
            .iter()
            .zip(&graphs)
            .filter(|(f, g)| g.edge_count() == m && status[*f] == Status::Open)
            .map(|(f, g)| (f.clone(), g.clone()))
            .collect();
        let found: Vec<(CanonicalForm, bool)> = open
            .par_iter()
            .map(|(f, g)| (f.clone(), embed_below(g, f, target - 1, Kind::Sdim, mode, opts.restarts)))
            .collect();
        for (f, ok) in found {
            if ok {
                status.insert(f.clone(), Status::Below);
                settle(&f, &by_form, &mut status);
            }
        }
        // Subgraphs of settled graphs are settled too.
        let below: Vec<CanonicalForm> = status
            .iter()
            .filter(|(f, s)| **s == Status::Below && by_form[*f].edge_count() == m)
            .map(|(f, _)| f.clone())
            .collect();
        for f in below {
            settle(&f, &by_form, &mut status);
        }
    }
    let mut minimal = Vec::new();
    let mut inconclusive: Vec<Graph> = Vec::new();
    for (f, g) in forms.iter().zip(&graphs) {
        let own = &status[f];
        if *own == Status::Open {
            inconclusive.push(g.clone());
            continue;
        }
        if !top.contains(f) {
            continue;
        }
        let children: Vec<CanonicalForm> = g
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let h = g.apply(MinorOp::EdgeRemoval { u, v })?;
                canonical_graph(&h).map(|(cf, _)| cf)
            })
            .collect::<Result<_, GraphError>>()?;
        if children.iter().any(|c| status[c] == Status::Open) {
            inconclusive.push(g.clone());
        } else if children.iter().all(|c| status[c] == Status::Below) {
            minimal.push(g.clone());
        }
    }
    Ok(SCandidates { n, graphs_examined: graphs.len(), minimal, inconclusive })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourVertexEntry {
    pub graph: Graph,
    pub contains_claw: bool,
    pub sdim: String,
    /// Smallest swept circle radius with a validated embedding.
    pub circle_radius: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourVertexReport {
    pub entries: Vec<FourVertexEntry>,
    pub all_ok: bool,
}

/// Every 4-vertex graph either has a degree-3 vertex, so contains `K_{3,1}`
/// and has `sdim` 3, or lies on a circle of radius at most `sqrt(2)/2`.
pub fn check_4vertex_lemma(opts: &MinimalityOptions) -> Result<FourVertexReport, EngineError> {
    let engine = Engine::new(Mode::Crossings);
    let sweep = [0.5 + 1e-3, 0.55, 0.6, 1.0 / 3f64.sqrt(), 0.65, HALF_SQRT2];
    let mut sorted = sweep;
    sorted.sort_by(f64::total_cmp);
    let mut entries = Vec::new();
    for g in all_graphs(4)? {
        let contains_claw = g.max_degree() >= 3;
        let b = engine.bounds(&g, Kind::Sdim);
        let (circle_radius, ok) = if contains_claw {
            (None, b.value() == Some(3))
        } else {
            let form = canonical_graph(&g)?.0;
            let r = sorted.iter().copied().find(|&r| {
                let req = EmbedRequest::new(g.clone(), 2)
                    .on_sphere(Some(r))
                    .restarts(opts.restarts)
                    .seed(minor_seed(&form, 2));
                match find_embedding(&req) {
                    Ok(EmbedOutcome::Found { embedding, .. }) => fitted_sphere(&embedding)
                        .is_some_and(|s| s.radius <= HALF_SQRT2 + 1e-6),
                    _ => false,
                }
            });
            (r, r.is_some())
        };
        let sdim = if circle_radius.is_some() { "2".to_string() } else { b.to_string() };
        entries.push(FourVertexEntry { graph: g, contains_claw, sdim, circle_radius, ok });
    }
    let all_ok = entries.iter().all(|e| e.ok);
    Ok(FourVertexReport { entries, all_ok })
}
