//! Rule-based bounds on `dim` and `sdim` with certificates.
//!
//! Every graph is analyzed once per mode (memoized by canonical form): base
//! bounds from counting arguments, a registry of families with proven radius
//! profiles, and composition through join decomposition (cones over spheres
//! and orthogonal sphere pairs). Profiles are only ever sound subsets of the
//! feasible radii; negative conclusions require profiles marked complete.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize, Serializer};

use crate::canon::{canonical_graph, clique_number, CANON_CAP};
use crate::embedder::{find_embedding, EmbedOutcome, EmbedRequest};
use crate::error::EngineError;
use crate::family::FamilySpec;
use crate::geometry::{
    convex_polygon_radius, gcd, iterate_cone_radius, simplex_radius,
    star_polygon_radius, ConeIterate, PolygonRadius, HALF_SQRT2,
};
use crate::graph::{bits, Graph};
use crate::minors::join_factor_masks;
use crate::profile::{solve_radius_equation, Piece, RadiusEquation, RadiusProfile, MEMBER_TOL};

const NEG_INF: i64 = i64::MIN;
/// Radii below this cone to a radius below one.
const CONE_LIMIT: f64 = 0.866_025_403_784_438_6;
const LIFT_LEVELS: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Crossings,
    NonCrossing,
}

impl FromStr for Mode {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "crossings" => Ok(Mode::Crossings),
            "non-crossing" | "non_crossing" => Ok(Mode::NonCrossing),
            _ => Err(EngineError::InvalidArgument(format!(
                "unknown mode {s:?} (expected crossings or non-crossing)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Crossings => "crossings",
            Mode::NonCrossing => "non-crossing",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Dim,
    Sdim,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Dim => "dim",
            Kind::Sdim => "sdim",
        })
    }
}

/// An integer bound that may be negative infinity (`sdim` of the empty graph).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
}

impl Bound {
    fn from_raw(v: i64) -> Bound {
        if v == NEG_INF {
            Bound::NegInf
        } else {
            Bound::Finite(v)
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::NegInf => None,
            Bound::Finite(v) => Some(v),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::Finite(v) => s.serialize_i64(*v),
        }
    }
}

/// One applied rule. `premises` are the certificates of the facts it used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub bound: String,
    pub rule: String,
    pub paper_anchor: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Certificate>,
}

impl Certificate {
    fn new(bound: String, rule: &str, anchor: &str, inputs: Vec<String>) -> Certificate {
        Certificate {
            bound,
            rule: rule.into(),
            paper_anchor: anchor.into(),
            inputs,
            premises: Vec::new(),
        }
    }

    fn with(mut self, premises: impl IntoIterator<Item = Option<Certificate>>) -> Certificate {
        self.premises.extend(premises.into_iter().flatten());
        self
    }

    fn render(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}  [{}] {}", self.bound, self.rule, self.paper_anchor));
        if !self.inputs.is_empty() {
            out.push_str(&format!(" ({})", self.inputs.join(", ")));
        }
        out.push('\n');
        for p in &self.premises {
            p.render(depth + 1, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionBounds {
    pub kind: Kind,
    pub mode: Mode,
    pub lower: Bound,
    pub upper: Option<Bound>,
    pub certificates: Vec<Certificate>,
}

impl DimensionBounds {
    pub fn exact(&self) -> Option<Bound> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }

    /// Exact finite value, if any.
    pub fn value(&self) -> Option<i64> {
        self.exact().and_then(Bound::finite)
    }

    pub fn upper_value(&self) -> Option<i64> {
        self.upper.and_then(Bound::finite)
    }

    pub fn lower_value(&self) -> Option<i64> {
        self.lower.finite()
    }

    /// Indented rule chain, one certificate per line.
    pub fn explain(&self) -> String {
        let mut out = String::new();
        for c in &self.certificates {
            c.render(0, &mut out);
        }
        out
    }
}

impl fmt::Display for DimensionBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exact(), self.upper) {
            (Some(v), _) => write!(f, "{v}"),
            (None, Some(u)) => write!(f, "[{}, {}]", self.lower, u),
            (None, None) => write!(f, "[{}, unknown]", self.lower),
        }
    }
}

#[derive(Clone, Debug)]
struct Range {
    lo: i64,
    lo_cert: Option<Certificate>,
    hi: Option<i64>,
    hi_cert: Option<Certificate>,
}

impl Range {
    fn unknown() -> Range {
        Range { lo: NEG_INF, lo_cert: None, hi: None, hi_cert: None }
    }

    fn raise(&mut self, v: i64, cert: impl FnOnce() -> Certificate) {
        if v > self.lo {
            self.lo = v;
            self.lo_cert = Some(cert());
        }
    }

    fn cap(&mut self, v: i64, cert: impl FnOnce() -> Certificate) {
        if self.hi.is_none_or(|h| v < h) {
            self.hi = Some(v);
            self.hi_cert = Some(cert());
        }
    }

    fn exact(&self) -> Option<i64> {
        (self.hi == Some(self.lo)).then_some(self.lo)
    }

    fn to_bounds(&self, kind: Kind, mode: Mode) -> DimensionBounds {
        let mut certificates: Vec<Certificate> = self.lo_cert.iter().cloned().collect();
        if let Some(c) = &self.hi_cert {
            if self.lo_cert.as_ref() != Some(c) {
                certificates.push(c.clone());
            }
        }
        DimensionBounds {
            kind,
            mode,
            lower: Bound::from_raw(self.lo),
            upper: self.hi.map(Bound::from_raw),
            certificates,
        }
    }
}

fn show(v: i64) -> String {
    Bound::from_raw(v).to_string()
}

#[derive(Clone, Debug)]
struct Facts {
    dim: Range,
    sdim: Range,
    profiles: Vec<RadiusProfile>,
    /// Exact `dim(G + K_1)` when a registry entry knows it.
    cone_dim: Option<(i64, Certificate)>,
}

impl Facts {
    fn add_profile(&mut self, p: RadiusProfile) {
        if p.is_empty() {
            return;
        }
        if let Some(q) = self
            .profiles
            .iter_mut()
            .find(|q| q.sphere_dim == p.sphere_dim && q.spanning == p.spanning)
        {
            q.absorb(&p);
        } else {
            self.profiles.push(p);
        }
        self.profiles.sort_by_key(|q| (q.sphere_dim, !q.spanning));
    }

    /// Profiles at `t` or lifted to `t` from lower dimensions.
    fn profiles_at(&self, t: i64) -> Vec<RadiusProfile> {
        let mut out = Vec::new();
        for p in &self.profiles {
            if p.sphere_dim == t {
                out.push(p.clone());
            } else if p.sphere_dim < t && t - p.sphere_dim <= LIFT_LEVELS {
                let mut q = p.clone();
                while q.sphere_dim < t {
                    q = q.lifted("sphere slice lifted one dimension");
                }
                out.push(q);
            }
        }
        out
    }

    /// The complete spanning profile at the exact `sdim`, if known.
    fn complete_profile(&self) -> Option<&RadiusProfile> {
        let s = self.sdim.exact()?;
        self.profiles
            .iter()
            .find(|p| p.sphere_dim == s && p.spanning && p.complete)
    }

    fn range(&self, kind: Kind) -> &Range {
        match kind {
            Kind::Dim => &self.dim,
            Kind::Sdim => &self.sdim,
        }
    }
}

fn cert(bound: String, rule: &str, anchor: &str, inputs: Vec<String>) -> Certificate {
    Certificate::new(bound, rule, anchor, inputs)
}

/// Memoizing analyzer for one rule mode.
pub struct Engine {
    mode: Mode,
    memo: Mutex<HashMap<Graph, Arc<Facts>>>,
}

impl Engine {
    pub fn new(mode: Mode) -> Engine {
        Engine { mode, memo: Mutex::new(HashMap::new()) }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Rule-derived bounds without any numerical search.
    pub fn bounds(&self, g: &Graph, kind: Kind) -> DimensionBounds {
        self.facts(g).range(kind).to_bounds(kind, self.mode)
    }

    /// Known radius profiles of `g`, ordered by sphere dimension.
    pub fn profiles(&self, g: &Graph) -> Vec<RadiusProfile> {
        self.facts(g).profiles.clone()
    }

    fn facts(&self, g: &Graph) -> Arc<Facts> {
        let key = if g.vertex_count() <= CANON_CAP {
            canonical_graph(g).map(|(_, c)| c).unwrap_or_else(|_| g.clone())
        } else {
            g.clone()
        };
        if let Some(f) = self.memo.lock().expect("memo lock").get(&key) {
            return f.clone();
        }
        let f = Arc::new(self.compute(&key));
        self.memo.lock().expect("memo lock").insert(key, f.clone());
        f
    }

    fn compute(&self, g: &Graph) -> Facts {
        let n = g.vertex_count();
        let mut f = Facts {
            dim: Range::unknown(),
            sdim: Range::unknown(),
            profiles: Vec::new(),
            cone_dim: None,
        };
        if n <= 1 {
            let (d, s) = if n == 0 { (0, NEG_INF) } else { (0, 0) };
            let why = if n == 0 { "empty graph" } else { "single point" };
            let c = |k: &str, v: i64| cert(format!("{k} = {}", show(v)), why, "definition of the invariants", vec![]);
            f.dim.raise(d, || c("dim", d));
            f.dim.cap(d, || c("dim", d));
            f.sdim.lo = s;
            f.sdim.lo_cert = Some(c("sdim", s));
            f.sdim.cap(s, || c("sdim", s));
            return f;
        }
        self.base_rules(g, &mut f);
        self.registry(g, &mut f);
        let comps = g.components();
        if comps.len() > 1 {
            self.component_rules(g, &comps, &mut f);
        }
        let factors = join_factor_masks(g);
        if factors.len() > 1 {
            self.join_rules(g, &factors, &mut f);
        }
        close(&mut f);
        debug_assert!(f.dim.hi.is_none_or(|h| f.dim.lo <= h), "dim bounds crossed for {g:?}");
        debug_assert!(f.sdim.hi.is_none_or(|h| f.sdim.lo <= h), "sdim bounds crossed for {g:?}");
        f
    }

    fn base_rules(&self, g: &Graph, f: &mut Facts) {
        let n = g.vertex_count();
        let nv = format!("|V| = {n}");
        f.dim.raise(1, || cert("dim >= 1".into(), "distinct_points", "vertices map to distinct points", vec![nv.clone()]));
        f.sdim.raise(1, || cert("sdim >= 1".into(), "distinct_points", "a 0-sphere holds one point", vec![nv.clone()]));
        if n >= 3 {
            f.sdim.raise(2, || cert("sdim >= 2".into(), "vertex_count", "a 1-sphere is two points", vec![nv.clone()]));
        }
        let top = n as i64 - 1;
        f.sdim.cap(top, || {
            cert(format!("sdim <= {top}"), "simplex_restriction", "subgraph of the unit simplex K_n", vec![nv.clone()])
        });
        let simplex = simplex_radius(n).expect("n >= 2");
        f.add_profile(RadiusProfile::new(top, vec![Piece::point(simplex, "restriction of the unit simplex")], false));

        if g.max_degree() >= 3 {
            f.dim.raise(2, || {
                cert("dim >= 2".into(), "degree_three", "a point of R^1 has two unit neighbors", vec![format!("max degree {}", g.max_degree())])
            });
        }
        let omega = clique_number(g) as i64;
        if omega >= 3 {
            let c = |k: &str| {
                cert(format!("{k} >= {}", omega - 1), "clique", "K_w has dimension and spherical dimension w-1", vec![format!("clique number {omega}")])
            };
            f.dim.raise(omega - 1, || c("dim"));
            f.sdim.raise(omega - 1, || c("sdim"));
        }
        if let Some(m) = largest_s_subgraph(g) {
            f.sdim.raise(m as i64 - 1, || {
                cert(format!("sdim >= {}", m - 1), "s_subgraph", "S_m = K_{m-3} + e_3 has sdim m-1", vec![format!("S_{m} subgraph")])
            });
        }
        let cyclic = g.edge_count() + g.components().len() > n;
        if cyclic {
            f.dim.raise(2, || cert("dim >= 2".into(), "cycle", "a cycle does not fit on a line", vec![]));
        }
        if g.max_degree() <= 2 {
            let d = if cyclic { 2 } else { 1 };
            f.dim.cap(d, || {
                cert(format!("dim <= {d}"), "paths_and_cycles", "unit paths on a line, regular convex polygons in the plane", vec![])
            });
        } else if !cyclic && self.mode == Mode::Crossings {
            f.dim.cap(2, || cert("dim <= 2".into(), "forest", "generic unit tree drawing in the plane", vec![]));
        }
    }

    fn registry(&self, g: &Graph, f: &mut Facts) {
        let n = g.vertex_count();
        let exact = |f: &mut Facts, dim: i64, sdim: i64, what: &str, anchor: &str| {
            let c = |k: &str, v: i64| cert(format!("{k} = {v}"), "registry", anchor, vec![what.to_string()]);
            if dim >= 0 {
                f.dim.raise(dim, || c("dim", dim));
                f.dim.cap(dim, || c("dim", dim));
            }
            f.sdim.raise(sdim, || c("sdim", sdim));
            f.sdim.cap(sdim, || c("sdim", sdim));
        };
        let cone = |k: i64, what: &str, anchor: &str| {
            Some((k, cert(format!("dim = {k}"), "registry_cone", anchor, vec![format!("{what} + K_1")])))
        };
        if g.is_edgeless() {
            let what = format!("e_{n}");
            let s = if n == 2 { 1 } else { 2 };
            exact(f, 1, s, &what, "edgeless graphs on a sphere of any radius");
            f.add_profile(RadiusProfile::any_radius(s, "edgeless: any radius"));
            f.cone_dim = if n <= 2 {
                cone(1, &what, "unit star on a line")
            } else {
                cone(2, &what, "leaves on the unit circle")
            };
            return;
        }
        if g.is_complete() {
            let what = format!("K_{n}");
            let r = simplex_radius(n).expect("n >= 2");
            exact(f, n as i64 - 1, n as i64 - 1, &what, "the unit simplex is the unique embedding");
            f.add_profile(RadiusProfile::new(n as i64 - 1, vec![Piece::point(r, "unit simplex circumradius")], true));
            return;
        }
        let is_cycle = n >= 3 && g.is_connected() && (0..n).all(|v| g.degree(v) == 2);
        if is_cycle {
            let what = format!("C_{n}");
            let wheel = if n == 6 { 2 } else { 3 };
            f.cone_dim = cone(wheel, &what, "hub at the center of a unit-radius sphere through the cycle");
            if n == 6 {
                exact(f, 2, 3, &what, "no unit star hexagon fits a circle of radius < 1");
                f.add_profile(hexagon_profile());
                return;
            }
            match self.mode {
                Mode::Crossings => {
                    exact(f, 2, 2, &what, "regular star polygons {n/m} with circumradius < 1");
                    let pieces = (1..)
                        .take_while(|m| 2 * m < n)
                        .filter(|&m| gcd(n, m) == 1)
                        .filter_map(|m| match star_polygon_radius(n, m) {
                            Ok(PolygonRadius::Radius { value }) if value < 1.0 => {
                                Some(Piece::point(value, &format!("star polygon {{{n}/{m}}}")))
                            }
                            _ => None,
                        })
                        .collect();
                    f.add_profile(RadiusProfile::new(2, pieces, true));
                }
                Mode::NonCrossing if n < 6 => {
                    exact(f, 2, 2, &what, "a non-crossing inscribed unit cycle is the convex polygon");
                    let r = convex_polygon_radius(n);
                    f.add_profile(RadiusProfile::new(2, vec![Piece::point(r, "convex polygon")], true));
                }
                Mode::NonCrossing => {
                    exact(f, 2, 3, &what, "non-crossing unit cycles of length >= 6 leave every circle of radius < 1");
                    f.add_profile(RadiusProfile::unspecified(3));
                }
            }
            return;
        }
        if self.mode == Mode::NonCrossing {
            // Only path forests: a cycle component pins its own circle radius.
            let e = g.edge_count();
            let petal = g.max_degree() <= 2 && (0..n).all(|v| g.degree(v) >= 1) && e + g.components().len() == n;
            if petal && (3..=6).contains(&e) {
                let what = format!("petal with {e} edges");
                if e <= 5 {
                    let r = convex_polygon_radius(e);
                    exact(f, -1, 2, &what, "petals fit every circle of radius above the convex polygon radius");
                    f.add_profile(RadiusProfile::new(2, vec![Piece::open(r, 1.0, "petal on a circle")], true));
                    f.cone_dim = cone(2, &what, "petal chords on the unit circle");
                } else {
                    exact(f, -1, 3, &what, "six unit chords close up on the unit circle");
                    f.add_profile(RadiusProfile::new(3, vec![Piece::open(0.5, 1.0, "petal on a 2-sphere")], false));
                    f.cone_dim = cone(3, &what, "petal on the unit 2-sphere");
                }
            }
        }
    }
}

/// `C_6` on a 2-sphere: every radius in `(1/2, 1)`. Radius 1/2 would make
/// every edge a diameter, which forces repeated vertices.
fn hexagon_profile() -> RadiusProfile {
    RadiusProfile::new(3, vec![Piece::open(0.5, 1.0, "hexagon on a 2-sphere")], true)
}

/// Largest `m >= 4` with `S_m = K_{m-3} + e_3` a subgraph of `g`.
fn largest_s_subgraph(g: &Graph) -> Option<usize> {
    if g.is_complete() {
        return (g.vertex_count() >= 4).then_some(g.vertex_count());
    }
    let mut best = None;
    let mut budget = 1usize << 16;
    fn grow(g: &Graph, size: usize, common: u64, cands: u64, best: &mut Option<usize>, budget: &mut usize) {
        if *budget == 0 {
            return;
        }
        *budget -= 1;
        if size > 0 && common.count_ones() >= 3 {
            *best = (*best).max(Some(size + 3));
        }
        for v in bits(cands) {
            let later = cands & !((1u64 << (v + 1)) - 1);
            let nb = g.neighbors_mask(v);
            // Members of the common neighborhood outside the clique.
            grow(g, size + 1, common & nb, later & nb, best, budget);
        }
    }
    let all = g.all_vertices();
    grow(g, 0, all, all, &mut best, &mut budget);
    best
}

fn r_map(r: f64) -> f64 {
    1.0 / (2.0 * (1.0 - r * r).sqrt())
}

fn intersect_profiles(a: &RadiusProfile, b: &RadiusProfile) -> RadiusProfile {
    let pieces = a
        .pieces
        .iter()
        .flat_map(|p| b.pieces.iter().filter_map(move |q| p.intersect(q)))
        .collect();
    let mut out = RadiusProfile::new(a.sphere_dim, pieces, false);
    out.spanning = false;
    out
}

/// Short human-readable name for certificate inputs.
pub fn describe(g: &Graph) -> String {
    let n = g.vertex_count();
    if g.is_edgeless() {
        format!("e_{n}")
    } else if g.is_complete() {
        format!("K_{n}")
    } else if n >= 3 && g.is_connected() && (0..n).all(|v| g.degree(v) == 2) {
        format!("C_{n}")
    } else {
        format!("graph(|V|={n}, |E|={})", g.edge_count())
    }
}

fn close(f: &mut Facts) {
    if f.dim.lo > f.sdim.lo {
        let (v, c) = (f.dim.lo, f.dim.lo_cert.clone());
        f.sdim.raise(v, || {
            cert(format!("sdim >= {v}"), "sdim_at_least_dim", "a sphere embedding is an embedding", vec![]).with([c])
        });
    }
    if let Some(h) = f.sdim.hi {
        let c = f.sdim.hi_cert.clone();
        f.dim.cap(h, || {
            cert(format!("dim <= {h}"), "dim_at_most_sdim", "a sphere embedding is an embedding", vec![]).with([c])
        });
    }
}

impl Engine {
    fn component_rules(&self, g: &Graph, comps: &[u64], f: &mut Facts) {
        let parts: Vec<(Graph, Arc<Facts>)> = comps
            .iter()
            .map(|&m| {
                let h = g.induced(m);
                let fh = self.facts(&h);
                (h, fh)
            })
            .collect();
        let names: Vec<String> = parts.iter().map(|(h, _)| describe(h)).collect();
        let (i, p) = parts.iter().enumerate().max_by_key(|(_, (_, p))| p.dim.lo).expect("two components");
        let lo = p.1.dim.lo;
        f.dim.raise(lo, || {
            cert(format!("dim >= {lo}"), "subgraph", "dimension is monotone under subgraphs", vec![names[i].clone()])
                .with([p.1.dim.lo_cert.clone()])
        });
        let (i, p) = parts.iter().enumerate().max_by_key(|(_, (_, p))| p.sdim.lo).expect("two components");
        let lo = p.1.sdim.lo;
        f.sdim.raise(lo, || {
            cert(format!("sdim >= {}", show(lo)), "subgraph", "spherical dimension is monotone under subgraphs", vec![names[i].clone()])
                .with([p.1.sdim.lo_cert.clone()])
        });
        if let Some(hi) = parts.iter().map(|(_, p)| p.dim.hi).collect::<Option<Vec<_>>>() {
            let hi = hi.into_iter().max().unwrap_or(1).max(1);
            f.dim.cap(hi, || {
                cert(format!("dim <= {hi}"), "components", "components placed far apart", names.clone())
                    .with(parts.iter().map(|(_, p)| p.dim.hi_cert.clone()))
            });
        }
        let big: Vec<&(Graph, Arc<Facts>)> = parts.iter().filter(|(h, _)| h.vertex_count() > 1).collect();
        if big.len() == 1 {
            // Isolated vertices go anywhere free on a sphere of dimension >= 2.
            let base = &big[0].1;
            for p in base.profiles.iter().filter(|p| p.spanning && p.sphere_dim >= 2 && !p.pieces.is_empty()) {
                let t = p.sphere_dim;
                let mut q = p.clone();
                q.complete = false;
                f.sdim.cap(t, || {
                    cert(format!("sdim <= {t}"), "isolated_vertices", "isolated vertices placed on the same sphere", vec![p.to_string()])
                        .with([base.sdim.hi_cert.clone()])
                });
                f.add_profile(q);
            }
        }
        if self.mode == Mode::Crossings && !big.is_empty() {
            let top = g.vertex_count() as i64 - 1;
            for t in 2..top {
                let mut common: Option<RadiusProfile> = None;
                for (_, fh) in &big {
                    let mut u = RadiusProfile::new(t, Vec::new(), false);
                    for p in fh.profiles_at(t) {
                        u.absorb(&p);
                    }
                    common = Some(match common {
                        None => u,
                        Some(c) => intersect_profiles(&c, &u),
                    });
                }
                let Some(mut c) = common.filter(|c| !c.pieces.is_empty()) else { continue };
                c.spanning = false;
                c.complete = false;
                f.sdim.cap(t, || {
                    cert(format!("sdim <= {t}"), "common_radius", "components rotated apart on one sphere", vec![c.to_string()])
                });
                f.add_profile(c);
                break;
            }
        }
    }

    fn join_rules(&self, g: &Graph, factors: &[u64], f: &mut Facts) {
        let k = factors.len();
        for sub in 0..(1u64 << (k - 1)) - 1 {
            let (mut a, mut b) = (factors[0], 0u64);
            for (i, &m) in factors.iter().enumerate().skip(1) {
                if sub >> (i - 1) & 1 == 1 {
                    a |= m;
                } else {
                    b |= m;
                }
            }
            let (ga, gb) = (g.induced(a), g.induced(b));
            let (fa, fb) = (self.facts(&ga), self.facts(&gb));
            match (ga.vertex_count(), gb.vertex_count()) {
                (1, 1) => {}
                (1, _) => self.cone(&gb, &fb, f),
                (_, 1) => self.cone(&ga, &fa, f),
                _ => self.connector(&ga, &fa, &gb, &fb, f),
            }
        }
    }

    fn cone(&self, g: &Graph, fb: &Facts, f: &mut Facts) {
        let what = format!("{} + K_1", describe(g));
        if let Some(s) = fb.sdim.hi {
            let d = s + 1;
            f.dim.cap(d, || {
                cert(format!("dim <= {d}"), "cone_over_sphere", "apex at distance 1 over a sphere of radius < 1", vec![what.clone()])
                    .with([fb.sdim.hi_cert.clone()])
            });
        }
        if let Some((d, c)) = &fb.cone_dim {
            f.dim.raise(*d, || c.clone());
            f.dim.cap(*d, || c.clone());
        }
        let lo = fb.dim.lo;
        f.dim.raise(lo, || {
            cert(format!("dim >= {lo}"), "subgraph", "dimension is monotone under subgraphs", vec![what.clone()])
                .with([fb.dim.lo_cert.clone()])
        });
        let lo = fb.sdim.lo + 1;
        f.sdim.raise(lo, || {
            cert(format!("sdim >= {lo}"), "strict_cone_increase", "adding a universal vertex raises sdim", vec![what.clone()])
                .with([fb.sdim.lo_cert.clone()])
        });
        for p in fb.profiles.iter().filter(|p| p.spanning) {
            let q = p.below(CONE_LIMIT);
            if q.pieces.is_empty() {
                continue;
            }
            let t = p.sphere_dim + 1;
            let mut img = q.map_increasing(t, r_map, "cone radius R(r)");
            img.complete = p.complete && fb.sdim.exact() == Some(p.sphere_dim);
            img.spanning = true;
            f.sdim.cap(t, || {
                cert(format!("sdim <= {t}"), "cone_radius", "coning a sphere of radius r gives radius 1/(2 sqrt(1-r^2))", vec![what.clone(), p.to_string()])
            });
            f.add_profile(img);
        }
        if let Some(p) = fb.complete_profile() {
            if p.below(CONE_LIMIT).pieces.is_empty() && !p.unspecified_nonempty {
                let lo = p.sphere_dim + 2;
                f.sdim.raise(lo, || {
                    cert(format!("sdim >= {lo}"), "radius_jump", "every feasible radius cones to a radius >= 1", vec![what.clone(), p.to_string()])
                });
            }
        }
    }

    fn connector(&self, ga: &Graph, fa: &Facts, gb: &Graph, fb: &Facts, f: &mut Facts) {
        let what = format!("{} + {}", describe(ga), describe(gb));
        let lo = fa.sdim.lo + fb.sdim.lo;
        f.dim.raise(lo, || {
            cert(format!("dim >= {lo}"), "join_sphere_sum", "both sides of a join lie on spheres of radius < 1 with r1^2 + r2^2 = 1", vec![what.clone()])
                .with([fa.sdim.lo_cert.clone(), fb.sdim.lo_cert.clone()])
        });
        if let (Some(pa), Some(pb)) = (fa.complete_profile(), fb.complete_profile()) {
            if solve_radius_equation(pa, pb) == RadiusEquation::Impossible {
                let lo = pa.sphere_dim + pb.sphere_dim + 1;
                f.dim.raise(lo, || {
                    cert(format!("dim >= {lo}"), "join_radius_gap", "no radii with r1^2 + r2^2 = 1 at the spherical dimensions", vec![what.clone(), pa.to_string(), pb.to_string()])
                        .with([fa.sdim.lo_cert.clone(), fb.sdim.lo_cert.clone()])
                });
            }
        }
        let (ca, cb) = (candidates(fa), candidates(fb));
        for pa in &ca {
            for pb in &cb {
                let t = pa.sphere_dim + pb.sphere_dim;
                if f.dim.hi.is_none_or(|h| t < h) {
                    let sol = solve_radius_equation(pa, pb);
                    if sol.solvable() {
                        let detail = match sol {
                            RadiusEquation::Witness(r1, r2) => format!("r1 = {r1:.12}, r2 = {r2:.12}"),
                            _ => "radius of one side unspecified, partner takes any radius".into(),
                        };
                        f.dim.cap(t, || {
                            cert(format!("dim <= {t}"), "orthogonal_join", "sides on orthogonal concentric spheres with r1^2 + r2^2 = 1", vec![what.clone(), pa.to_string(), pb.to_string(), detail])
                        });
                    }
                }
                if f.sdim.hi.is_none_or(|h| t < h) && pa.contains(HALF_SQRT2) && pb.contains(HALF_SQRT2) {
                    f.sdim.cap(t, || {
                        cert(format!("sdim <= {t}"), "orthogonal_equal_radii", "both sides at radius sqrt(2)/2 share one sphere", vec![what.clone()])
                    });
                    let mut p = RadiusProfile::new(t, vec![Piece::point(HALF_SQRT2, "orthogonal join at sqrt(2)/2")], false);
                    p.spanning = pa.spanning && pb.spanning;
                    f.add_profile(p);
                }
            }
        }
    }
}

/// Profiles at every sphere dimension reachable by lifting.
fn candidates(f: &Facts) -> Vec<RadiusProfile> {
    let (Some(lo), Some(hi)) = (
        f.profiles.iter().map(|p| p.sphere_dim).min(),
        f.profiles.iter().map(|p| p.sphere_dim).max(),
    ) else {
        return Vec::new();
    };
    (lo..=hi + LIFT_LEVELS).flat_map(|t| f.profiles_at(t)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundsOptions {
    /// Search for embeddings in increasing dimension when rules leave a gap.
    pub embed_fallback: bool,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions {
            embed_fallback: false,
            restarts: crate::embedder::DEFAULT_RESTARTS,
            seed: 0,
        }
    }
}

impl Engine {
    /// Rule bounds, optionally tightened by numerical embeddings.
    pub fn dimension_bounds(&self, g: &Graph, kind: Kind, opts: &BoundsOptions) -> DimensionBounds {
        let mut b = self.bounds(g, kind);
        if !opts.embed_fallback || b.exact().is_some() {
            return b;
        }
        let lo = b.lower_value().unwrap_or(1).max(1);
        let hi = b.upper_value().unwrap_or(g.vertex_count() as i64);
        for d in lo..hi {
            let req = EmbedRequest::new(g.clone(), d as usize)
                .non_crossing(self.mode == Mode::NonCrossing)
                .restarts(opts.restarts)
                .seed(opts.seed);
            let req = if kind == Kind::Sdim { req.on_sphere(None) } else { req };
            if let Ok(EmbedOutcome::Found { restart, report, .. }) = find_embedding(&req) {
                b.upper = Some(Bound::Finite(d));
                b.certificates.push(cert(
                    format!("{kind} <= {d}"),
                    "embedding",
                    "validated numerical embedding",
                    vec![
                        format!("restart {restart}"),
                        format!("max edge residual {:.3e}", report.max_edge_residual),
                    ],
                ));
                break;
            }
        }
        b
    }
}

/// One-shot [`Engine::dimension_bounds`] with a fresh engine.
pub fn dimension_bounds(g: &Graph, kind: Kind, mode: Mode, opts: &BoundsOptions) -> DimensionBounds {
    Engine::new(mode).dimension_bounds(g, kind, opts)
}

/// Exact `sdim` of a registry family with its radius profile at that
/// dimension.
pub fn known_sdim(spec: &FamilySpec, mode: Mode) -> Result<(DimensionBounds, RadiusProfile), EngineError> {
    let g = spec.build()?;
    let supported = match spec {
        FamilySpec::Complete { .. } | FamilySpec::Cycle { .. } | FamilySpec::Empty { .. } | FamilySpec::S { .. } => true,
        FamilySpec::Petal { .. } => mode == Mode::NonCrossing || describe(&g).starts_with("C_"),
        _ => false,
    };
    if !supported {
        return Err(EngineError::NotSupported(format!("{spec} is not a registry family")));
    }
    let engine = Engine::new(mode);
    let b = engine.bounds(&g, Kind::Sdim);
    let Some(s) = b.exact() else {
        return Err(EngineError::NotSupported(format!("sdim of {spec} is only bounded: {b}")));
    };
    let s = s.finite().unwrap_or(-1);
    let mut profile = RadiusProfile::new(s, Vec::new(), false);
    let mut found = false;
    for p in engine.profiles(&g).into_iter().filter(|p| p.sphere_dim == s && p.spanning) {
        profile.absorb(&p);
        found = true;
    }
    if !found && g.vertex_count() > 1 {
        return Err(EngineError::NotSupported(format!("no radius profile for {spec} at dimension {s}")));
    }
    Ok((b, profile))
}

/// Dimension of the join of two or more families.
pub fn sum_dimension(parts: &[FamilySpec], mode: Mode) -> Result<DimensionBounds, EngineError> {
    if parts.len() < 2 {
        return Err(EngineError::InvalidArgument("a sum needs at least two factors".into()));
    }
    let g = FamilySpec::Join { parts: parts.to_vec() }.build()?;
    Ok(Engine::new(mode).bounds(&g, Kind::Dim))
}

/// `dim(C_n + e_k)` from the closed tables.
pub fn wheel_dimension(n: usize, k: usize, mode: Mode) -> Result<i64, EngineError> {
    if n < 3 || k < 1 {
        return Err(EngineError::InvalidArgument(format!("W(n,k) requires n >= 3 and k >= 1, got n={n} k={k}")));
    }
    let row = k.min(3) as i64 - 1;
    Ok(match mode {
        Mode::Crossings => match (row, n == 6) {
            (0, true) => 2,
            (0, false) => 3,
            (1, true) => 4,
            (1, false) => 3,
            (_, true) => 5,
            (_, false) => 4,
        },
        Mode::NonCrossing => match (row, n.cmp(&6)) {
            (0, std::cmp::Ordering::Equal) => 2,
            (0, _) => 3,
            (r, std::cmp::Ordering::Less) => 2 + r,
            (r, _) => 3 + r,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum JumpResult {
    NoJump,
    /// Smallest `n` with `R^n(inf) > 1`.
    JumpAt { n: usize },
}

pub fn jump_test(profile: &RadiusProfile) -> Result<JumpResult, EngineError> {
    let Some((inf, _)) = profile.infimum() else {
        return Err(EngineError::InvalidArgument("profile has no known radius".into()));
    };
    if inf <= HALF_SQRT2 + MEMBER_TOL {
        return Ok(JumpResult::NoJump);
    }
    match iterate_cone_radius(inf, 1 << 20)? {
        ConeIterate::Diverged { step, .. } => Ok(JumpResult::JumpAt { n: step }),
        ConeIterate::Value { .. } => Err(EngineError::InvalidArgument(format!("no divergence found from {inf}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(lit: &str) -> Graph {
        lit.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    fn exact(mode: Mode, lit: &str, kind: Kind) -> Option<i64> {
        Engine::new(mode).bounds(&build(lit), kind).value()
    }

    #[test]
    fn cycle_registry_by_mode() {
        assert_eq!(exact(Mode::Crossings, "C:6", Kind::Sdim), Some(3));
        assert_eq!(exact(Mode::Crossings, "C:7", Kind::Sdim), Some(2));
        assert_eq!(exact(Mode::NonCrossing, "C:7", Kind::Sdim), Some(3));
        assert_eq!(exact(Mode::NonCrossing, "C:5", Kind::Sdim), Some(2));
    }

    #[test]
    fn s5_profile_starts_at_cone_of_half() {
        let (b, p) = known_sdim(&FamilySpec::S { n: 5 }, Mode::Crossings).unwrap();
        assert_eq!(b.value(), Some(4));
        let (inf, attained) = p.infimum().unwrap();
        assert!((inf - 1.0 / 3f64.sqrt()).abs() < 1e-12 && !attained);
        assert!(p.contains(0.99));
    }

    #[test]
    fn e3_any_radius() {
        let (b, p) = known_sdim(&FamilySpec::Empty { n: 3 }, Mode::Crossings).unwrap();
        assert_eq!(b.value(), Some(2));
        assert!(p.is_full());
    }

    #[test]
    fn sums() {
        let e = |n| FamilySpec::Empty { n };
        let c = |n| FamilySpec::Cycle { n };
        assert_eq!(sum_dimension(&[e(3), e(3)], Mode::Crossings).unwrap().value(), Some(4));
        assert_eq!(sum_dimension(&[c(6), e(2)], Mode::Crossings).unwrap().value(), Some(4));
        for n in 1..=5 {
            let b = sum_dimension(&[FamilySpec::S { n }, e(3)], Mode::Crossings).unwrap();
            assert_eq!(b.value(), Some(n as i64 + 1), "S_{n} + e_3");
        }
        assert!(sum_dimension(&[e(3)], Mode::Crossings).is_err());
    }

    #[test]
    fn edgeless_sums_are_four() {
        for a in 3..=6 {
            for b in 3..=6 {
                let d = sum_dimension(&[FamilySpec::Empty { n: a }, FamilySpec::Empty { n: b }], Mode::Crossings).unwrap();
                assert_eq!(d.value(), Some(4), "e_{a} + e_{b}");
            }
        }
    }

    #[test]
    fn wheel_table_examples() {
        assert_eq!(wheel_dimension(6, 1, Mode::Crossings).unwrap(), 2);
        assert_eq!(wheel_dimension(8, 2, Mode::Crossings).unwrap(), 3);
        assert_eq!(wheel_dimension(5, 2, Mode::NonCrossing).unwrap(), 3);
        assert!(wheel_dimension(2, 1, Mode::Crossings).is_err());
    }

    #[test]
    fn wheel_table_matches_rules() {
        for mode in [Mode::Crossings, Mode::NonCrossing] {
            let engine = Engine::new(mode);
            for n in 3..=9 {
                for k in 1..=3 {
                    let b = engine.bounds(&build(&format!("W:{n}:{k}")), Kind::Dim);
                    assert_eq!(b.value(), Some(wheel_dimension(n, k, mode).unwrap()), "W_{n}^{k} {mode}: {b}");
                }
            }
        }
    }

    #[test]
    fn clique_sdim_steps_by_one() {
        let engine = Engine::new(Mode::Crossings);
        for n in 3..=8 {
            let a = engine.bounds(&Graph::complete(n).unwrap(), Kind::Sdim).value().unwrap();
            let b = engine.bounds(&Graph::complete(n - 1).unwrap(), Kind::Sdim).value().unwrap();
            assert_eq!(a, b + 1);
        }
        assert_eq!(exact(Mode::Crossings, "K:7", Kind::Dim), Some(6));
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(exact(Mode::Crossings, "W:6:1", Kind::Dim), Some(2));
        assert_eq!(exact(Mode::Crossings, "W:5:1", Kind::Dim), Some(3));
        assert_eq!(exact(Mode::Crossings, "S:4", Kind::Sdim), Some(3));
        assert_eq!(exact(Mode::Crossings, "E:1", Kind::Sdim), Some(0));
        let empty = Engine::new(Mode::Crossings).bounds(&Graph::empty(0).unwrap(), Kind::Sdim);
        assert_eq!(empty.exact(), Some(Bound::NegInf));
    }

    #[test]
    fn petersen_is_bounded() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        let b = Engine::new(Mode::Crossings).bounds(&g, Kind::Dim);
        assert!(b.lower_value().unwrap() >= 2);
        assert!(b.upper_value().is_some());
        assert!(!b.certificates.is_empty());
    }

    #[test]
    fn jumps() {
        assert_eq!(jump_test(&RadiusProfile::any_radius(2, "")).unwrap(), JumpResult::NoJump);
        let c5 = RadiusProfile::new(2, vec![Piece::point(convex_polygon_radius(5), "")], true);
        assert_eq!(jump_test(&c5).unwrap(), JumpResult::JumpAt { n: 2 });
        let half = RadiusProfile::new(2, vec![Piece::point(HALF_SQRT2, "")], true);
        assert_eq!(jump_test(&half).unwrap(), JumpResult::NoJump);
        for n in 2..=12 {
            let r = simplex_radius(n).unwrap();
            let p = RadiusProfile::new(n as i64 - 1, vec![Piece::point(r, "")], true);
            assert_eq!(jump_test(&p).unwrap(), JumpResult::NoJump);
        }
    }

    #[test]
    fn non_crossing_c5_plus_k2_jumps() {
        let b = Engine::new(Mode::NonCrossing).bounds(&build("J(C:5,K:2)"), Kind::Sdim);
        assert_eq!(b.lower_value(), Some(5), "{}", b.explain());
        assert!(b.certificates.iter().any(|c| c.rule == "radius_jump"));
    }

    #[test]
    fn certificates_serialize() {
        let b = Engine::new(Mode::Crossings).bounds(&build("W:6:2"), Kind::Dim);
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["lower"], 4);
        let c = &json["certificates"][0];
        for key in ["bound", "rule", "paper_anchor", "inputs"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        assert!(b.explain().contains("join"));
    }
}
