//! Numerical unit-distance realization and independent certificate checks.
//!
//! The search minimizes squared residuals `|p_u - p_v|² - 1` over the edges,
//! hinge penalties on near-coincident vertex pairs and, for spherical
//! requests, `|p_v - c|² - ρ²` with a hinge keeping `ρ` below one. Each
//! restart runs a Levenberg–Marquardt loop from a seeded random start.
//! Failure is never evidence of non-embeddability.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EmbedError;
use crate::geometry::{dist, SphereSpec};
use crate::graph::Graph;

/// Edge residual accepted as "found".
pub const FOUND_TOL: f64 = 1e-8;
/// Residual, sphere and separation tolerance for a valid certificate.
pub const CERT_TOL: f64 = 1e-6;
pub const SEPARATION_FLOOR: f64 = 1e-4;
/// Fitted spheres must have radius at most `1 - RADIUS_MARGIN`.
pub const RADIUS_MARGIN: f64 = 1e-6;
pub const CROSSING_TOL: f64 = 1e-7;
pub const DEFAULT_RESTARTS: usize = 100;

const INIT_SPAN: f64 = 1.5;
const SOFT_SEPARATION: f64 = 0.05;
/// Separation enforced in the first phase to push apart folded vertices.
const SPREAD_SEPARATION: f64 = 0.5;
const OPT_RADIUS_CAP: f64 = 1.0 - 1e-3;
const MAX_ITERS: usize = 400;
const BATCH: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub ambient_dim: usize,
    pub coords: Vec<Vec<f64>>,
    pub graph: Graph,
}

impl Embedding {
    pub fn new(graph: Graph, coords: Vec<Vec<f64>>) -> Result<Embedding, EmbedError> {
        if coords.len() != graph.vertex_count() {
            return Err(EmbedError::InvalidRequest(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                graph.vertex_count()
            )));
        }
        let ambient_dim = coords.first().map_or(0, |p| p.len());
        if coords.iter().any(|p| p.len() != ambient_dim || p.iter().any(|x| !x.is_finite())) {
            return Err(EmbedError::InvalidRequest("ragged or non-finite coordinates".into()));
        }
        Ok(Embedding { ambient_dim, coords, graph })
    }

    /// Restriction to the vertices of `mask`, relabeled ascending.
    pub fn restrict(&self, mask: u64) -> Embedding {
        let coords = crate::graph::bits(mask & self.graph.all_vertices())
            .map(|v| self.coords[v].clone())
            .collect();
        Embedding {
            ambient_dim: self.ambient_dim,
            coords,
            graph: self.graph.induced(mask),
        }
    }

    /// SVG of the projection onto the first two coordinates.
    pub fn to_svg(&self) -> String {
        let pt = |p: &Vec<f64>| (p.first().copied().unwrap_or(0.0), p.get(1).copied().unwrap_or(0.0));
        let pts: Vec<(f64, f64)> = self.coords.iter().map(pt).collect();
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in &pts {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if pts.is_empty() {
            lo = (0.0, 0.0);
            hi = (0.0, 0.0);
        }
        let pad = 0.25;
        let (w, h) = (hi.0 - lo.0 + 2.0 * pad, hi.1 - lo.1 + 2.0 * pad);
        let scale = 200.0;
        let map = |(x, y): (f64, f64)| ((x - lo.0 + pad) * scale, (hi.1 - y + pad) * scale);
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1}\" height=\"{:.1}\">\n",
            w * scale,
            h * scale
        );
        for (u, v) in self.graph.edges() {
            let (a, b) = (map(pts[u]), map(pts[v]));
            s.push_str(&format!(
                "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\"/>\n",
                a.0, a.1, b.0, b.1
            ));
        }
        for (i, &p) in pts.iter().enumerate() {
            let c = map(p);
            s.push_str(&format!(
                "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"5\" fill=\"steelblue\"><title>{i}</title></circle>\n",
                c.0, c.1
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedRequest {
    pub graph: Graph,
    pub ambient_dim: usize,
    pub on_sphere: bool,
    /// Fixed target radius in `(0, 1)`; `None` leaves the radius free.
    pub sphere_radius: Option<f64>,
    pub forbid_crossings: bool,
    pub restarts: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl EmbedRequest {
    pub fn new(graph: Graph, ambient_dim: usize) -> EmbedRequest {
        EmbedRequest {
            graph,
            ambient_dim,
            on_sphere: false,
            sphere_radius: None,
            forbid_crossings: false,
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            tolerance: FOUND_TOL,
        }
    }

    pub fn on_sphere(mut self, radius: Option<f64>) -> Self {
        self.on_sphere = true;
        self.sphere_radius = radius;
        self
    }

    pub fn non_crossing(mut self, yes: bool) -> Self {
        self.forbid_crossings = yes;
        self
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check(&self) -> Result<(), EmbedError> {
        if self.graph.vertex_count() == 0 {
            return Err(EmbedError::InvalidRequest("graph has no vertices".into()));
        }
        if self.ambient_dim == 0 {
            return Err(EmbedError::InvalidRequest("ambient dimension must be >= 1".into()));
        }
        if let Some(r) = self.sphere_radius {
            if !(r > 0.0 && r < 1.0) {
                return Err(EmbedError::InvalidRequest(format!("sphere radius {r} not in (0, 1)")));
            }
            if !self.on_sphere {
                return Err(EmbedError::InvalidRequest("sphere radius without on_sphere".into()));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(EmbedError::InvalidRequest("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub max_edge_residual: f64,
    pub min_vertex_separation: f64,
    pub sphere_deviation: Option<f64>,
    pub sphere_radius: Option<f64>,
    pub crossings: Vec<EdgePair>,
    pub vertex_on_edge: Vec<(usize, (usize, usize))>,
    pub verdict: Verdict,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EmbedOutcome {
    Found {
        embedding: Embedding,
        restart: usize,
        report: CertificateReport,
    },
    /// Numerical search failed; this proves nothing about embeddability.
    Inconclusive { restarts: usize },
}

impl EmbedOutcome {
    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            EmbedOutcome::Found { embedding, .. } => Some(embedding),
            EmbedOutcome::Inconclusive { .. } => None,
        }
    }
}

pub fn find_embedding(req: &EmbedRequest) -> Result<EmbedOutcome, EmbedError> {
    req.check()?;
    let problem = Problem::new(req);
    let mut start = 0;
    while start < req.restarts {
        let end = (start + BATCH).min(req.restarts);
        let hit = (start..end)
            .into_par_iter()
            .map(|i| (i, attempt(&problem, req, i)))
            .filter_map(|(i, e)| e.map(|e| (i, e)))
            .min_by_key(|(i, _)| *i);
        if let Some((restart, embedding)) = hit {
            let report = validate(&embedding, req);
            return Ok(EmbedOutcome::Found { embedding, restart, report });
        }
        start = end;
    }
    Ok(EmbedOutcome::Inconclusive { restarts: req.restarts })
}

fn attempt(problem: &Problem, req: &EmbedRequest, restart: usize) -> Option<Embedding> {
    let seed = req.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ restart as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = if restart.is_multiple_of(2) {
        let noise = 0.05 + 0.3 * rng.gen::<f64>();
        problem.layout_start(&mut rng, noise)
    } else {
        problem.initial(&mut rng)
    };
    let spread = levenberg_marquardt(problem, x0, SPREAD_SEPARATION)?;
    let x = levenberg_marquardt(problem, spread, SOFT_SEPARATION)?;
    let embedding = problem.embedding(&x);
    let report = validate(&embedding, req);
    (report.is_valid() && report.max_edge_residual <= req.tolerance).then_some(embedding)
}

struct Problem {
    n: usize,
    d: usize,
    edges: Vec<(usize, usize)>,
    non_edges: Vec<(usize, usize)>,
    graph: Graph,
    on_sphere: bool,
    fixed_radius: Option<f64>,
}

impl Problem {
    fn new(req: &EmbedRequest) -> Problem {
        let g = &req.graph;
        let n = g.vertex_count();
        let non_edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        Problem {
            n,
            d: req.ambient_dim,
            edges: g.edges(),
            non_edges,
            graph: g.clone(),
            on_sphere: req.on_sphere,
            fixed_radius: req.sphere_radius,
        }
    }

    fn params(&self) -> usize {
        let mut p = self.n * self.d;
        if self.on_sphere {
            p += self.d;
            if self.fixed_radius.is_none() {
                p += 1;
            }
        }
        p
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        let mut x = DVector::zeros(self.params());
        for i in 0..self.n * self.d {
            x[i] = rng.gen_range(-INIT_SPAN..INIT_SPAN);
        }
        if self.on_sphere {
            let base = self.n * self.d;
            for k in 0..self.d {
                x[base + k] = (0..self.n).map(|v| x[v * self.d + k]).sum::<f64>() / self.n as f64;
            }
            if self.fixed_radius.is_none() {
                x[base + self.d] = rng.gen_range(0.3..0.9);
            }
        }
        x
    }

    /// Classical MDS of shortest-path distances, scaled to unit mean edge
    /// length and jittered by `noise`.
    fn layout_start(&self, rng: &mut ChaCha8Rng, noise: f64) -> DVector<f64> {
        let (n, d) = (self.n, self.d);
        let hops = shortest_paths(&self.graph);
        let sq = DMatrix::from_fn(n, n, |a, b| (hops[a][b] * hops[a][b]) as f64);
        let row_means: Vec<f64> = (0..n).map(|a| sq.row(a).mean()).collect();
        let total = sq.mean();
        let gram = DMatrix::from_fn(n, n, |a, b| -0.5 * (sq[(a, b)] - row_means[a] - row_means[b] + total));
        let eig = gram.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut x = self.initial(rng);
        for v in 0..n {
            for k in 0..d {
                let c = order.get(k).map_or(0.0, |&i| eig.eigenvectors[(v, i)] * eig.eigenvalues[i].max(0.0).sqrt());
                x[v * d + k] = c;
            }
        }
        let mean_edge = if self.edges.is_empty() {
            1.0
        } else {
            self.edges
                .iter()
                .map(|&(u, v)| (0..d).map(|k| (x[u * d + k] - x[v * d + k]).powi(2)).sum::<f64>().sqrt())
                .sum::<f64>()
                / self.edges.len() as f64
        };
        let scale = if mean_edge > 1e-9 { 1.0 / mean_edge } else { 1.0 };
        for i in 0..n * d {
            x[i] = x[i] * scale + rng.gen_range(-noise..noise);
        }
        if self.on_sphere {
            let base = n * d;
            for k in 0..d {
                x[base + k] = (0..n).map(|v| x[v * d + k]).sum::<f64>() / n as f64;
            }
        }
        x
    }

    fn radius(&self, x: &DVector<f64>) -> f64 {
        self.fixed_radius.unwrap_or_else(|| x[self.n * self.d + self.d])
    }

    fn embedding(&self, x: &DVector<f64>) -> Embedding {
        let coords = (0..self.n)
            .map(|v| (0..self.d).map(|k| x[v * self.d + k]).collect())
            .collect();
        Embedding {
            ambient_dim: self.d,
            coords,
            graph: self.graph.clone(),
        }
    }

    /// Residual vector and Jacobian at `x`.
    fn evaluate(&self, x: &DVector<f64>, separation: f64) -> (DVector<f64>, DMatrix<f64>) {
        let d = self.d;
        let rows = self.edges.len()
            + self.non_edges.len()
            + if self.on_sphere { self.n + usize::from(self.fixed_radius.is_none()) } else { 0 };
        let mut r = DVector::zeros(rows);
        let mut j = DMatrix::zeros(rows, self.params());
        let coord = |v: usize, k: usize| x[v * d + k];
        let mut row = 0;
        for &(u, v) in &self.edges {
            let mut sq = 0.0;
            for k in 0..d {
                let diff = coord(u, k) - coord(v, k);
                sq += diff * diff;
                j[(row, u * d + k)] = 2.0 * diff;
                j[(row, v * d + k)] = -2.0 * diff;
            }
            r[row] = sq - 1.0;
            row += 1;
        }
        let floor = separation * separation;
        for &(u, v) in &self.non_edges {
            let sq: f64 = (0..d).map(|k| (coord(u, k) - coord(v, k)).powi(2)).sum();
            if sq < floor {
                // Scaled so a collapsed pair costs 1 whatever the floor.
                r[row] = 1.0 - sq / floor;
                for k in 0..d {
                    let diff = coord(u, k) - coord(v, k);
                    j[(row, u * d + k)] = -2.0 * diff / floor;
                    j[(row, v * d + k)] = 2.0 * diff / floor;
                }
            }
            row += 1;
        }
        if self.on_sphere {
            let base = self.n * d;
            let rho = self.radius(x);
            for v in 0..self.n {
                let mut sq = 0.0;
                for k in 0..d {
                    let diff = coord(v, k) - x[base + k];
                    sq += diff * diff;
                    j[(row, v * d + k)] = 2.0 * diff;
                    j[(row, base + k)] = -2.0 * diff;
                }
                r[row] = sq - rho * rho;
                if self.fixed_radius.is_none() {
                    j[(row, base + d)] = -2.0 * rho;
                }
                row += 1;
            }
            if self.fixed_radius.is_none() {
                let excess = rho - OPT_RADIUS_CAP;
                if excess > 0.0 {
                    r[row] = excess;
                    j[(row, base + d)] = 1.0;
                } else if rho < 0.0 {
                    r[row] = rho;
                    j[(row, base + d)] = 1.0;
                }
            }
        }
        (r, j)
    }
}

/// Hop counts; unreachable pairs get `n`.
fn shortest_paths(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    (0..n)
        .map(|s| {
            let mut dist = vec![n; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in g.neighbors(u) {
                    if dist[w] == n {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

fn levenberg_marquardt(problem: &Problem, mut x: DVector<f64>, separation: f64) -> Option<DVector<f64>> {
    let (mut r, mut j) = problem.evaluate(&x, separation);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERS {
        if cost < 1e-24 {
            break;
        }
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let trial = &x + &step;
            let (tr, tj) = problem.evaluate(&trial, separation);
            let tcost = tr.norm_squared();
            if tcost < cost {
                let done = step.norm() < 1e-15 * (1.0 + x.norm());
                x = trial;
                r = tr;
                j = tj;
                cost = tcost;
                lambda = (lambda / 3.0).max(1e-12);
                improved = !done;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Recomputes every certificate quantity from the coordinates alone.
pub fn validate(e: &Embedding, req: &EmbedRequest) -> CertificateReport {
    let g = &e.graph;
    let n = g.vertex_count();
    let max_edge_residual = g
        .edges()
        .iter()
        .map(|&(u, v)| (dist(&e.coords[u], &e.coords[v]) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut min_vertex_separation = f64::INFINITY;
    for u in 0..n {
        for v in u + 1..n {
            min_vertex_separation = min_vertex_separation.min(dist(&e.coords[u], &e.coords[v]));
        }
    }
    let (sphere_deviation, sphere_radius) = if req.on_sphere {
        match fit_affine_sphere(e) {
            Some(fit) => (Some(fit.deviation), Some(fit.sphere.radius)),
            None => (Some(f64::INFINITY), None),
        }
    } else {
        (None, None)
    };
    let (crossings, vertex_on_edge) = crossing_scan(e);
    let mut ok = max_edge_residual < CERT_TOL
        && min_vertex_separation >= SEPARATION_FLOOR
        && vertex_on_edge.is_empty()
        && e.ambient_dim <= req.ambient_dim.max(e.ambient_dim);
    if req.on_sphere {
        ok &= sphere_deviation.is_some_and(|dev| dev < CERT_TOL);
        ok &= sphere_radius.is_some_and(|r| r <= 1.0 - RADIUS_MARGIN);
        if let (Some(target), Some(r)) = (req.sphere_radius, sphere_radius) {
            // A lower-dimensional point set also lies on every larger sphere
            // through it, so only radii below the target are infeasible.
            let full_rank = fit_rank(e) == e.ambient_dim;
            ok &= if full_rank { (r - target).abs() < CERT_TOL } else { r <= target + CERT_TOL };
        }
    }
    if req.forbid_crossings {
        ok &= crossings.is_empty();
    }
    CertificateReport {
        max_edge_residual,
        min_vertex_separation,
        sphere_deviation,
        sphere_radius,
        crossings,
        vertex_on_edge,
        verdict: if ok { Verdict::Valid } else { Verdict::Invalid },
    }
}

/// Edge pairs without a shared endpoint whose closed segments come within
/// [`CROSSING_TOL`], and vertices lying on the interior of a non-incident edge.
pub type EdgePair = ((usize, usize), (usize, usize));

pub fn crossing_scan(e: &Embedding) -> (Vec<EdgePair>, Vec<(usize, (usize, usize))>) {
    let edges = e.graph.edges();
    let p = &e.coords;
    let mut crossings = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segment_distance(&p[a], &p[b], &p[c], &p[d]) < CROSSING_TOL {
                crossings.push(((a, b), (c, d)));
            }
        }
    }
    let mut on_edge = Vec::new();
    for w in 0..e.graph.vertex_count() {
        for &(a, b) in &edges {
            if w != a && w != b && point_segment_distance(&p[w], &p[a], &p[b]) < CROSSING_TOL {
                on_edge.push((w, (a, b)));
            }
        }
    }
    (crossings, on_edge)
}

pub fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let ap: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
    let len2: f64 = ab.iter().map(|x| x * x).sum();
    let t = if len2 > 0.0 {
        (ap.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q: Vec<f64> = a.iter().zip(&ab).map(|(x, y)| x + t * y).collect();
    dist(p, &q)
}

/// Minimal distance between closed segments `p1q1` and `p2q2` in any dimension.
pub fn segment_distance(p1: &[f64], q1: &[f64], p2: &[f64], q2: &[f64]) -> f64 {
    let d1: Vec<f64> = q1.iter().zip(p1).map(|(a, b)| a - b).collect();
    let d2: Vec<f64> = q2.iter().zip(p2).map(|(a, b)| a - b).collect();
    let r: Vec<f64> = p1.iter().zip(p2).map(|(a, b)| a - b).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let (a, e, f) = (dot(&d1, &d1), dot(&d2, &d2), dot(&d2, &r));
    let (c, b) = (dot(&d1, &r), dot(&d1, &d2));
    let eps = 1e-18;
    let (s, t);
    if a <= eps && e <= eps {
        return dist(p1, p2);
    }
    if a <= eps {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else if e <= eps {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else {
        let denom = a * e - b * b;
        let mut s0 = if denom > eps * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
        let mut t0 = (b * s0 + f) / e;
        if t0 < 0.0 {
            t0 = 0.0;
            s0 = (-c / a).clamp(0.0, 1.0);
        } else if t0 > 1.0 {
            t0 = 1.0;
            s0 = ((b - c) / a).clamp(0.0, 1.0);
        }
        s = s0;
        t = t0;
    }
    let c1: Vec<f64> = p1.iter().zip(&d1).map(|(x, y)| x + s * y).collect();
    let c2: Vec<f64> = p2.iter().zip(&d2).map(|(x, y)| x + t * y).collect();
    dist(&c1, &c2)
}

struct AffineFit {
    sphere: SphereSpec,
    deviation: f64,
}

fn centered(e: &Embedding) -> (Vec<f64>, DMatrix<f64>) {
    let (n, d) = (e.coords.len(), e.ambient_dim);
    let mean: Vec<f64> = (0..d)
        .map(|k| e.coords.iter().map(|p| p[k]).sum::<f64>() / n as f64)
        .collect();
    let m = DMatrix::from_fn(n, d, |i, k| e.coords[i][k] - mean[k]);
    (mean, m)
}

/// Dimension of the affine hull of the vertex positions.
pub fn fit_rank(e: &Embedding) -> usize {
    if e.coords.len() < 2 {
        return 0;
    }
    let (_, m) = centered(e);
    let svd = m.svd(false, false);
    svd.singular_values.iter().filter(|&&s| s > 1e-7).count()
}

/// Circumsphere within the affine hull, fitted by linear least squares.
fn fit_affine_sphere(e: &Embedding) -> Option<AffineFit> {
    let n = e.coords.len();
    if n < 2 {
        return None;
    }
    let (mean, m) = centered(e);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.as_ref()?;
    let mut axes: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1e-7)
        .map(|(i, &s)| (s, i))
        .collect();
    axes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let k = axes.len();
    if k == 0 {
        return None;
    }
    let basis: Vec<Vec<f64>> = axes
        .iter()
        .map(|&(_, i)| vt.row(i).iter().copied().collect())
        .collect();
    let local: Vec<Vec<f64>> = (0..n)
        .map(|i| basis.iter().map(|b| (0..e.ambient_dim).map(|c| m[(i, c)] * b[c]).sum()).collect())
        .collect();
    // |y - c|² = ρ²  <=>  2 y·c + (ρ² - |c|²) = |y|²
    let a = DMatrix::from_fn(n, k + 1, |i, c| if c < k { 2.0 * local[i][c] } else { 1.0 });
    let rhs = DVector::from_fn(n, |i, _| local[i].iter().map(|x| x * x).sum());
    let sol = a.svd(true, true).solve(&rhs, 1e-12).ok()?;
    let c: Vec<f64> = (0..k).map(|i| sol[i]).collect();
    let rho2 = sol[k] + c.iter().map(|x| x * x).sum::<f64>();
    if !(rho2 > 0.0) {
        return None;
    }
    let radius = rho2.sqrt();
    let deviation = local
        .iter()
        .map(|y| (dist(y, &c) - radius).abs())
        .fold(0.0, f64::max);
    let mut center = mean;
    for (coef, b) in c.iter().zip(&basis) {
        for (x, bi) in center.iter_mut().zip(b) {
            *x += coef * bi;
        }
    }
    let sphere = SphereSpec {
        ambient_dim: e.ambient_dim,
        sphere_dim: k,
        center,
        radius,
        carrier: basis,
    };
    Some(AffineFit { sphere, deviation })
}

/// The sphere of minimal dimension through every vertex, or `None` when the
/// vertices are not cospherical within [`CERT_TOL`].
pub fn fitted_sphere(e: &Embedding) -> Option<SphereSpec> {
    fit_affine_sphere(e).filter(|f| f.deviation < CERT_TOL).map(|f| f.sphere)
}

/// Places `eg` and `eh` on concentric spheres in orthogonal coordinate blocks
/// and adds every cross edge. Requires the squared radii to sum to one.
pub fn orthogonal_join_embedding(
    eg: &Embedding,
    eh: &Embedding,
    forbid_crossings: bool,
) -> Result<Embedding, EmbedError> {
    let sg = fitted_sphere(eg)
        .ok_or_else(|| EmbedError::Precondition("first embedding is not on a sphere".into()))?;
    let sh = fitted_sphere(eh)
        .ok_or_else(|| EmbedError::Precondition("second embedding is not on a sphere".into()))?;
    let gap = sg.radius * sg.radius + sh.radius * sh.radius - 1.0;
    if gap.abs() >= CERT_TOL {
        return Err(EmbedError::Precondition(format!(
            "squared radii {:.9} + {:.9} do not sum to 1",
            sg.radius * sg.radius,
            sh.radius * sh.radius
        )));
    }
    let local = |e: &Embedding, s: &SphereSpec| -> Vec<Vec<f64>> {
        e.coords
            .iter()
            .map(|p| {
                let rel: Vec<f64> = p.iter().zip(&s.center).map(|(a, b)| a - b).collect();
                s.carrier
                    .iter()
                    .map(|b| b.iter().zip(&rel).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect()
    };
    let (lg, lh) = (local(eg, &sg), local(eh, &sh));
    let (k1, k2) = (sg.sphere_dim, sh.sphere_dim);
    let mut coords = Vec::with_capacity(lg.len() + lh.len());
    for p in lg {
        let mut q = p;
        q.resize(k1 + k2, 0.0);
        coords.push(q);
    }
    for p in lh {
        let mut q = vec![0.0; k1];
        q.extend(p);
        coords.push(q);
    }
    let graph = eg.graph.join(&eh.graph)?;
    let joined = Embedding::new(graph.clone(), coords)?;
    let req = EmbedRequest::new(graph, k1 + k2).non_crossing(forbid_crossings);
    let report = validate(&joined, &req);
    if !report.is_valid() {
        return Err(EmbedError::Precondition(format!(
            "joined embedding failed validation: {report:?}"
        )));
    }
    Ok(joined)
}

/// Regular star polygon `{n/m}` with unit sides, centered at the origin.
pub fn regular_polygon_coords(n: usize, m: usize) -> Vec<Vec<f64>> {
    let r = 0.5 / (m as f64 * std::f64::consts::PI / n as f64).sin();
    (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * (i * m % n) as f64 / n as f64;
            vec![r * a.cos(), r * a.sin()]
        })
        .collect()
}

/// Unit regular simplex on `n` vertices in `R^{n-1}`, centered at the origin.
pub fn simplex_coords(n: usize) -> Vec<Vec<f64>> {
    // Scaled standard basis of R^n projected onto the sum-zero hyperplane.
    let raw: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (if k == i { 1.0 } else { 0.0 } - 1.0 / n as f64) / 2f64.sqrt())
                .collect()
        })
        .collect();
    let dummy = Embedding {
        ambient_dim: n,
        coords: raw,
        graph: Graph::empty(n).expect("small"),
    };
    let fit = fit_affine_sphere(&dummy).expect("simplex is cospherical");
    dummy
        .coords
        .iter()
        .map(|p| {
            fit.sphere
                .carrier
                .iter()
                .map(|b| b.iter().zip(p).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect()
}
