//! Sets of feasible sphere radii and the equation `r1² + r2² = 1` over them.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Point-versus-interval membership tolerance.
pub const MEMBER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
    pub source: String,
}

impl Piece {
    pub fn point(x: f64, source: &str) -> Piece {
        Piece { lo: x, lo_closed: true, hi: x, hi_closed: true, source: source.into() }
    }

    pub fn open(lo: f64, hi: f64, source: &str) -> Piece {
        Piece { lo, lo_closed: false, hi, hi_closed: false, source: source.into() }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intersect(&Piece::point(x, "")).is_some()
    }

    /// Intersection with tolerance: endpoints closer than [`MEMBER_TOL`] are
    /// treated as equal and count only when both are closed.
    pub fn intersect(&self, other: &Piece) -> Option<Piece> {
        let (lo, lo_closed) = pick(self.lo, self.lo_closed, other.lo, other.lo_closed, true);
        let (hi, hi_closed) = pick(self.hi, self.hi_closed, other.hi, other.hi_closed, false);
        if hi - lo > MEMBER_TOL {
            Some(Piece { lo, lo_closed, hi, hi_closed, source: self.source.clone() })
        } else if (hi - lo).abs() <= MEMBER_TOL && lo_closed && hi_closed {
            Some(Piece::point(lo, &self.source))
        } else {
            None
        }
    }

    /// A representative member.
    pub fn witness(&self) -> f64 {
        if self.is_point() {
            self.lo
        } else {
            0.5 * (self.lo + self.hi)
        }
    }

    /// `{ sqrt(1 - x²) : x in self }`.
    fn complement_radii(&self) -> Piece {
        let f = |x: f64| (1.0 - x * x).max(0.0).sqrt();
        Piece {
            lo: f(self.hi),
            lo_closed: self.hi_closed,
            hi: f(self.lo),
            hi_closed: self.lo_closed,
            source: self.source.clone(),
        }
    }
}

/// Larger (for lower ends) or smaller (for upper ends) endpoint.
fn pick(a: f64, ac: bool, b: f64, bc: bool, lower: bool) -> (f64, bool) {
    if (a - b).abs() <= MEMBER_TOL {
        (if lower { a.max(b) } else { a.min(b) }, ac && bc)
    } else if (a > b) == lower {
        (a, ac)
    } else {
        (b, bc)
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{:.12}}}", self.lo)
        } else {
            write!(
                f,
                "{}{:.12}, {:.12}{}",
                if self.lo_closed { '[' } else { '(' },
                self.lo,
                self.hi,
                if self.hi_closed { ']' } else { ')' }
            )
        }
    }
}

/// Radii `r in (0, 1)` at which a graph is known to embed on a sphere of
/// dimension `sphere_dim`.
///
/// `complete` marks the pieces as the entire feasible set. `spanning` marks
/// embeddings whose vertices affinely span the sphere, which makes the sphere
/// unique. `unspecified_nonempty` records existence at an unknown radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    pub sphere_dim: i64,
    pub pieces: Vec<Piece>,
    pub unspecified_nonempty: bool,
    pub complete: bool,
    pub spanning: bool,
}

impl RadiusProfile {
    pub fn new(sphere_dim: i64, pieces: Vec<Piece>, complete: bool) -> RadiusProfile {
        let mut p = RadiusProfile {
            sphere_dim,
            pieces,
            unspecified_nonempty: false,
            complete,
            spanning: true,
        };
        p.normalize();
        p
    }

    pub fn unspecified(sphere_dim: i64) -> RadiusProfile {
        RadiusProfile {
            sphere_dim,
            pieces: Vec::new(),
            unspecified_nonempty: true,
            complete: false,
            spanning: true,
        }
    }

    /// The full open interval `(0, 1)`.
    pub fn any_radius(sphere_dim: i64, source: &str) -> RadiusProfile {
        RadiusProfile::new(sphere_dim, vec![Piece::open(0.0, 1.0, source)], true)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && !self.unspecified_nonempty
    }

    pub fn is_full(&self) -> bool {
        self.pieces.iter().any(|p| p.lo <= 0.0 && p.hi >= 1.0)
    }

    pub fn contains(&self, r: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(r))
    }

    /// Infimum of the known radii and whether it is attained.
    pub fn infimum(&self) -> Option<(f64, bool)> {
        self.pieces
            .iter()
            .map(|p| (p.lo, p.lo_closed))
            .min_by(|a, b| a.0.total_cmp(&b.0))
    }

    /// Clips to `(0, 1)`, sorts and merges overlapping pieces.
    pub fn normalize(&mut self) {
        let mut pieces: Vec<Piece> = self
            .pieces
            .drain(..)
            .filter_map(|p| p.intersect(&Piece::open(0.0, 1.0, "")))
            .collect();
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = out.last_mut() {
                let touching = (p.lo - last.hi).abs() <= MEMBER_TOL && (p.lo_closed || last.hi_closed);
                if p.lo < last.hi - MEMBER_TOL || touching {
                    if p.hi > last.hi + MEMBER_TOL {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    } else if (p.hi - last.hi).abs() <= MEMBER_TOL {
                        last.hi_closed |= p.hi_closed;
                    }
                    if (p.lo - last.lo).abs() <= MEMBER_TOL {
                        last.lo_closed |= p.lo_closed;
                    }
                    if !last.source.split("; ").any(|s| s == p.source) {
                        last.source = format!("{}; {}", last.source, p.source);
                    }
                    continue;
                }
            }
            out.push(p);
        }
        self.pieces = out;
    }

    /// Adds every piece of `other` (same sphere dimension).
    pub fn absorb(&mut self, other: &RadiusProfile) {
        self.pieces.extend(other.pieces.iter().cloned());
        self.unspecified_nonempty |= other.unspecified_nonempty;
        self.complete |= other.complete;
        self.spanning &= other.spanning;
        self.normalize();
        if !self.pieces.is_empty() {
            self.unspecified_nonempty = false;
        }
    }

    /// Radii reachable one sphere dimension up: a sphere of radius `r` is a
    /// slice of a sphere of any radius `ρ >= r` one dimension higher.
    pub fn lifted(&self, source: &str) -> RadiusProfile {
        let mut p = match self.infimum() {
            Some((lo, closed)) => RadiusProfile::new(
                self.sphere_dim + 1,
                vec![Piece { lo, lo_closed: closed, hi: 1.0, hi_closed: false, source: source.into() }],
                false,
            ),
            None => RadiusProfile::unspecified(self.sphere_dim + 1),
        };
        p.unspecified_nonempty = self.unspecified_nonempty && self.pieces.is_empty();
        p.spanning = false;
        p
    }

    /// Image under a monotone increasing map, clipped to `(0, 1)`.
    pub fn map_increasing(&self, sphere_dim: i64, f: impl Fn(f64) -> f64, source: &str) -> RadiusProfile {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: f(p.lo),
                lo_closed: p.lo_closed,
                hi: f(p.hi),
                hi_closed: p.hi_closed,
                source: source.into(),
            })
            .collect();
        RadiusProfile::new(sphere_dim, pieces, false)
    }

    /// Restriction to radii strictly below `bound`.
    pub fn below(&self, bound: f64) -> RadiusProfile {
        let cap = Piece::open(0.0, bound, "");
        let pieces = self.pieces.iter().filter_map(|p| p.intersect(&cap)).collect();
        RadiusProfile { pieces, ..self.clone() }
    }
}

impl fmt::Display for RadiusProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{}: ", self.sphere_dim)?;
        if self.pieces.is_empty() {
            return write!(f, "{}", if self.unspecified_nonempty { "nonempty, radius unspecified" } else { "empty" });
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{p}")?;
        }
        if self.complete {
            write!(f, " (complete)")?;
        }
        Ok(())
    }
}

/// Outcome of searching `r1 in a`, `r2 in b` with `r1² + r2² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusEquation {
    Witness(f64, f64),
    /// A solution exists but one radius is not known numerically.
    Exists,
    /// No solution among known pieces, and the profiles are incomplete.
    Unknown,
    /// Both profiles are complete and no solution exists.
    Impossible,
}

impl RadiusEquation {
    pub fn solvable(self) -> bool {
        matches!(self, RadiusEquation::Witness(..) | RadiusEquation::Exists)
    }
}

pub fn solve_radius_equation(a: &RadiusProfile, b: &RadiusProfile) -> RadiusEquation {
    for pa in &a.pieces {
        for pb in &b.pieces {
            if let Some(hit) = pa.intersect(&pb.complement_radii()) {
                let r1 = hit.witness();
                return RadiusEquation::Witness(r1, (1.0 - r1 * r1).sqrt());
            }
        }
    }
    // An unknown radius r has the partner sqrt(1 - r²) in (0, 1).
    if (a.unspecified_nonempty && b.is_full()) || (b.unspecified_nonempty && a.is_full()) {
        return RadiusEquation::Exists;
    }
    if a.complete && b.complete && !a.unspecified_nonempty && !b.unspecified_nonempty {
        RadiusEquation::Impossible
    } else {
        RadiusEquation::Unknown
    }
}
