//! Closed-form sphere geometry: pairwise intersections, equidistant loci,
//! the cone radius map `R(r) = 1 / (2 sqrt(1 - r^2))`, simplex and regular
//! star-polygon circumradii.
//!
//! Sphere dimensions count the dimension of the affine space a sphere spans:
//! a 1-sphere is a pair of points, a 2-sphere a circle.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Tolerance for the tangent (single point) intersection case.
pub const TANGENT_TOL: f64 = 1e-12;

pub const HALF_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereSpec {
    pub ambient_dim: usize,
    pub sphere_dim: usize,
    pub center: Vec<f64>,
    pub radius: f64,
    /// Orthonormal basis of the linear subspace parallel to the sphere's
    /// affine hull; `carrier.len() == sphere_dim`.
    pub carrier: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum IntersectionResult {
    Empty,
    Point(Vec<f64>),
    Sphere(SphereSpec),
}

impl SphereSpec {
    pub fn new(
        center: Vec<f64>,
        radius: f64,
        carrier: Vec<Vec<f64>>,
    ) -> Result<SphereSpec, GeometryError> {
        let ambient_dim = center.len();
        let sphere_dim = carrier.len();
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GeometryError::InvalidSphere(format!("radius {radius} must be positive")));
        }
        if sphere_dim == 0 || sphere_dim > ambient_dim {
            return Err(GeometryError::InvalidSphere(format!(
                "sphere dimension {sphere_dim} must lie in 1..={ambient_dim}"
            )));
        }
        for (i, a) in carrier.iter().enumerate() {
            if a.len() != ambient_dim {
                return Err(GeometryError::InvalidSphere("carrier vector length".into()));
            }
            for (j, b) in carrier.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot(a, b) - want).abs() > 1e-9 {
                    return Err(GeometryError::InvalidSphere("carrier is not orthonormal".into()));
                }
            }
        }
        Ok(SphereSpec { ambient_dim, sphere_dim, center, radius, carrier })
    }

    /// Full-dimensional sphere in `R^center.len()` with the standard basis.
    pub fn full(center: Vec<f64>, radius: f64) -> Result<SphereSpec, GeometryError> {
        let d = center.len();
        SphereSpec::new(center, radius, standard_basis(d, 0..d))
    }

    /// Point of the sphere at carrier coordinates `dir` (normalized first).
    pub fn point_at(&self, dir: &[f64]) -> Vec<f64> {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut p = self.center.clone();
        for (coef, basis) in dir.iter().zip(&self.carrier) {
            axpy(&mut p, self.radius * coef / norm, basis);
        }
        p
    }

    /// Distance from `p` to the sphere's affine hull.
    pub fn offset_from_hull(&self, p: &[f64]) -> f64 {
        let mut diff = sub(p, &self.center);
        for b in &self.carrier {
            let c = dot(&diff, b);
            axpy(&mut diff, -c, b);
        }
        norm(&diff)
    }

    fn spans_same_hull(&self, other: &SphereSpec) -> bool {
        if self.ambient_dim != other.ambient_dim || self.sphere_dim != other.sphere_dim {
            return false;
        }
        let in_span = |v: &[f64]| {
            let mut r = v.to_vec();
            for b in &self.carrier {
                let c = dot(&r, b);
                axpy(&mut r, -c, b);
            }
            norm(&r) <= 1e-9 * (1.0 + norm(v))
        };
        other.carrier.iter().all(|b| in_span(b)) && in_span(&sub(&other.center, &self.center))
    }
}

/// Intersection of two co-dimensional spheres sharing an affine hull.
///
/// With `d` the center distance, `A = (r² - q² + d²) / (2d)` is the offset of
/// the intersection hyperplane along the center line and `R = r² - A²` the
/// squared radius of the intersection.
pub fn intersect_spheres(
    s1: &SphereSpec,
    s2: &SphereSpec,
) -> Result<IntersectionResult, GeometryError> {
    if !s1.spans_same_hull(s2) {
        return Err(GeometryError::CarrierMismatch);
    }
    let axis = sub(&s2.center, &s1.center);
    let d = norm(&axis);
    if d <= 1e-15 {
        return Err(GeometryError::CoincidentCenters);
    }
    let (r, q) = (s1.radius, s2.radius);
    let a = (r * r - q * q + d * d) / (2.0 * d);
    let disc = r * r - a * a;
    let unit: Vec<f64> = axis.iter().map(|x| x / d).collect();
    let mut foot = s1.center.clone();
    axpy(&mut foot, a, &unit);
    if disc.abs() < TANGENT_TOL {
        return Ok(IntersectionResult::Point(foot));
    }
    if disc < 0.0 || s1.sphere_dim == 1 {
        // A pair of points meets a pair of points only tangentially.
        return Ok(IntersectionResult::Empty);
    }
    let carrier = orthogonal_within(&s1.carrier, &unit);
    Ok(IntersectionResult::Sphere(SphereSpec {
        ambient_dim: s1.ambient_dim,
        sphere_dim: s1.sphere_dim - 1,
        center: foot,
        radius: disc.sqrt(),
        carrier,
    }))
}

/// The locus of points of `R^ambient` at distance `d` from every point of
/// `s`: a sphere with the same center, radius `sqrt(d² - r²)`, lying in the
/// orthogonal complement of `s`'s carrier.
pub fn equidistant_sphere(
    s: &SphereSpec,
    d: f64,
    ambient: usize,
) -> Result<SphereSpec, GeometryError> {
    if !(d > s.radius) {
        return Err(GeometryError::EmptyLocus { distance: d, radius: s.radius });
    }
    if ambient <= s.sphere_dim || ambient < s.ambient_dim {
        return Err(GeometryError::Domain {
            value: ambient as f64,
            domain: "ambient dimension greater than the sphere dimension",
        });
    }
    let pad = |v: &[f64]| {
        let mut w = v.to_vec();
        w.resize(ambient, 0.0);
        w
    };
    let mut basis: Vec<Vec<f64>> = s.carrier.iter().map(|b| pad(b)).collect();
    let fixed = basis.len();
    for e in standard_basis(ambient, 0..ambient) {
        if basis.len() == ambient {
            break;
        }
        let mut v = e;
        for b in &basis {
            let c = dot(&v, b);
            axpy(&mut v, -c, b);
        }
        let n = norm(&v);
        if n > 1e-8 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
    }
    let carrier = basis.split_off(fixed);
    Ok(SphereSpec {
        ambient_dim: ambient,
        sphere_dim: carrier.len(),
        center: pad(&s.center),
        radius: (d * d - s.radius * s.radius).sqrt(),
        carrier,
    })
}

/// `R(r) = 1 / (2 sqrt(1 - r²))`: the circumradius after coning a
/// sphere-embedded graph of radius `r` with an apex at distance 1.
pub fn cone_radius(r: f64) -> Result<f64, GeometryError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(GeometryError::Domain { value: r, domain: "(0, 1)" });
    }
    Ok(1.0 / (2.0 * (1.0 - r * r).sqrt()))
}

/// Inverse of [`cone_radius`] on `(1/2, inf)`.
pub fn inverse_cone_radius(big_r: f64) -> Result<f64, GeometryError> {
    if !(big_r > 0.5) {
        return Err(GeometryError::Domain { value: big_r, domain: "(1/2, inf)" });
    }
    Ok((1.0 - 1.0 / (4.0 * big_r * big_r)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeIterate {
    Value { value: f64, steps: usize },
    /// The iterate reached a value `>= 1` at `step`; the map is undefined beyond.
    Diverged { step: usize, value: f64 },
}

impl ConeIterate {
    pub fn value(&self) -> Option<f64> {
        match self {
            ConeIterate::Value { value, .. } => Some(*value),
            ConeIterate::Diverged { .. } => None,
        }
    }
}

/// `R^n(r)`, stopping at the first iterate `>= 1`.
pub fn iterate_cone_radius(r: f64, n: usize) -> Result<ConeIterate, GeometryError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(GeometryError::Domain { value: r, domain: "(0, 1)" });
    }
    let mut x = r;
    for step in 1..=n {
        x = cone_radius(x)?;
        if x >= 1.0 {
            return Ok(ConeIterate::Diverged { step, value: x });
        }
    }
    Ok(ConeIterate::Value { value: x, steps: n })
}

/// Circumradius of `K_n`'s unique unit embedding, `R^{n-2}(1/2)`.
pub fn simplex_radius(n: usize) -> Result<f64, GeometryError> {
    if n < 2 {
        return Err(GeometryError::Domain { value: n as f64, domain: "n >= 2" });
    }
    match iterate_cone_radius(0.5, n - 2)? {
        ConeIterate::Value { value, .. } => Ok(value),
        ConeIterate::Diverged { .. } => unreachable!("R^k(1/2) stays below sqrt(2)/2"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolygonRadius {
    Radius { value: f64 },
    /// `gcd(n, m) != 1`: the polygon revisits vertices.
    Degenerate,
}

/// Circumradius of the regular star polygon `{n/m}` with unit sides,
/// `1 / (2 sin(m pi / n))`.
pub fn star_polygon_radius(n: usize, m: usize) -> Result<PolygonRadius, GeometryError> {
    check_polygon(n, m)?;
    if gcd(n, m) != 1 {
        return Ok(PolygonRadius::Degenerate);
    }
    let theta = m as f64 * std::f64::consts::PI / n as f64;
    Ok(PolygonRadius::Radius { value: 0.5 / theta.sin() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusClass {
    Lt1,
    Eq1,
    Gt1,
    Degenerate,
}

/// Three-way comparison of the `{n/m}` circumradius with 1, decided exactly
/// by comparing `6m` with `n`.
pub fn classify_polygon_radius(n: usize, m: usize) -> Result<RadiusClass, GeometryError> {
    check_polygon(n, m)?;
    if gcd(n, m) != 1 {
        return Ok(RadiusClass::Degenerate);
    }
    Ok(match (6 * m).cmp(&n) {
        std::cmp::Ordering::Greater => RadiusClass::Lt1,
        std::cmp::Ordering::Equal => RadiusClass::Eq1,
        std::cmp::Ordering::Less => RadiusClass::Gt1,
    })
}

/// Circumradius of the convex regular n-gon with unit sides.
pub fn convex_polygon_radius(n: usize) -> f64 {
    0.5 / (std::f64::consts::PI / n as f64).sin()
}

fn check_polygon(n: usize, m: usize) -> Result<(), GeometryError> {
    if n < 3 {
        return Err(GeometryError::Domain { value: n as f64, domain: "n >= 3" });
    }
    if m < 1 || 2 * m >= n {
        return Err(GeometryError::Domain { value: m as f64, domain: "1 <= m < n/2" });
    }
    Ok(())
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub(crate) fn standard_basis(
    ambient: usize,
    axes: std::ops::Range<usize>,
) -> Vec<Vec<f64>> {
    axes.map(|i| {
        let mut e = vec![0.0; ambient];
        e[i] = 1.0;
        e
    })
    .collect()
}

/// Orthonormal basis of `span(basis) ∩ unit^⊥`, assuming `unit` lies in the span.
fn orthogonal_within(basis: &[Vec<f64>], unit: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![unit.to_vec()];
    for b in basis {
        let mut v = b.clone();
        for o in &out {
            let c = dot(&v, o);
            axpy(&mut v, -c, o);
        }
        let n = norm(&v);
        if n > 1e-8 && out.len() < basis.len() {
            out.push(v.iter().map(|x| x / n).collect());
        }
    }
    out.remove(0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(cx: f64, r: f64) -> SphereSpec {
        SphereSpec::full(vec![cx, 0.0], r).unwrap()
    }

    #[test]
    fn unit_circles_at_distance_one() {
        let res = intersect_spheres(&circle(0.0, 1.0), &circle(1.0, 1.0)).unwrap();
        let IntersectionResult::Sphere(s) = res else { panic!("{res:?}") };
        assert_eq!(s.sphere_dim, 1);
        assert!((s.radius - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((s.center[0] - 0.5).abs() < 1e-12);
        // both points are at distance 1 from both centers
        for sign in [1.0, -1.0] {
            let p = s.point_at(&[sign]);
            assert!((dist(&p, &[0.0, 0.0]) - 1.0).abs() < 1e-12);
            assert!((dist(&p, &[1.0, 0.0]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tangent_and_separated() {
        let res = intersect_spheres(&circle(0.0, 1.0), &circle(2.0, 1.0)).unwrap();
        assert_eq!(res, IntersectionResult::Point(vec![1.0, 0.0]));
        let res = intersect_spheres(&circle(0.0, 1.0), &circle(3.0, 1.0)).unwrap();
        assert_eq!(res, IntersectionResult::Empty);
    }

    #[test]
    fn coincident_centers_rejected() {
        let err = intersect_spheres(&circle(0.0, 1.0), &circle(0.0, 0.5)).unwrap_err();
        assert_eq!(err, GeometryError::CoincidentCenters);
    }

    #[test]
    fn mismatched_hulls_rejected() {
        let a = SphereSpec::new(vec![0.0, 0.0, 0.0], 1.0, standard_basis(3, 0..2)).unwrap();
        let b = SphereSpec::new(vec![0.0, 0.0, 1.0], 1.0, standard_basis(3, 0..2)).unwrap();
        assert_eq!(intersect_spheres(&a, &b).unwrap_err(), GeometryError::CarrierMismatch);
    }

    #[test]
    fn equidistant_from_small_circle() {
        let s = circle(0.0, 0.5);
        let e = equidistant_sphere(&s, 1.0, 3).unwrap();
        assert_eq!(e.sphere_dim, 1);
        assert!((e.radius - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((e.carrier[0][2].abs() - 1.0).abs() < 1e-12);
        let self_dual = equidistant_sphere(&circle(0.0, HALF_SQRT2), 1.0, 4).unwrap();
        assert!((self_dual.radius - HALF_SQRT2).abs() < 1e-12);
        assert_eq!(self_dual.sphere_dim, 2);
    }

    #[test]
    fn equidistant_radius_vanishes_near_d() {
        let e = equidistant_sphere(&circle(0.0, 1.0 - 1e-9), 1.0, 3).unwrap();
        assert!(e.radius > 0.0 && e.radius < 1e-4);
        assert!(matches!(
            equidistant_sphere(&circle(0.0, 1.0), 1.0, 3),
            Err(GeometryError::EmptyLocus { .. })
        ));
    }

    #[test]
    fn cone_radius_values() {
        assert!((cone_radius(0.5).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((cone_radius(HALF_SQRT2).unwrap() - HALF_SQRT2).abs() < 1e-12);
        assert!((cone_radius(0.9).unwrap() - 1.0 / (2.0 * 0.19f64.sqrt())).abs() < 1e-12);
        assert!(cone_radius(0.9).unwrap() > 1.0);
        assert!(cone_radius(0.0).is_err() && cone_radius(1.0).is_err());
    }

    #[test]
    fn inverse_cone_radius_round_trip() {
        for r in [0.1, 0.5, 0.7, 0.95] {
            let back = inverse_cone_radius(cone_radius(r).unwrap()).unwrap();
            assert!((back - r).abs() < 1e-12);
        }
    }

    #[test]
    fn iterates() {
        assert_eq!(
            iterate_cone_radius(0.3, 0).unwrap(),
            ConeIterate::Value { value: 0.3, steps: 0 }
        );
        let two = iterate_cone_radius(0.5, 2).unwrap().value().unwrap();
        assert!((two - (3.0f64 / 8.0).sqrt()).abs() < 1e-12);
        assert!(matches!(
            iterate_cone_radius(0.8, 50).unwrap(),
            ConeIterate::Diverged { .. }
        ));
    }

    #[test]
    fn simplex_radii() {
        assert_eq!(simplex_radius(2).unwrap(), 0.5);
        assert!((simplex_radius(3).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let big = simplex_radius(200).unwrap();
        assert!(big < HALF_SQRT2 && HALF_SQRT2 - big < 1e-2);
    }

    #[test]
    fn polygon_radii() {
        let PolygonRadius::Radius { value } = star_polygon_radius(6, 1).unwrap() else {
            panic!()
        };
        assert!((value - 1.0).abs() < 1e-12);
        let PolygonRadius::Radius { value } = star_polygon_radius(5, 1).unwrap() else {
            panic!()
        };
        assert!((value - 0.850650808352).abs() < 1e-11);
        assert_eq!(star_polygon_radius(6, 2).unwrap(), PolygonRadius::Degenerate);
        assert!(star_polygon_radius(6, 3).is_err());
        assert!(star_polygon_radius(6, 0).is_err());
    }

    #[test]
    fn polygon_classes() {
        assert_eq!(classify_polygon_radius(7, 2).unwrap(), RadiusClass::Lt1);
        assert_eq!(classify_polygon_radius(6, 1).unwrap(), RadiusClass::Eq1);
        assert_eq!(classify_polygon_radius(7, 1).unwrap(), RadiusClass::Gt1);
        assert_eq!(classify_polygon_radius(8, 2).unwrap(), RadiusClass::Degenerate);
    }
}
