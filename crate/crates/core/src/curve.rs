//! Floating-point checks for an explicit rational plane curve
//! `[u^d + u^{d−1}w + uw^{d−1} + w^d : u^d : w^d]` and for the cross-ratio of
//! the ramification points of `z ↦ z^{μ1}(z − 1)^{μ2}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::choose2;
use crate::connectivity::DisjointSet;

/// Derivative norms at or below this fail the immersion check.
pub const IMMERSION_THRESHOLD: f64 = 1e-6;

/// Parameter samples on the unit circle used by [`verify_example`].
pub const CIRCLE_SAMPLES: usize = 1000;

/// Tolerance of [`cross_ratio_check`].
pub const CROSS_RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("degree {0} is outside 3..=10")]
    Degree(u32),
    #[error("tolerance {0} is outside [1e-12, 1e-6]")]
    Tolerance(f64),
    #[error("the parameter (0, 0) has no image")]
    ZeroParameter,
    #[error("weights must be positive, got ({0}, {1})")]
    Weights(u32, u32),
    #[error("cross-ratio {value} differs from {expected} by {deviation:e}")]
    CrossRatio {
        value: Complex64,
        expected: f64,
        deviation: f64,
    },
}

fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// A point of the projective plane, scaled so that its coordinate of
/// largest modulus (the first one, on ties) equals 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    coords: [Complex64; 3],
}

impl ProjectivePoint {
    /// `None` when every coordinate vanishes.
    pub fn new(coords: [Complex64; 3]) -> Option<Self> {
        let mut best = 0;
        for i in 1..3 {
            if coords[i].norm() > coords[best].norm() {
                best = i;
            }
        }
        let scale = coords[best];
        if scale == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(ProjectivePoint {
            coords: coords.map(|c| c / scale),
        })
    }

    pub fn coords(&self) -> [Complex64; 3] {
        self.coords
    }

    /// Chordal distance `‖a ∧ b‖ / (‖a‖ ‖b‖)`, independent of scaling.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        let (a, b) = (self.coords, other.coords);
        let mut wedge = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
            }
        }
        let norm = |v: [Complex64; 3]| v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        wedge.sqrt() / (norm(a) * norm(b))
    }

    /// `(X/Z, Y/Z)`, or `None` on the line `Z = 0`.
    pub fn affine(&self) -> Option<(Complex64, Complex64)> {
        let [x, y, z] = self.coords;
        (z != Complex64::new(0.0, 0.0)).then(|| (x / z, y / z))
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        for c in &self.coords {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

/// The image of `[u : w]`.
pub fn rational_curve_eval(d: u32, u: Complex64, w: Complex64) -> Result<ProjectivePoint, CurveError> {
    let d = d as i32;
    let x = u.powi(d) + u.powi(d - 1) * w + u * w.powi(d - 1) + w.powi(d);
    ProjectivePoint::new([x, u.powi(d), w.powi(d)]).ok_or(CurveError::ZeroParameter)
}

/// Derivative of `u ↦ (X/Z, Y/Z)` at `[u : 1]`.
pub fn affine_derivative(d: u32, u: Complex64) -> [Complex64; 2] {
    let (df, d) = (f64::from(d), d as i32);
    [
        df * u.powi(d - 1) + (df - 1.0) * u.powi(d - 2) + 1.0,
        df * u.powi(d - 1),
    ]
}

/// Two parameters with the same image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodePair {
    #[serde(serialize_with = "serialize_complex")]
    pub u1: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub u2: Complex64,
    pub image: ProjectivePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveReport {
    pub d: u32,
    pub nodes: Vec<NodePair>,
    pub boundary: Vec<ProjectivePoint>,
    /// Smallest derivative norm seen, `+∞` before any sampling.
    pub immersion_margin: f64,
    /// Grouping problems, each with the offending distances.
    pub ambiguities: Vec<String>,
    pub ok: bool,
}

fn check_inputs(d: u32, tol: f64) -> Result<(), CurveError> {
    if !(3..=10).contains(&d) {
        return Err(CurveError::Degree(d));
    }
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(CurveError::Tolerance(tol));
    }
    Ok(())
}

/// Solutions of `u^{d−2} = −(1 + ε + … + ε^{d−2})` over the `d`-th roots of
/// unity `ε ≠ 1`, computed in polar form.
pub fn node_candidates(d: u32) -> Vec<Complex64> {
    let k = d - 2;
    let mut out = Vec::new();
    for i in 1..d {
        let eps = Complex64::from_polar(1.0, TAU * f64::from(i) / f64::from(d));
        let mut sum = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        for _ in 0..=k {
            sum += power;
            power *= eps;
        }
        let (r, theta) = (-sum).to_polar();
        for j in 0..k {
            let angle = (theta + TAU * f64::from(j)) / f64::from(k);
            out.push(Complex64::from_polar(r.powf(1.0 / f64::from(k)), angle));
        }
    }
    out
}

/// Groups the images of [`node_candidates`] by single linkage at `tol`.
///
/// Every group must have exactly two members, and distinct groups must be
/// more than `1000·tol` apart; violations are listed in `ambiguities`
/// instead of being resolved. `ok` requires `C(d−1, 2)` clean pairs.
pub fn find_nodes(d: u32, tol: f64) -> Result<CurveReport, CurveError> {
    check_inputs(d, tol)?;
    let params = node_candidates(d);
    let images: Vec<ProjectivePoint> = params
        .iter()
        .map(|&u| rational_curve_eval(d, u, Complex64::new(1.0, 0.0)))
        .collect::<Result<_, _>>()?;
    let n = images.len();
    let mut distance = vec![vec![0.0; n]; n];
    let mut dsu = DisjointSet::new(n);
    for i in 0..n {
        for j in i + 1..n {
            distance[i][j] = images[i].distance(&images[j]);
            distance[j][i] = distance[i][j];
            if distance[i][j] < tol {
                dsu.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group = vec![usize::MAX; n];
    for i in 0..n {
        let r = dsu.find(i);
        if root_to_group[r] == usize::MAX {
            root_to_group[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_to_group[r]].push(i);
    }
    let mut ambiguities = Vec::new();
    for (a, ga) in groups.iter().enumerate() {
        for gb in &groups[a + 1..] {
            let gap = ga
                .iter()
                .flat_map(|&i| gb.iter().map(move |&j| (i, j)))
                .map(|(i, j)| distance[i][j])
                .fold(f64::INFINITY, f64::min);
            if gap <= 1e3 * tol {
                ambiguities.push(format!(
                    "groups {ga:?} and {gb:?} are only {gap:e} apart (tolerance {tol:e})"
                ));
            }
        }
    }
    let mut nodes = Vec::new();
    for group in &groups {
        match group[..] {
            [i, j] => nodes.push(NodePair {
                u1: params[i],
                u2: params[j],
                image: images[i],
            }),
            _ => ambiguities.push(format!("group {group:?} has {} members", group.len())),
        }
    }
    let ok = ambiguities.is_empty() && nodes.len() as i64 == choose2(i64::from(d) - 1);
    Ok(CurveReport {
        d,
        nodes,
        boundary: Vec::new(),
        immersion_margin: f64::INFINITY,
        ambiguities,
        ok,
    })
}

/// Images meeting `Z = 0` among `[1 : 0]` and `samples` parameters
/// `[u : 1]` on the unit circle, merged at `tol`.
pub fn boundary_points(d: u32, tol: f64, samples: &[Complex64]) -> Vec<ProjectivePoint> {
    let one = Complex64::new(1.0, 0.0);
    let candidates = std::iter::once((one, Complex64::new(0.0, 0.0)))
        .chain(samples.iter().map(|&u| (u, one)));
    let mut out: Vec<ProjectivePoint> = Vec::new();
    for (u, w) in candidates {
        let Ok(p) = rational_curve_eval(d, u, w) else {
            continue;
        };
        if p.coords()[2].norm() < tol && out.iter().all(|q| q.distance(&p) >= tol) {
            out.push(p);
        }
    }
    out
}

/// [`find_nodes`] plus the boundary and immersion checks.
///
/// `seed` drives the unit-circle samples; the same seed reproduces the same
/// report.
pub fn verify_example(d: u32, tol: f64, seed: u64) -> Result<CurveReport, CurveError> {
    let mut report = find_nodes(d, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circle: Vec<Complex64> = (0..CIRCLE_SAMPLES)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
        .collect();
    let sweep: Vec<Complex64> = (0..10 * CIRCLE_SAMPLES)
        .map(|i| Complex64::from_polar(1.0, TAU * i as f64 / (10 * CIRCLE_SAMPLES) as f64))
        .collect();
    report.boundary = boundary_points(d, tol, &sweep);
    let preimages = report.nodes.iter().flat_map(|n| [n.u1, n.u2]);
    report.immersion_margin = preimages
        .chain(circle)
        .map(|u| {
            let [a, b] = affine_derivative(d, u);
            (a.norm_sqr() + b.norm_sqr()).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    let expected = ProjectivePoint::new([1.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0)))
        .expect("nonzero point");
    let boundary_ok = report.boundary.len() == 1 && report.boundary[0].distance(&expected) < tol;
    report.ok = report.ok && boundary_ok && report.immersion_margin > IMMERSION_THRESHOLD;
    Ok(report)
}

/// A point `[x : y]` of the projective line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePoint {
    pub x: Complex64,
    pub y: Complex64,
}

impl LinePoint {
    pub fn finite(z: Complex64) -> Self {
        LinePoint {
            x: z,
            y: Complex64::new(1.0, 0.0),
        }
    }

    pub fn infinity() -> Self {
        LinePoint {
            x: Complex64::new(1.0, 0.0),
            y: Complex64::new(0.0, 0.0),
        }
    }
}

fn det(a: LinePoint, b: LinePoint) -> Complex64 {
    a.x * b.y - a.y * b.x
}

/// `(z1, z2; z3, z4) = (z1 − z3)(z2 − z4) / ((z1 − z4)(z2 − z3))`, written
/// with 2×2 determinants so that points at infinity need no special case.
pub fn cross_ratio(z: [LinePoint; 4]) -> Complex64 {
    det(z[0], z[2]) * det(z[1], z[3]) / (det(z[0], z[3]) * det(z[1], z[2]))
}

/// `z ↦ (az + b) / (cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn apply(&self, p: LinePoint) -> LinePoint {
        LinePoint {
            x: self.a * p.x + self.b * p.y,
            y: self.c * p.x + self.d * p.y,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Divides by `z − root` (coefficients low to high), returning the quotient
/// and remainder.
fn deflate(p: &[i128], root: i128) -> (Vec<i128>, i128) {
    let mut quotient = vec![0; p.len() - 1];
    let mut carry = 0;
    for i in (0..p.len()).rev() {
        let value = p[i] + carry * root;
        if i == 0 {
            return (quotient, value);
        }
        quotient[i - 1] = value;
        carry = value;
    }
    unreachable!("loop returns at i = 0")
}

/// The critical point of `z^{mu1}(z − 1)^{mu2}` other than `0` and `1`,
/// found by expanding the derivative and dividing out the known roots.
pub fn extra_critical_point(mu1: u32, mu2: u32) -> f64 {
    let mut f = vec![1i128];
    for _ in 0..mu1 {
        f = poly_mul(&f, &[0, 1]);
    }
    for _ in 0..mu2 {
        f = poly_mul(&f, &[-1, 1]);
    }
    let mut derivative: Vec<i128> = f.iter().enumerate().skip(1).map(|(i, &c)| i as i128 * c).collect();
    for (root, times) in [(0, mu1 - 1), (1, mu2 - 1)] {
        for _ in 0..times {
            let (q, r) = deflate(&derivative, root);
            assert_eq!(r, 0, "{root} is a root of the derivative");
            derivative = q;
        }
    }
    assert_eq!(derivative.len(), 2, "one critical point remains");
    -(derivative[0] as f64) / derivative[1] as f64
}

/// Cross-ratio `(∞, z*; 0, 1)` of the ramification points of
/// `z^{mu1}(z − 1)^{mu2}`, checked against `−mu2/mu1` to within
/// [`CROSS_RATIO_TOL`].
pub fn cross_ratio_check(mu1: u32, mu2: u32) -> Result<Complex64, CurveError> {
    if mu1 == 0 || mu2 == 0 {
        return Err(CurveError::Weights(mu1, mu2));
    }
    let z_star = extra_critical_point(mu1, mu2);
    let value = cross_ratio([
        LinePoint::infinity(),
        LinePoint::finite(Complex64::new(z_star, 0.0)),
        LinePoint::finite(Complex64::new(0.0, 0.0)),
        LinePoint::finite(Complex64::new(1.0, 0.0)),
    ]);
    let expected = -f64::from(mu2) / f64::from(mu1);
    let deviation = (value - expected).norm();
    if deviation > CROSS_RATIO_TOL {
        return Err(CurveError::CrossRatio {
            value,
            expected,
            deviation,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(x: f64, y: f64, z: f64) -> ProjectivePoint {
        ProjectivePoint::new([c(x, 0.0), c(y, 0.0), c(z, 0.0)]).unwrap()
    }

    #[test]
    fn evaluation() {
        for d in 3..8 {
            let p = rational_curve_eval(d, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
            assert!(p.distance(&point(1.0, 1.0, 0.0)) < 1e-15);
            let p = rational_curve_eval(d, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
            assert!(p.distance(&point(1.0, 0.0, 1.0)) < 1e-15);
        }
        let eps = Complex64::from_polar(1.0, TAU / 3.0);
        let (x, y) = rational_curve_eval(3, eps, c(1.0, 0.0)).unwrap().affine().unwrap();
        assert!((x - 1.0).norm() < 1e-12 && (y - 1.0).norm() < 1e-12);
        assert_eq!(
            rational_curve_eval(3, c(0.0, 0.0), c(0.0, 0.0)),
            Err(CurveError::ZeroParameter)
        );
    }

    #[test]
    fn distance_ignores_scale() {
        let a = ProjectivePoint::new([c(1.0, 2.0), c(0.5, 0.0), c(0.0, -1.0)]).unwrap();
        let k = c(-3.0, 0.7);
        let b = ProjectivePoint::new(a.coords().map(|x| x * k)).unwrap();
        assert!(a.distance(&b) < 1e-15);
        assert!(point(1.0, 0.0, 0.0).distance(&point(0.0, 1.0, 0.0)) > 0.9);
        assert!(ProjectivePoint::new([c(0.0, 0.0); 3]).is_none());
    }

    #[test]
    fn cubic_has_its_node_at_one_one() {
        let report = find_nodes(3, 1e-9).unwrap();
        assert!(report.ok, "{:?}", report.ambiguities);
        assert_eq!(report.nodes.len(), 1);
        let (x, y) = report.nodes[0].image.affine().unwrap();
        assert!((x - 1.0).norm() < 1e-9 && (y - 1.0).norm() < 1e-9);
    }

    #[test]
    fn candidates_match_the_simplified_condition() {
        for d in 3..=8 {
            let candidates = node_candidates(d);
            assert_eq!(candidates.len() as u32, (d - 1) * (d - 2));
            for u in candidates {
                let eps = u.powi(d as i32 - 2);
                assert!((eps.powi(d as i32) - 1.0).norm() < 1e-9);
                assert!((eps - 1.0).norm() > 1e-6);
            }
        }
    }

    #[test]
    fn input_ranges() {
        assert_eq!(find_nodes(2, 1e-9), Err(CurveError::Degree(2)));
        assert_eq!(find_nodes(11, 1e-9), Err(CurveError::Degree(11)));
        assert_eq!(find_nodes(4, 1e-3), Err(CurveError::Tolerance(1e-3)));
    }

    #[test]
    fn verify_small_degrees() {
        for d in [3, 5] {
            let report = verify_example(d, 1e-9, 0).unwrap();
            assert!(report.ok);
            assert_eq!(report.nodes.len() as i64, choose2(i64::from(d) - 1));
            assert_eq!(report.boundary.len(), 1);
        }
        assert_eq!(verify_example(4, 1e-9, 7).unwrap(), verify_example(4, 1e-9, 7).unwrap());
    }

    #[test]
    fn critical_points() {
        assert_eq!(extra_critical_point(1, 1), 0.5);
        assert!((extra_critical_point(2, 1) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(extra_critical_point(3, 3), 0.5);
    }

    #[test]
    fn cross_ratios() {
        assert!((cross_ratio_check(1, 1).unwrap() - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((cross_ratio_check(2, 1).unwrap() - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((cross_ratio_check(3, 3).unwrap() - c(-1.0, 0.0)).norm() < 1e-12);
        assert_eq!(cross_ratio_check(0, 1), Err(CurveError::Weights(0, 1)));
    }

    #[test]
    fn json_shape() {
        let report = verify_example(3, 1e-9, 0).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["d"], 3);
        assert_eq!(v["nodes"][0]["u1"].as_array().unwrap().len(), 2);
        assert_eq!(v["nodes"][0]["image"].as_array().unwrap().len(), 3);
        assert_eq!(v["ok"], true);
    }
}
