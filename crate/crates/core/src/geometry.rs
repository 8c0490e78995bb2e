//! Spherical geometry primitives on a sphere of arbitrary radius.
//!
//! Points carry only their angular position; the sphere radius comes from
//! the caller. Distances are computed in the `atan2(|p x q|, p . q)` form,
//! which stays accurate for nearly coincident and nearly antipodal pairs.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Error, Result};

/// Sign tolerance for triple products; values within it count as on the edge.
pub const ORIENTATION_EPS: f64 = 1e-14;

/// Angular tolerance used by cap membership tests.
pub const CAP_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// Angle between two unit vectors.
    #[inline]
    pub fn angle_to(self, o: Self) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }
}

impl Add for Vec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// A location on the sphere as (colatitude, azimuth) in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    theta: f64,
    phi: f64,
}

impl SphericalPoint {
    /// The north pole, `(0, 0)`.
    pub const POLE: SphericalPoint = SphericalPoint { theta: 0.0, phi: 0.0 };

    /// Builds a point; the azimuth is wrapped into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(domain(format!(
                "colatitude {theta} outside [0, pi] or non-finite azimuth {phi}"
            )));
        }
        Ok(Self {
            theta,
            phi: normalize_azimuth(phi),
        })
    }

    pub fn from_unit(v: Vec3) -> Self {
        let theta = v.x.hypot(v.y).atan2(v.z);
        let phi = if v.x == 0.0 && v.y == 0.0 {
            0.0
        } else {
            normalize_azimuth(v.y.atan2(v.x))
        };
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn to_unit(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }
}

/// Wraps an azimuth into `[0, 2pi)`.
pub fn normalize_azimuth(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Angular (unit-sphere) distance between two points.
pub fn angular_distance(p: &SphericalPoint, q: &SphericalPoint) -> f64 {
    p.to_unit().angle_to(q.to_unit())
}

/// Great-circle distance on a sphere of radius `radius`.
pub fn great_circle_distance(p: &SphericalPoint, q: &SphericalPoint, radius: f64) -> f64 {
    radius * angular_distance(p, q)
}

/// Area of a cap of angular radius `psi` on a sphere of radius `radius`.
pub fn cap_area(psi: f64, radius: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&psi) {
        return Err(domain(format!("cap angular radius {psi} outside [0, pi]")));
    }
    // 1 - cos(psi) written as 2 sin^2(psi/2) to keep precision for small caps
    let h = (0.5 * psi).sin();
    Ok(4.0 * PI * radius * radius * h * h)
}

/// Geodesic midpoint of the minor arc between `p` and `q`.
pub fn geodesic_midpoint(p: &SphericalPoint, q: &SphericalPoint) -> Result<SphericalPoint> {
    let m = (p.to_unit() + q.to_unit())
        .normalized()
        .filter(|m| m.norm() > 0.5)
        .ok_or_else(|| domain("midpoint of antipodal points is undefined"))?;
    Ok(SphericalPoint::from_unit(m))
}

/// A closed spherical cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    pub center: SphericalPoint,
    pub angular_radius: f64,
}

impl Cap {
    pub fn new(center: SphericalPoint, angular_radius: f64) -> Result<Self> {
        if !(angular_radius > 0.0 && angular_radius < PI) {
            return Err(domain(format!(
                "cap angular radius {angular_radius} outside (0, pi)"
            )));
        }
        Ok(Self {
            center,
            angular_radius,
        })
    }

    pub fn area(&self, radius: f64) -> f64 {
        cap_area(self.angular_radius, radius).expect("radius validated at construction")
    }

    /// Closed membership test with `CAP_EPS` angular slack.
    pub fn contains(&self, p: &SphericalPoint) -> bool {
        angular_distance(&self.center, p) <= self.angular_radius + CAP_EPS
    }
}

/// A spherical triangle with vertices stored in counter-clockwise order,
/// i.e. with a positive scalar triple product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTriangle {
    vertices: [SphericalPoint; 3],
    units: [Vec3; 3],
}

impl SphericalTriangle {
    pub fn new(v0: SphericalPoint, v1: SphericalPoint, v2: SphericalPoint) -> Result<Self> {
        let mut vertices = [v0, v1, v2];
        let mut units = [v0.to_unit(), v1.to_unit(), v2.to_unit()];
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let d = units[i].angle_to(units[j]);
            if !(d > ORIENTATION_EPS && d < PI - ORIENTATION_EPS) {
                return Err(domain(format!(
                    "triangle vertices {i} and {j} are coincident or antipodal"
                )));
            }
        }
        let det = units[0].dot(units[1].cross(units[2]));
        if det.abs() <= ORIENTATION_EPS {
            return Err(domain("triangle vertices lie on one great circle"));
        }
        if det < 0.0 {
            vertices.swap(1, 2);
            units.swap(1, 2);
        }
        Ok(Self { vertices, units })
    }

    pub fn vertices(&self) -> &[SphericalPoint; 3] {
        &self.vertices
    }

    pub fn units(&self) -> &[Vec3; 3] {
        &self.units
    }

    /// Closed containment: points on the edges count as inside.
    pub fn contains(&self, n: &SphericalPoint) -> bool {
        let [a, b, c] = self.units;
        contains_oriented(n.to_unit(), a, b, c)
    }
}

/// Containment of the unit vector `n` in the triangle `a, b, c` given in
/// positive orientation.
#[inline]
pub(crate) fn contains_oriented(n: Vec3, a: Vec3, b: Vec3, c: Vec3) -> bool {
    n.dot(a.cross(b)) >= -ORIENTATION_EPS
        && n.dot(b.cross(c)) >= -ORIENTATION_EPS
        && n.dot(c.cross(a)) >= -ORIENTATION_EPS
}

/// Containment of `n` in the triangle `a, b, c` in either orientation.
/// Degenerate (great-circle) triples never contain anything.
#[inline]
pub(crate) fn triangle_contains_unit(n: Vec3, a: Vec3, b: Vec3, c: Vec3) -> bool {
    let det = a.dot(b.cross(c));
    if det > ORIENTATION_EPS {
        contains_oriented(n, a, b, c)
    } else if det < -ORIENTATION_EPS {
        contains_oriented(n, a, c, b)
    } else {
        false
    }
}

pub fn point_in_spherical_triangle(n: &SphericalPoint, tri: &SphericalTriangle) -> bool {
    tri.contains(n)
}

/// Smallest cap containing three points of one open hemisphere.
///
/// The answer is either the diametral cap of the longest edge (when it
/// already holds the third point) or the circumcap through all three.
pub fn min_enclosing_cap(
    v0: &SphericalPoint,
    v1: &SphericalPoint,
    v2: &SphericalPoint,
) -> Result<Cap> {
    let u = [v0.to_unit(), v1.to_unit(), v2.to_unit()];
    min_enclosing_cap_units(&u).map(|(center, radius)| Cap {
        center: SphericalPoint::from_unit(center),
        angular_radius: radius,
    })
}

pub(crate) fn min_enclosing_cap_units(u: &[Vec3; 3]) -> Result<(Vec3, f64)> {
    let pairs = [(0usize, 1usize, 2usize), (1, 2, 0), (0, 2, 1)];
    let dists = pairs.map(|(i, j, _)| u[i].angle_to(u[j]));
    if dists
        .iter()
        .any(|&d| !(d > ORIENTATION_EPS && d < PI - ORIENTATION_EPS))
    {
        return Err(domain("enclosing cap of coincident or antipodal points"));
    }
    let longest = (0..3)
        .max_by(|&a, &b| dists[a].total_cmp(&dists[b]))
        .expect("three pairs");
    let (i, j, k) = pairs[longest];
    let half = 0.5 * dists[longest];
    let mid = (u[i] + u[j]).normalized().expect("not antipodal");
    if mid.angle_to(u[k]) <= half + ORIENTATION_EPS {
        return Ok((mid, half));
    }
    let mut normal = (u[1] - u[0])
        .cross(u[2] - u[0])
        .normalized()
        .ok_or_else(|| domain("collinear points have no circumcap"))?;
    if normal.dot(u[0]) < 0.0 {
        normal = -normal;
    }
    let radius = (0..3)
        .map(|m| normal.angle_to(u[m]))
        .fold(0.0_f64, f64::max);
    Ok((normal, radius))
}

/// Cosine of the larger colatitude at which the boundary of the cap
/// centred at `(theta_c, 0)` with angular radius `psi` crosses azimuth
/// offset `delta`. Arguments are pre-computed trigonometric values.
/// Returns `None` when the boundary misses that meridian.
#[inline]
pub(crate) fn boundary_cos(cos_c: f64, sin_c: f64, cos_delta: f64, cos_psi: f64) -> Option<f64> {
    let a2 = cos_c * cos_c + sin_c * sin_c * cos_delta * cos_delta;
    let disc = a2 - cos_psi * cos_psi;
    if disc < -1e-15 {
        return None;
    }
    let s = disc.max(0.0).sqrt();
    Some((cos_c * cos_psi - sin_c * cos_delta * s) / a2)
}

/// Larger colatitude at which the boundary of a cap centred at `(theta_c, 0)`
/// with angular radius `psi` crosses azimuth `delta`.
///
/// Solves `cos psi = cos theta_c cos t + sin theta_c sin t cos delta` for the
/// larger root `t`.
pub fn cap_boundary_colatitude(theta_c: f64, psi: f64, delta: f64) -> Result<f64> {
    let (sin_c, cos_c) = theta_c.sin_cos();
    let cos_d = delta.cos();
    let amp = (cos_c * cos_c + sin_c * sin_c * cos_d * cos_d).sqrt();
    let ratio = psi.cos() / amp;
    let miss = || {
        Error::NoIntersection(format!(
            "cap boundary (centre colatitude {theta_c}, radius {psi}) misses azimuth offset {delta}"
        ))
    };
    if ratio > 1.0 + 1e-15 {
        return Err(miss());
    }
    let t = (sin_c * cos_d).atan2(cos_c) + ratio.min(1.0).acos();
    // a negative root lies on the opposite half-meridian
    if t < 0.0 {
        return Err(miss());
    }
    Ok(t)
}

/// Azimuth at which a cap of radius `psi` centred at `(theta_c, 0)` meets
/// the colatitude circle through its own centre.
pub fn azimuthal_half_width(theta_c: f64, psi: f64) -> Result<f64> {
    if !(psi <= 2.0 * theta_c) || theta_c <= 0.0 {
        return Err(Error::NoIntersection(format!(
            "cap radius {psi} exceeds twice the centre colatitude {theta_c}"
        )));
    }
    let s2 = theta_c.sin().powi(2);
    let c = theta_c.cos();
    Ok(((psi.cos() - c * c) / s2).clamp(-1.0, 1.0).acos())
}
