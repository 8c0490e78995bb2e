//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphole::geometry::{angular_distance, SphericalPoint, Vec3};

pub fn pt(theta: f64, phi: f64) -> SphericalPoint {
    SphericalPoint::new(theta, phi).unwrap()
}

/// Azimuth offset `d` in `[0, pi]` at which the point `(theta, phi_c - d)`
/// is at angular distance `psi` from `center`, by bisection. The distance
/// is assumed nondecreasing in `d`; saturates at 0 and pi.
pub fn offset_at_distance(theta: f64, phi_c: f64, center: &SphericalPoint, psi: f64) -> f64 {
    let dist = |d: f64| angular_distance(&pt(theta, phi_c - d), center);
    if dist(0.0) > psi {
        return 0.0;
    }
    if dist(PI) <= psi {
        return PI;
    }
    let (mut a, mut b) = (0.0, PI);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if dist(m) <= psi {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

/// Azimuth of `M2`: where the boundary of the cap of radius `psi` around
/// `(theta0, 0)` meets the colatitude circle `theta0`; pi if it never does.
pub fn phi_m_oracle(theta0: f64, psi: f64) -> f64 {
    let d = offset_at_distance(theta0, 0.0, &pt(theta0, 0.0), psi);
    if d >= PI { PI } else { d }
}

/// Rejection-sampled area of `{x : pred(x)}` inside the band of colatitude
/// `[t0, t1]` and azimuth `[p0, p1]` on a sphere of radius `r`.
/// Returns the estimate and its standard error.
pub fn rejection_area(
    (t0, t1): (f64, f64),
    (p0, p1): (f64, f64),
    r: f64,
    samples: u64,
    seed: u64,
    pred: impl Fn(&SphericalPoint) -> bool,
) -> (f64, f64) {
    // shrink the box to the grid cells where a scan finds the region,
    // padded by two cells plus 10% of the extent. Grid rows include both
    // band edges, so regions that reach down to the colatitude `t0` are
    // seen at every azimuth where they are non-empty.
    let n: usize = 600;
    let (ct0, ct1) = (t0.cos(), t1.cos());
    let (mut ilo, mut ihi, mut jlo, mut jhi) = (n, 0, n, 0);
    for i in 0..=n {
        let z = ct1 + (ct0 - ct1) * i as f64 / n as f64;
        for j in 0..=n {
            let phi = p0 + (p1 - p0) * j as f64 / n as f64;
            if pred(&pt(z.clamp(-1.0, 1.0).acos(), phi.rem_euclid(TAU))) {
                ilo = ilo.min(i);
                ihi = ihi.max(i);
                jlo = jlo.min(j);
                jhi = jhi.max(j);
            }
        }
    }
    if ilo > ihi {
        return (0.0, 0.0);
    }
    let pad_i = 2 + (ihi - ilo) / 10;
    let pad_j = 2 + (jhi - jlo) / 10;
    let c1 = ct1 + (ct0 - ct1) * ilo.saturating_sub(pad_i) as f64 / n as f64;
    let c0 = ct1 + (ct0 - ct1) * (ihi + pad_i).min(n) as f64 / n as f64;
    let (p0, p1) = (
        p0 + (p1 - p0) * jlo.saturating_sub(pad_j) as f64 / n as f64,
        p0 + (p1 - p0) * (jhi + pad_j).min(n) as f64 / n as f64,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let box_area = r * r * (p1 - p0) * (c0 - c1);
    let mut hits = 0u64;
    for _ in 0..samples {
        let z = c1 + (c0 - c1) * rng.random::<f64>();
        let phi = p0 + (p1 - p0) * rng.random::<f64>();
        let p = pt(z.clamp(-1.0, 1.0).acos(), phi.rem_euclid(TAU));
        if pred(&p) {
            hits += 1;
        }
    }
    let f = hits as f64 / samples as f64;
    (box_area * f, box_area * (f * (1.0 - f) / samples as f64).sqrt())
}

/// Membership test for the region whose area is `|S+(theta0, phi1)|`.
pub fn s_plus_region(theta0: f64, psi: f64, phi1: f64) -> impl Fn(&SphericalPoint) -> bool {
    let phi_m = phi_m_oracle(theta0, psi);
    let tau0 = pt(theta0, 0.0);
    let m = pt(theta0, phi_m.rem_euclid(TAU));
    move |x| {
        // the range [2pi - phi_m, phi1] may run past 2pi
        let mut phi = x.phi();
        if phi < TAU - phi_m {
            phi += TAU;
        }
        x.theta() >= theta0
            && x.theta() <= psi
            && phi <= phi1
            && angular_distance(x, &tau0) <= psi
            && angular_distance(x, &m) <= psi
    }
}

/// Membership test for the region whose area is `|S-(theta0, theta1, phi1)|`.
pub fn s_minus_region(
    theta0: f64,
    psi: f64,
    theta1: f64,
    phi1: f64,
) -> impl Fn(&SphericalPoint) -> bool {
    let phi_m = phi_m_oracle(theta0, psi);
    let tau0 = pt(theta0, 0.0);
    let tau1 = pt(theta1, phi1.rem_euclid(TAU));
    let lo = (phi1 - offset_at_distance(theta0, phi1, &tau1, psi))
        .max(phi1 - PI)
        .max(0.0);
    move |x| {
        let phi = x.phi();
        x.theta() >= theta0
            && x.theta() <= psi
            && phi >= lo
            && phi <= phi_m
            && angular_distance(x, &tau0) <= psi
            && angular_distance(x, &tau1) <= psi
    }
}

/// Whether caps of angular radius `r < pi/2` around `centers` share a point.
/// A non-empty intersection either contains one of the centres' caps whole
/// (so that centre is common) or has a corner where two boundaries cross.
pub fn caps_share_point(centers: &[Vec3], r: f64) -> bool {
    let inside = |x: Vec3| centers.iter().all(|&c| x.angle_to(c) <= r + 1e-13);
    if centers.iter().any(|&c| inside(c)) {
        return true;
    }
    let cr = r.cos();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let (a, b) = (centers[i], centers[j]);
            let ab = a.dot(b);
            let n = a.cross(b);
            let n2 = n.dot(n);
            if n2 < 1e-300 {
                continue;
            }
            let alpha = cr / (1.0 + ab);
            let h2 = 1.0 - 2.0 * alpha * alpha * (1.0 + ab);
            if h2 < 0.0 {
                continue;
            }
            let beta = (h2 / n2).sqrt();
            let base = (a + b) * alpha;
            if inside(base + n * beta) || inside(base - n * beta) {
                return true;
            }
        }
    }
    false
}

/// Smallest `r` for which [`caps_share_point`] holds, by bisection.
pub fn min_common_radius(centers: &[Vec3]) -> f64 {
    let (mut lo, mut hi) = (0.0, PI / 2.0 - 1e-9);
    for _ in 0..100 {
        let m = 0.5 * (lo + hi);
        if caps_share_point(centers, m) {
            hi = m;
        } else {
            lo = m;
        }
    }
    hi
}
