//! Lower and upper bounds on the probability that a point lies in a
//! spherical triangular hole, evaluated by nested Gauss-Legendre quadrature.
//!
//! Coordinates: the query point `N` is the north pole, its closest node
//! `tau0` sits at colatitude `theta0` on azimuth 0. A second node `tau1` at
//! `(theta1, phi1)` is the smallest-azimuth node of the region `A+` in the
//! half space of azimuths `(pi, 2pi)`, and a third node must fall in the
//! region `S-` on the other side. Both bounds integrate over `theta0`
//! (outer), `phi1` (middle) and `theta1` (inner); every region area is
//! itself a one-dimensional azimuth integral whose colatitude part is done
//! in closed form.
//!
//! All region areas depend only on the geometry `(R, R_s, R_c)`, not on the
//! intensity, so [`BoundTables`] stores them once and evaluates any number
//! of intensities cheaply.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rayon::prelude::*;

use crate::complex::rips_threshold;
use crate::config::NetworkConfig;
use crate::error::{domain, Error, Result};
use crate::geometry::{azimuthal_half_width, boundary_cos, cap_area, Vec3};
use crate::quadrature::Composite;

/// Simulated ceiling of the second-case probability for `R_c <= 3 R_s`.
pub const SECOND_CASE_CEILING: f64 = 0.0016;

/// Default Gauss-Legendre nodes per nesting level; results are refined at
/// twice this order to estimate the quadrature error.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// `R_c <= R arccos([3cos^2(R_s/R) - 1]/2)`: no triangular holes.
    Case1,
    /// Between the Rips threshold and `2 R_s`.
    Case2,
    /// `R_c > 2 R_s`.
    Case3,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::Case1 => "Case1",
            CaseLabel::Case2 => "Case2",
            CaseLabel::Case3 => "Case3",
        })
    }
}

/// The thresholds that separate the three cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseThresholds {
    pub rips: f64,
    pub double_sensing: f64,
}

pub fn case_thresholds(cfg: &NetworkConfig) -> Result<CaseThresholds> {
    Ok(CaseThresholds {
        rips: rips_threshold(cfg.sensing_radius, cfg.radius)?,
        double_sensing: 2.0 * cfg.sensing_radius,
    })
}

pub fn classify(cfg: &NetworkConfig) -> Result<CaseLabel> {
    cfg.validate()?;
    let t = case_thresholds(cfg)?;
    Ok(if cfg.comm_radius <= t.rips {
        CaseLabel::Case1
    } else if cfg.comm_radius <= t.double_sensing {
        CaseLabel::Case2
    } else {
        CaseLabel::Case3
    })
}

/// Largest colatitude of a closest node that can still bound a hole:
/// `arccos sqrt((1 + 2 cos psi) / 3)` for angular communication radius `psi`.
pub fn theta_0u(psi: f64) -> f64 {
    ((1.0 + 2.0 * psi.cos()) / 3.0).sqrt().acos()
}

/// Density of the closest node's colatitude at `theta0`:
/// `2 pi lambda R^2 sin(theta0) exp(-lambda |C(N, R theta0)|)`.
pub fn closest_node_density(theta0: f64, cfg: &NetworkConfig) -> f64 {
    let r2 = cfg.radius * cfg.radius;
    let cap = cap_area(theta0.clamp(0.0, PI), cfg.radius).unwrap_or(f64::NAN);
    TAU * cfg.intensity * r2 * theta0.sin() * (-cfg.intensity * cap).exp()
}

/// Where the closest node sits relative to the communication cap around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Situation {
    /// `R_c <= 2 R theta0`: the boundary of `C(tau0, R_c)` crosses the
    /// colatitude circle of `tau0` at `M1`, `M2`.
    Straddling,
    /// `R_c > 2 R theta0`: the whole cap `C(N, R theta0)` lies inside
    /// `C(tau0, R_c)`; the role of `M2` is taken by the point at azimuth pi.
    Enclosed,
}

/// Region limits for a closest node at colatitude `theta0`.
#[derive(Debug, Clone)]
pub struct HoleGeometry {
    theta0: f64,
    psi: f64,
    phi_m: f64,
    situation: Situation,
    radius: f64,
    cos0: f64,
    sin0: f64,
    cos_psi: f64,
    tau0: Vec3,
    /// Kinks of the `theta_1u` curve over the `phi1` range.
    phi_breaks: Vec<f64>,
}

impl HoleGeometry {
    /// `psi` is the angular communication radius, `radius` the sphere radius.
    pub fn new(theta0: f64, psi: f64, radius: f64) -> Result<Self> {
        if !(psi > 0.0 && psi < PI / 2.0) {
            return Err(domain(format!("angular communication radius {psi} outside (0, pi/2)")));
        }
        let top = theta_0u(psi);
        if !(theta0 > 0.0 && theta0 <= top * (1.0 + 1e-12)) {
            return Err(domain(format!(
                "closest-node colatitude {theta0} outside (0, {top}]"
            )));
        }
        let (situation, phi_m) = match azimuthal_half_width(theta0, psi) {
            Ok(w) => (Situation::Straddling, w),
            Err(Error::NoIntersection(_)) => (Situation::Enclosed, PI),
            Err(e) => return Err(e),
        };
        let (sin0, cos0) = theta0.sin_cos();
        let tau0 = Vec3::new(sin0, 0.0, cos0);
        let anchor = Vec3::new(sin0 * phi_m.cos(), sin0 * phi_m.sin(), cos0);
        let mut g = Self {
            theta0,
            psi,
            phi_m,
            situation,
            radius,
            cos0,
            sin0,
            cos_psi: psi.cos(),
            tau0,
            phi_breaks: Vec::new(),
        };
        let mut breaks = Vec::new();
        breaks.extend(boundary_crossings(tau0, anchor, g.cos_psi));
        breaks.extend(clamp_crossings(theta0, 0.0, psi));
        breaks.extend(clamp_crossings(theta0, phi_m, psi));
        let (lo, hi) = g.phi1_range();
        g.phi_breaks = with_turns(&breaks)
            .into_iter()
            .filter(|&x| x > lo && x < hi)
            .collect();
        g.phi_breaks.sort_by(f64::total_cmp);
        Ok(g)
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// Azimuth of `M2`, or pi in the enclosed situation.
    pub fn phi_m(&self) -> f64 {
        self.phi_m
    }

    pub fn situation(&self) -> Situation {
        self.situation
    }

    /// Azimuth range of `tau1`: `[2pi - phi_m, 2 phi_m]`.
    pub fn phi1_range(&self) -> (f64, f64) {
        (TAU - self.phi_m, 2.0 * self.phi_m)
    }

    pub fn phi1_breaks(&self) -> &[f64] {
        &self.phi_breaks
    }

    fn r2(&self) -> f64 {
        self.radius * self.radius
    }

    #[inline]
    fn cos_theta_1u_at(&self, cos_phi: f64, sin_phi: f64) -> f64 {
        let cos_dm = cos_phi * self.phi_m.cos() + sin_phi * self.phi_m.sin();
        let b1 = boundary_cos(self.cos0, self.sin0, cos_phi, self.cos_psi).unwrap_or(1.0);
        let b2 = boundary_cos(self.cos0, self.sin0, cos_dm, self.cos_psi).unwrap_or(1.0);
        b1.max(b2).max(self.cos_psi)
    }

    /// Boundary of `C(tau0, R_c)` at azimuth `phi`.
    pub fn theta_1u1(&self, phi: f64) -> f64 {
        boundary_cos(self.cos0, self.sin0, phi.cos(), self.cos_psi)
            .unwrap_or(1.0)
            .clamp(-1.0, 1.0)
            .acos()
    }

    /// Boundary of the cap of radius `R_c` around `M2` (or around the
    /// azimuth-pi point in the enclosed situation) at azimuth `phi`.
    pub fn theta_1u2(&self, phi: f64) -> f64 {
        boundary_cos(self.cos0, self.sin0, (phi - self.phi_m).cos(), self.cos_psi)
            .unwrap_or(1.0)
            .clamp(-1.0, 1.0)
            .acos()
    }

    /// Upper colatitude limit of `tau1`: the smaller of the two cap
    /// boundaries, clamped to `R_c / R`.
    pub fn theta_1u(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.cos_theta_1u_at(c, s).clamp(-1.0, 1.0).acos()
    }

    /// Lower azimuth limit of `S-` for `tau1 = (theta1, phi1)`.
    pub fn phi_2l(&self, theta1: f64, phi1: f64) -> f64 {
        let (s1, c1) = theta1.sin_cos();
        let x = (self.cos_psi - c1 * self.cos0) / (s1 * self.sin0);
        phi1 - x.clamp(-1.0, 1.0).acos()
    }

    /// Upper colatitude limit of `S-` at azimuth `phi2`.
    pub fn theta_2u(&self, theta1: f64, phi1: f64, phi2: f64) -> f64 {
        let (s1, c1) = theta1.sin_cos();
        let b0 = boundary_cos(self.cos0, self.sin0, phi2.cos(), self.cos_psi).unwrap_or(1.0);
        let b1 = boundary_cos(c1, s1, (phi2 - phi1).cos(), self.cos_psi).unwrap_or(1.0);
        b0.max(b1).max(self.cos_psi).clamp(-1.0, 1.0).acos()
    }

    /// `|S+(theta0, phi1)|`: area of `A+` with azimuth below `phi1`.
    pub fn s_plus(&self, phi1: f64, quad: &Composite, buf: &mut Vec<(f64, f64)>) -> f64 {
        let (lo, _) = self.phi1_range();
        if phi1 <= lo {
            return 0.0;
        }
        quad.nodes_into(lo, phi1, &self.phi_breaks, buf);
        let mut acc = 0.0;
        for &(phi, w) in buf.iter() {
            let (s, c) = phi.sin_cos();
            acc += w * (self.cos0 - self.cos_theta_1u_at(c, s)).max(0.0);
        }
        acc * self.r2()
    }

    /// `|S-(theta0, theta1, phi1)|`: where the third node must lie.
    pub fn s_minus(&self, theta1: f64, phi1: f64, quad: &Composite, buf: &mut Vec<(f64, f64)>) -> f64 {
        let lo = self.phi_2l(theta1, phi1).max(phi1 - PI).max(0.0);
        let hi = self.phi_m.min(PI);
        if hi <= lo {
            return 0.0;
        }
        let (s1, c1) = theta1.sin_cos();
        let (sp1, cp1) = phi1.sin_cos();
        let tau1 = Vec3::new(s1 * cp1, s1 * sp1, c1);
        let mut breaks: Vec<f64> = Vec::with_capacity(8);
        breaks.extend(boundary_crossings(self.tau0, tau1, self.cos_psi));
        breaks.extend(clamp_crossings(self.theta0, 0.0, self.psi));
        breaks.extend(clamp_crossings(theta1, phi1, self.psi));
        let breaks = with_turns(&breaks);
        quad.nodes_into(lo, hi, &breaks, buf);
        let mut acc = 0.0;
        for &(phi2, w) in buf.iter() {
            let (s2, c2) = phi2.sin_cos();
            let cos_d1 = c2 * cp1 + s2 * sp1;
            let b0 = boundary_cos(self.cos0, self.sin0, c2, self.cos_psi).unwrap_or(1.0);
            let b1 = boundary_cos(c1, s1, cos_d1, self.cos_psi).unwrap_or(1.0);
            acc += w * (self.cos0 - b0.max(b1).max(self.cos_psi)).max(0.0);
        }
        acc * self.r2()
    }
}

/// Azimuths of the two points where the boundaries of the equal-radius caps
/// centred at unit vectors `a` and `b` meet.
fn boundary_crossings(a: Vec3, b: Vec3, cos_psi: f64) -> Vec<f64> {
    let ab = a.dot(b);
    let cr = a.cross(b);
    let cr2 = cr.dot(cr);
    if cr2 < 1e-30 || ab <= -1.0 {
        return Vec::new();
    }
    let alpha = cos_psi / (1.0 + ab);
    let h2 = 1.0 - 2.0 * alpha * alpha * (1.0 + ab);
    if h2 < 0.0 {
        return Vec::new();
    }
    let beta = (h2 / cr2).sqrt();
    let base = (a + b) * alpha;
    [base + cr * beta, base - cr * beta]
        .iter()
        .filter(|p| p.x.hypot(p.y) > 1e-15)
        .map(|p| p.y.atan2(p.x))
        .collect()
}

/// Azimuths where the boundary of the cap centred at `(theta_c, phi_c)`
/// with radius `psi` meets the colatitude circle `theta = psi`.
fn clamp_crossings(theta_c: f64, phi_c: f64, psi: f64) -> Vec<f64> {
    let (sc, cc) = theta_c.sin_cos();
    let (sp, cp) = psi.sin_cos();
    if sc * sp == 0.0 {
        return Vec::new();
    }
    let x = cp * (1.0 - cc) / (sc * sp);
    if !(-1.0..=1.0).contains(&x) {
        return Vec::new();
    }
    let d = x.acos();
    vec![phi_c - d, phi_c + d]
}

/// Each azimuth shifted by -2pi, 0, 2pi so that interval filters see every
/// representative.
fn with_turns(az: &[f64]) -> Vec<f64> {
    az.iter()
        .flat_map(|&a| [a - TAU, a, a + TAU])
        .collect()
}

/// `|S+(theta0, phi1)|` for configuration `cfg`.
pub fn area_s_plus(theta0: f64, phi1: f64, cfg: &NetworkConfig, order: usize) -> Result<f64> {
    let g = HoleGeometry::new(theta0, cfg.comm_angle(), cfg.radius)?;
    let (lo, hi) = g.phi1_range();
    if phi1 < lo - 1e-12 || phi1 > hi + 1e-12 {
        return Err(domain(format!("phi1 = {phi1} outside [{lo}, {hi}]")));
    }
    Ok(g.s_plus(phi1, &Composite::new(order), &mut Vec::new()))
}

/// `|S-(theta0, theta1, phi1)|` for configuration `cfg`.
pub fn area_s_minus(
    theta0: f64,
    theta1: f64,
    phi1: f64,
    cfg: &NetworkConfig,
    order: usize,
) -> Result<f64> {
    let g = HoleGeometry::new(theta0, cfg.comm_angle(), cfg.radius)?;
    let (lo, hi) = g.phi1_range();
    if phi1 < lo - 1e-12 || phi1 > hi + 1e-12 {
        return Err(domain(format!("phi1 = {phi1} outside [{lo}, {hi}]")));
    }
    if !(theta1 >= theta0 && theta1 <= g.theta_1u(phi1) + 1e-12) {
        return Err(domain(format!("theta1 = {theta1} outside the integration domain")));
    }
    Ok(g.s_minus(theta1, phi1, &Composite::new(order), &mut Vec::new()))
}

#[derive(Debug, Clone, Copy)]
struct OuterNode {
    /// Quadrature weight times `sin(theta0)`.
    weight: f64,
    cap_area: f64,
    mid_start: usize,
    mid_end: usize,
}

#[derive(Debug, Clone, Copy)]
struct MidNode {
    weight: f64,
    s_plus: f64,
    /// `cos(theta0) - cos(theta_1u)`, the exact `theta1` integral of `sin`.
    extent: f64,
    /// `|S-(theta0, theta0, phi1)|`.
    s_minus_upper: f64,
    inner_start: usize,
    inner_end: usize,
}

#[derive(Debug, Clone, Copy)]
struct InnerNode {
    /// Quadrature weight times `sin(theta1)`.
    weight: f64,
    s_minus: f64,
}

/// Intensity-independent quadrature tables for one geometry.
#[derive(Debug, Clone)]
pub struct BoundTables {
    case: CaseLabel,
    radius: f64,
    order: usize,
    outer: Vec<OuterNode>,
    mid: Vec<MidNode>,
    inner: Vec<InnerNode>,
}

impl BoundTables {
    /// Builds the tables for the geometry of `cfg` (its intensity is ignored).
    pub fn build(cfg: &NetworkConfig, order: usize) -> Result<Self> {
        let case = classify(cfg)?;
        let mut tables = Self {
            case,
            radius: cfg.radius,
            order,
            outer: Vec::new(),
            mid: Vec::new(),
            inner: Vec::new(),
        };
        if case == CaseLabel::Case1 {
            return Ok(tables);
        }
        let psi = cfg.comm_angle();
        let lo = cfg.sensing_angle();
        let hi = theta_0u(psi);
        let quad = Composite::new(order);
        let mut outer_nodes = Vec::new();
        let split = if case == CaseLabel::Case3 { vec![0.5 * psi] } else { Vec::new() };
        quad.nodes_into(lo, hi, &split, &mut outer_nodes);

        let radius = cfg.radius;
        let columns: Vec<Result<(f64, f64, Vec<MidNode>, Vec<InnerNode>)>> = outer_nodes
            .par_iter()
            .map(|&(theta0, w0)| {
                let g = HoleGeometry::new(theta0, psi, radius)?;
                let mut mids = Vec::new();
                let mut inners = Vec::new();
                let mut phi_nodes = Vec::new();
                let mut theta_nodes = Vec::new();
                let mut buf = Vec::new();
                let (a, b) = g.phi1_range();
                quad.nodes_into(a, b, g.phi1_breaks(), &mut phi_nodes);
                for &(phi1, w1) in &phi_nodes {
                    let s_plus = g.s_plus(phi1, &quad, &mut buf);
                    let theta_1u = g.theta_1u(phi1);
                    let extent = (g.cos0 - theta_1u.cos()).max(0.0);
                    let s_minus_upper = g.s_minus(theta0, phi1, &quad, &mut buf);
                    let start = inners.len();
                    quad.nodes_into(theta0, theta_1u, &[], &mut theta_nodes);
                    for &(theta1, w2) in &theta_nodes {
                        inners.push(InnerNode {
                            weight: w2 * theta1.sin(),
                            s_minus: g.s_minus(theta1, phi1, &quad, &mut buf),
                        });
                    }
                    mids.push(MidNode {
                        weight: w1,
                        s_plus,
                        extent,
                        s_minus_upper,
                        inner_start: start,
                        inner_end: inners.len(),
                    });
                }
                Ok((w0 * theta0.sin(), cap_area(theta0, radius)?, mids, inners))
            })
            .collect();

        for col in columns {
            let (weight, cap, mids, inners) = col?;
            let mid_start = tables.mid.len();
            let inner_base = tables.inner.len();
            tables.inner.extend(inners);
            tables.mid.extend(mids.into_iter().map(|m| MidNode {
                inner_start: m.inner_start + inner_base,
                inner_end: m.inner_end + inner_base,
                ..m
            }));
            tables.outer.push(OuterNode {
                weight,
                cap_area: cap,
                mid_start,
                mid_end: tables.mid.len(),
            });
        }
        Ok(tables)
    }

    pub fn case(&self) -> CaseLabel {
        self.case
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// First-case lower and upper bound integrals at intensity `lambda`
    /// (no clipping, no second-case term).
    pub fn eval(&self, lambda: f64) -> (f64, f64) {
        if self.case == CaseLabel::Case1 || lambda <= 0.0 {
            return (0.0, 0.0);
        }
        let (mut lower, mut upper) = (0.0, 0.0);
        for o in &self.outer {
            let (mut lo_mid, mut up_mid) = (0.0, 0.0);
            for m in &self.mid[o.mid_start..o.mid_end] {
                let survive = (-lambda * m.s_plus).exp();
                let inner: f64 = self.inner[m.inner_start..m.inner_end]
                    .iter()
                    .map(|i| i.weight * -(-lambda * i.s_minus).exp_m1())
                    .sum();
                lo_mid += m.weight * survive * inner;
                up_mid += m.weight * survive * m.extent * -(-lambda * m.s_minus_upper).exp_m1();
            }
            let closest = o.weight * (-lambda * o.cap_area).exp();
            lower += closest * lo_mid;
            upper += closest * up_mid;
        }
        let r2 = self.radius * self.radius;
        let scale = TAU * lambda * lambda * r2 * r2;
        (scale * lower, scale * upper)
    }
}

/// Bounds for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub case: CaseLabel,
    pub lower: f64,
    pub upper: f64,
    /// Second-case probability included in `upper`.
    pub second_case_term: f64,
    /// Largest change of either bound between the base and refined orders.
    pub quad_error: f64,
}

/// Base and refined tables for one geometry.
#[derive(Debug, Clone)]
pub struct BoundEvaluator {
    coarse: BoundTables,
    fine: BoundTables,
    gamma: f64,
}

impl BoundEvaluator {
    /// Tables at `order` and `2 * order` nodes per level.
    pub fn new(cfg: &NetworkConfig, order: usize) -> Result<Self> {
        Ok(Self {
            coarse: BoundTables::build(cfg, order)?,
            fine: BoundTables::build(cfg, 2 * order)?,
            gamma: cfg.gamma(),
        })
    }

    pub fn case(&self) -> CaseLabel {
        self.fine.case
    }

    /// Bounds at intensity `lambda`; `second_case` is added to the upper
    /// bound outside Case 1.
    pub fn evaluate(&self, lambda: f64, second_case: f64) -> Result<BoundResult> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(domain(format!("intensity must be >= 0, got {lambda}")));
        }
        if !(0.0..=1.0).contains(&second_case) {
            return Err(domain(format!("second-case term {second_case} outside [0, 1]")));
        }
        // no nodes, or no Rips-only triangles: no holes at all
        if self.case() == CaseLabel::Case1 || lambda == 0.0 {
            return Ok(BoundResult {
                case: self.case(),
                lower: 0.0,
                upper: 0.0,
                second_case_term: 0.0,
                quad_error: 0.0,
            });
        }
        if self.gamma > 3.0 + 1e-12 {
            log::warn!(
                "gamma = {:.3} > 3: the second-case term is not validated in this regime",
                self.gamma
            );
        }
        let (lc, uc) = self.coarse.eval(lambda);
        let (lf, uf) = self.fine.eval(lambda);
        Ok(BoundResult {
            case: self.case(),
            lower: clip("lower", lf),
            upper: clip("upper", uf + second_case),
            second_case_term: second_case,
            quad_error: (lf - lc).abs().max((uf - uc).abs()),
        })
    }
}

fn clip(name: &str, p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        log::info!("{name} bound {p} clipped to [0, 1]");
    }
    p.clamp(0.0, 1.0)
}

/// Both bounds for `cfg` at the default order.
pub fn bounds(cfg: &NetworkConfig, second_case: f64) -> Result<BoundResult> {
    BoundEvaluator::new(cfg, DEFAULT_ORDER)?.evaluate(cfg.intensity, second_case)
}

pub fn lower_bound(cfg: &NetworkConfig) -> Result<f64> {
    bounds(cfg, 0.0).map(|b| b.lower)
}

pub fn upper_bound(cfg: &NetworkConfig, second_case: f64) -> Result<f64> {
    bounds(cfg, second_case).map(|b| b.upper)
}

/// Outcome of an intensity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityPlan {
    /// Smallest intensity meeting the target on the decreasing branch.
    pub intensity: f64,
    /// Upper bound on the hole proportion at that intensity.
    pub upper: f64,
    /// Intensity at which the upper bound peaks.
    pub peak_intensity: f64,
    pub peak_upper: f64,
}

/// Smallest intensity beyond which the upper bound on the hole proportion
/// stays at or below `1 - coverage_target`.
///
/// The upper bound rises from zero, peaks, then decays. If even the peak
/// satisfies the target every intensity does and 0 is returned; otherwise
/// the crossing on the decreasing branch is located by bisection.
pub fn required_intensity(
    cfg: &NetworkConfig,
    coverage_target: f64,
    second_case: f64,
    order: usize,
) -> Result<IntensityPlan> {
    if !(coverage_target > 0.0 && coverage_target < 1.0) {
        return Err(domain(format!(
            "coverage target {coverage_target} must lie strictly between 0 and 1"
        )));
    }
    let allowed = 1.0 - coverage_target;
    let eval = BoundEvaluator::new(cfg, order)?;
    if eval.case() == CaseLabel::Case1 {
        return Ok(IntensityPlan {
            intensity: 0.0,
            upper: 0.0,
            peak_intensity: 0.0,
            peak_upper: 0.0,
        });
    }
    let upper = |lambda: f64| eval.evaluate(lambda, second_case).map(|b| b.upper);
    // the upper bound never drops below the second-case term
    if second_case >= allowed && second_case > 0.0 {
        return Err(Error::Unreachable {
            required: allowed,
            achievable: second_case,
        });
    }

    // scan in steps of 1/40 of the intensity that puts one node in the
    // sensing cap until the bound has fallen well past its peak
    let unit = 1.0 / cap_area(cfg.sensing_angle(), cfg.radius)?;
    let step = unit / 40.0;
    let (mut peak_l, mut peak_u) = (0.0, 0.0);
    let mut scan = vec![(0.0, 0.0)];
    let mut k = 1;
    loop {
        let l = k as f64 * step;
        let u = upper(l)?;
        scan.push((l, u));
        if u > peak_u {
            peak_l = l;
            peak_u = u;
        }
        if l > 2.0 * peak_l && k >= 40 && (u <= allowed || u < 0.5 * peak_u) {
            break;
        }
        k += 1;
    }
    if peak_u <= allowed {
        return Ok(IntensityPlan {
            intensity: 0.0,
            upper: 0.0,
            peak_intensity: peak_l,
            peak_upper: peak_u,
        });
    }
    // bracket the last crossing: inside the scan if it ends below the
    // target, otherwise walk on geometrically
    let last_above = scan.iter().rposition(|&(_, u)| u > allowed).unwrap_or(0);
    let (mut prev, mut cur) = (scan[last_above], *scan.last().unwrap_or(&(0.0, 0.0)));
    if last_above + 1 < scan.len() {
        cur = scan[last_above + 1];
    }
    let mut best = cur.1;
    while cur.1 > allowed {
        if cur.0 > 1000.0 * unit {
            return Err(Error::Unreachable {
                required: allowed,
                achievable: best,
            });
        }
        prev = cur;
        let l = cur.0 * 1.25;
        cur = (l, upper(l)?);
        best = best.min(cur.1);
    }
    let (mut a, mut b) = (prev.0, cur.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if upper(m)? <= allowed {
            b = m;
        } else {
            a = m;
        }
        if b - a < 1e-9 * b {
            break;
        }
    }
    Ok(IntensityPlan {
        intensity: b,
        upper: upper(b)?,
        peak_intensity: peak_l,
        peak_upper: peak_u,
    })
}
