//! Seeded homogeneous Poisson point processes on the sphere and on caps.
//!
//! Every sample is a pure function of its seed. Monte Carlo drivers derive
//! one seed per trial with [`trial_seed`], so the outcome of a run does not
//! depend on how trials are spread over workers.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::geometry::{Cap, SphericalPoint, Vec3};

/// Generator used for every draw in the crate.
pub type TrialRng = ChaCha8Rng;

/// Seed for trial `trial` of a run seeded with `seed`.
#[inline]
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial
}

pub fn rng_for(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Sphere,
    Cap(Cap),
}

/// A realisation of the process.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub nodes: Vec<SphericalPoint>,
    pub region: Region,
    pub intensity: f64,
    pub seed: u64,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Builds a node set from explicit locations (no sampling).
    pub fn from_points(nodes: Vec<SphericalPoint>) -> Self {
        Self {
            nodes,
            region: Region::Sphere,
            intensity: 0.0,
            seed: 0,
        }
    }

    pub fn units(&self) -> Vec<Vec3> {
        self.nodes.iter().map(SphericalPoint::to_unit).collect()
    }
}

/// Uniform sampler over a cap, drawn in two passes: all heights along the
/// cap axis first, then all azimuths. Callers that only need the heights
/// (e.g. a nearest-node test at the cap centre) may stop after the first pass.
#[derive(Debug, Clone)]
pub(crate) struct CapSampler {
    mean: f64,
    /// `1 - cos(psi)`; 2 for the whole sphere.
    depth: f64,
    frame: [Vec3; 3],
}

impl CapSampler {
    pub(crate) fn new(intensity: f64, center: SphericalPoint, angular_radius: f64, radius: f64) -> Self {
        let h = (0.5 * angular_radius).sin();
        let depth = 2.0 * h * h;
        let (st, ct) = center.theta().sin_cos();
        let (sp, cp) = center.phi().sin_cos();
        let frame = [
            Vec3::new(ct * cp, ct * sp, -st),
            Vec3::new(-sp, cp, 0.0),
            Vec3::new(st * cp, st * sp, ct),
        ];
        Self {
            mean: intensity * TAU * radius * radius * depth,
            depth,
            frame,
        }
    }

    pub(crate) fn sphere(intensity: f64, radius: f64) -> Self {
        Self::new(intensity, SphericalPoint::POLE, PI, radius)
    }

    pub(crate) fn count(&self, rng: &mut TrialRng) -> usize {
        if self.mean <= 0.0 {
            return 0;
        }
        let dist = Poisson::new(self.mean).expect("positive finite mean");
        let n: f64 = dist.sample(rng);
        n as usize
    }

    /// Heights `cos(angle from the cap centre)`, uniform on `[cos psi, 1]`.
    pub(crate) fn heights(&self, n: usize, rng: &mut TrialRng, out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..n).map(|_| 1.0 - self.depth * rng.random::<f64>()));
    }

    pub(crate) fn points(&self, heights: &[f64], rng: &mut TrialRng, out: &mut Vec<Vec3>) {
        out.clear();
        let [e1, e2, e3] = self.frame;
        for &z in heights {
            let az = TAU * rng.random::<f64>();
            let (s, c) = az.sin_cos();
            let r = (1.0 - z * z).max(0.0).sqrt();
            out.push(e1 * (r * c) + e2 * (r * s) + e3 * z);
        }
    }

    fn sample(&self, rng: &mut TrialRng) -> Vec<Vec3> {
        let n = self.count(rng);
        let mut h = Vec::with_capacity(n);
        let mut pts = Vec::with_capacity(n);
        self.heights(n, rng, &mut h);
        self.points(&h, rng, &mut pts);
        pts
    }
}

/// Poisson process of intensity `intensity` (nodes per unit area) on `cap`.
pub fn sample_cap_poisson(intensity: f64, cap: &Cap, radius: f64, seed: u64) -> NodeSet {
    let sampler = CapSampler::new(intensity, cap.center, cap.angular_radius, radius);
    let mut rng = rng_for(seed);
    NodeSet {
        nodes: sampler
            .sample(&mut rng)
            .into_iter()
            .map(SphericalPoint::from_unit)
            .collect(),
        region: Region::Cap(*cap),
        intensity,
        seed,
    }
}

/// Poisson process of intensity `intensity` on the whole sphere.
pub fn sample_sphere_poisson(intensity: f64, radius: f64, seed: u64) -> NodeSet {
    let sampler = CapSampler::sphere(intensity, radius);
    let mut rng = rng_for(seed);
    NodeSet {
        nodes: sampler
            .sample(&mut rng)
            .into_iter()
            .map(SphericalPoint::from_unit)
            .collect(),
        region: Region::Sphere,
        intensity,
        seed,
    }
}
