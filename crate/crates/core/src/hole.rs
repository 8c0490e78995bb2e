//! Triangular-hole membership of a query point and its Monte Carlo
//! probability.
//!
//! A point lies in a spherical triangular hole iff no node senses it (every
//! node is farther than `R_s`) and some triple of nodes, pairwise within
//! `R_c`, spans a spherical triangle containing it. Only nodes within `R_c`
//! of the point can be vertices of such a triangle.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::NetworkConfig;
use crate::error::{domain, Result};
use crate::geometry::{triangle_contains_unit, SphericalPoint, Vec3};
use crate::process::{rng_for, trial_seed, CapSampler, NodeSet};

/// Trials handled per work item; fixed so the split never depends on the
/// worker count.
const BLOCK: u64 = 4096;

/// Monte Carlo estimate of a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
}

impl MCEstimate {
    pub fn from_counts(trials: u64, hits: u64) -> Self {
        let p = if trials == 0 {
            0.0
        } else {
            hits as f64 / trials as f64
        };
        let stderr = if trials == 0 {
            0.0
        } else {
            (p * (1.0 - p) / trials as f64).sqrt()
        };
        Self {
            trials,
            hits,
            p_hat: p,
            stderr,
            ci95: (
                (p - 1.96 * stderr).max(0.0),
                (p + 1.96 * stderr).min(1.0),
            ),
        }
    }
}

/// Both estimates from one pass over the same trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoleEstimates {
    /// Probability that the query point is in a triangular hole.
    pub hole: MCEstimate,
    /// Probability of a hole that the closest node does not bound.
    pub second_case: MCEstimate,
    /// Trials in which no node sensed the query point.
    pub uncovered: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct TrialOutcome {
    hole: bool,
    second_case: bool,
}

/// Classifies one configuration. `heights[i]` is the cosine of the angle
/// between `query` and `nodes[i]`; every node must already be within `R_c`
/// of the query point.
fn classify(
    query: Vec3,
    nodes: &[Vec3],
    heights: &[f64],
    cos_comm: f64,
    adjacency: &mut Vec<bool>,
) -> TrialOutcome {
    let n = nodes.len();
    if n < 3 {
        return TrialOutcome::default();
    }
    adjacency.clear();
    adjacency.resize(n * n, false);
    for i in 0..n {
        for j in i + 1..n {
            let near = nodes[i].dot(nodes[j]) >= cos_comm;
            adjacency[i * n + j] = near;
            adjacency[j * n + i] = near;
        }
    }
    // closest node; ties go to the lower index
    let mut closest = 0;
    for i in 1..n {
        if heights[i] > heights[closest] {
            closest = i;
        }
    }
    let adj = |i: usize, j: usize| adjacency[i * n + j];
    let encloses = |i: usize, j: usize, k: usize| {
        triangle_contains_unit(query, nodes[i], nodes[j], nodes[k])
    };

    let c = closest;
    for j in 0..n {
        if j == c || !adj(c, j) {
            continue;
        }
        for k in j + 1..n {
            if k != c && adj(c, k) && adj(j, k) && encloses(c, j, k) {
                return TrialOutcome {
                    hole: true,
                    second_case: false,
                };
            }
        }
    }
    for i in 0..n {
        if i == c {
            continue;
        }
        for j in i + 1..n {
            if j == c || !adj(i, j) {
                continue;
            }
            for k in j + 1..n {
                if k != c && adj(i, k) && adj(j, k) && encloses(i, j, k) {
                    return TrialOutcome {
                        hole: true,
                        second_case: true,
                    };
                }
            }
        }
    }
    TrialOutcome::default()
}

/// True iff `query` lies in a spherical triangular hole of `nodes`.
pub fn in_triangular_hole(query: &SphericalPoint, nodes: &NodeSet, cfg: &NetworkConfig) -> bool {
    let q = query.to_unit();
    let psi = cfg.comm_angle();
    let rs = cfg.sensing_angle();
    let mut near = Vec::new();
    let mut heights = Vec::new();
    for p in &nodes.nodes {
        let u = p.to_unit();
        let d = q.angle_to(u);
        if d <= rs {
            return false;
        }
        if d <= psi {
            near.push(u);
            heights.push(q.dot(u));
        }
    }
    classify(q, &near, &heights, psi.cos(), &mut Vec::new()).hole
}

/// Runs `trials` independent deployments on the cap `C(N, R_c)` around the
/// pole and records hole and second-case hits.
pub fn estimate(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<HoleEstimates> {
    cfg.validate()?;
    if trials == 0 {
        return Err(domain("at least one trial is required"));
    }
    let psi = cfg.comm_angle();
    if psi >= PI {
        return Err(domain("communication radius covers the whole sphere"));
    }
    let sampler = CapSampler::new(cfg.intensity, SphericalPoint::POLE, psi, cfg.radius);
    let cos_sense = cfg.sensing_angle().cos();
    let cos_comm = psi.cos();
    let query = Vec3::new(0.0, 0.0, 1.0);

    let blocks = trials.div_ceil(BLOCK);
    let (hole, second, uncovered) = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut heights = Vec::new();
            let mut points = Vec::new();
            let mut adjacency = Vec::new();
            let (mut hole, mut second, mut uncovered) = (0u64, 0u64, 0u64);
            for t in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                let mut rng = rng_for(trial_seed(seed, t));
                let n = sampler.count(&mut rng);
                sampler.heights(n, &mut rng, &mut heights);
                if heights.iter().any(|&h| h >= cos_sense) {
                    continue;
                }
                uncovered += 1;
                sampler.points(&heights, &mut rng, &mut points);
                let out = classify(query, &points, &heights, cos_comm, &mut adjacency);
                hole += u64::from(out.hole);
                second += u64::from(out.second_case);
            }
            (hole, second, uncovered)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    log::debug!(
        "lambda={} gamma={:.3}: {} of {} trials uncovered ({:.4}), {} holes",
        cfg.intensity,
        cfg.gamma(),
        uncovered,
        trials,
        uncovered as f64 / trials as f64,
        hole
    );
    Ok(HoleEstimates {
        hole: MCEstimate::from_counts(trials, hole),
        second_case: MCEstimate::from_counts(trials, second),
        uncovered,
    })
}

/// Monte Carlo estimate of the hole probability `p(lambda)`.
pub fn estimate_p(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<MCEstimate> {
    estimate(cfg, trials, seed).map(|e| e.hole)
}

/// Monte Carlo estimate of the probability that the query point is in a
/// hole although its closest node belongs to no enclosing Rips triangle.
pub fn estimate_second_case(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<MCEstimate> {
    estimate(cfg, trials, seed).map(|e| e.second_case)
}

/// Per-trial outcomes, in trial order. Used by tests that compare runs.
pub fn trial_outcomes(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<Vec<(bool, bool)>> {
    cfg.validate()?;
    let psi = cfg.comm_angle();
    let sampler = CapSampler::new(cfg.intensity, SphericalPoint::POLE, psi, cfg.radius);
    let cos_sense = cfg.sensing_angle().cos();
    let query = Vec3::new(0.0, 0.0, 1.0);
    let (mut heights, mut points, mut adjacency) = (Vec::new(), Vec::new(), Vec::new());
    Ok((0..trials)
        .map(|t| {
            let mut rng = rng_for(trial_seed(seed, t));
            let n = sampler.count(&mut rng);
            sampler.heights(n, &mut rng, &mut heights);
            if heights.iter().any(|&h| h >= cos_sense) {
                return (false, false);
            }
            sampler.points(&heights, &mut rng, &mut points);
            let o = classify(query, &points, &heights, psi.cos(), &mut adjacency);
            (o.hole, o.second_case)
        })
        .collect())
}
