//! Two-dimensional Rips and Čech complexes of a node set.
//!
//! Distances are great-circle distances. A pair of sensing caps of radius
//! `R_s` meets iff the centres are within `2 R_s`; three caps share a point
//! iff the smallest cap enclosing the three centres has radius at most `R_s`,
//! and the centre of that enclosing cap is the common point.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::geometry::{min_enclosing_cap_units, Vec3};
use crate::process::NodeSet;

/// Relative slack applied at every inclusion threshold.
pub const THRESHOLD_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    Rips,
    Cech,
}

/// A face-closed simplicial complex of dimension at most 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex2 {
    pub vertex_ids: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
    pub triangles: BTreeSet<(usize, usize, usize)>,
    pub kind: ComplexKind,
    /// `R_c` for Rips, `R_s` for Čech.
    pub parameter: f64,
}

impl Complex2 {
    /// True iff every edge and triangle has all of its faces present.
    pub fn is_face_closed(&self) -> bool {
        let verts: BTreeSet<usize> = self.vertex_ids.iter().copied().collect();
        self.edges
            .iter()
            .all(|&(i, j)| i < j && verts.contains(&i) && verts.contains(&j))
            && self.triangles.iter().all(|&(i, j, k)| {
                i < j
                    && j < k
                    && self.edges.contains(&(i, j))
                    && self.edges.contains(&(j, k))
                    && self.edges.contains(&(i, k))
            })
    }

    /// Plain-text simplex list: one simplex per line as `dim id0 [id1 [id2]]`,
    /// vertices first, then edges, then triangles, each in sorted order.
    pub fn to_simplex_list(&self) -> String {
        let mut out = String::new();
        let mut verts = self.vertex_ids.clone();
        verts.sort_unstable();
        for v in verts {
            let _ = writeln!(out, "0 {v}");
        }
        for (i, j) in &self.edges {
            let _ = writeln!(out, "1 {i} {j}");
        }
        for (i, j, k) in &self.triangles {
            let _ = writeln!(out, "2 {i} {j} {k}");
        }
        out
    }

    /// Parses the output of [`Complex2::to_simplex_list`].
    pub fn from_simplex_list(text: &str, kind: ComplexKind, parameter: f64) -> Result<Self> {
        let mut c = Complex2 {
            vertex_ids: Vec::new(),
            edges: BTreeSet::new(),
            triangles: BTreeSet::new(),
            kind,
            parameter,
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(str::parse::<usize>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match nums.as_slice() {
                [0, v] => c.vertex_ids.push(*v),
                [1, i, j] if i < j => {
                    c.edges.insert((*i, *j));
                }
                [2, i, j, k] if i < j && j < k => {
                    c.triangles.insert((*i, *j, *k));
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: malformed simplex '{line}'",
                        lineno + 1
                    )))
                }
            }
        }
        c.vertex_ids.sort_unstable();
        c.vertex_ids.dedup();
        if !c.is_face_closed() {
            return Err(Error::Parse("simplex list is not closed under faces".into()));
        }
        Ok(c)
    }
}

fn within(d: f64, limit: f64) -> bool {
    d <= limit * (1.0 + THRESHOLD_RTOL)
}

fn pairwise_angles(units: &[Vec3]) -> Vec<Vec<f64>> {
    let n = units.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let a = units[i].angle_to(units[j]);
            d[i][j] = a;
            d[j][i] = a;
        }
    }
    d
}

fn edges_within(d: &[Vec<f64>], limit: f64) -> BTreeSet<(usize, usize)> {
    let n = d.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| within(d[i][j], limit))
        .collect()
}

fn cliques3(
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    mut keep: impl FnMut(usize, usize, usize) -> bool,
) -> BTreeSet<(usize, usize, usize)> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
    }
    let mut tris = BTreeSet::new();
    for i in 0..n {
        for (a, &j) in adj[i].iter().enumerate() {
            for &k in &adj[i][a + 1..] {
                if edges.contains(&(j, k)) && keep(i, j, k) {
                    tris.insert((i, j, k));
                }
            }
        }
    }
    tris
}

/// Rips complex: simplices are sets of nodes pairwise within `comm_radius`.
pub fn build_rips2(nodes: &NodeSet, comm_radius: f64, radius: f64) -> Complex2 {
    let units = nodes.units();
    let d = pairwise_angles(&units);
    let edges = edges_within(&d, comm_radius / radius);
    let triangles = cliques3(units.len(), &edges, |_, _, _| true);
    Complex2 {
        vertex_ids: (0..units.len()).collect(),
        edges,
        triangles,
        kind: ComplexKind::Rips,
        parameter: comm_radius,
    }
}

/// Čech complex of sensing caps with radius `sensing_radius`.
pub fn build_cech2(nodes: &NodeSet, sensing_radius: f64, radius: f64) -> Result<Complex2> {
    if !(sensing_radius > 0.0 && sensing_radius <= radius * PI / 8.0) {
        return Err(domain(format!(
            "sensing radius {sensing_radius} outside (0, R*pi/8]"
        )));
    }
    let units = nodes.units();
    let d = pairwise_angles(&units);
    let rs = sensing_radius / radius;
    let edges = edges_within(&d, 2.0 * rs);
    let triangles = cliques3(units.len(), &edges, |i, j, k| {
        within(enclosing_radius(&units, &d, i, j, k), rs)
    });
    Ok(Complex2 {
        vertex_ids: (0..units.len()).collect(),
        edges,
        triangles,
        kind: ComplexKind::Cech,
        parameter: sensing_radius,
    })
}

fn enclosing_radius(units: &[Vec3], d: &[Vec<f64>], i: usize, j: usize, k: usize) -> f64 {
    match min_enclosing_cap_units(&[units[i], units[j], units[k]]) {
        Ok((_, r)) => r,
        // coincident nodes: the two distinct ones span the cap
        Err(_) => 0.5 * d[i][j].max(d[j][k]).max(d[i][k]),
    }
}

/// True iff every simplex of `a` is a simplex of `b`.
pub fn check_inclusion(a: &Complex2, b: &Complex2) -> Result<bool> {
    let mut va = a.vertex_ids.clone();
    let mut vb = b.vertex_ids.clone();
    va.sort_unstable();
    vb.sort_unstable();
    if va != vb {
        return Err(Error::VertexMismatch {
            left: va.len(),
            right: vb.len(),
        });
    }
    Ok(a.edges.is_subset(&b.edges) && a.triangles.is_subset(&b.triangles))
}

/// Largest communication radius for which every Rips triangle is also a
/// Čech triangle: `R arccos([3 cos^2(R_s/R) - 1] / 2)`.
pub fn rips_threshold(sensing_radius: f64, radius: f64) -> Result<f64> {
    if !(sensing_radius > 0.0 && radius > 0.0 && sensing_radius < radius * PI / 8.0) {
        return Err(domain(format!(
            "rips threshold needs 0 < R_s < R*pi/8 (R_s = {sensing_radius}, R = {radius})"
        )));
    }
    let c = (sensing_radius / radius).cos();
    Ok(radius * ((3.0 * c * c - 1.0) / 2.0).acos())
}
