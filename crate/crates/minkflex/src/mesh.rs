//! Oriented triangulated surfaces and their realizations in R³₁.
//!
//! Surfaces are stored as oriented vertex triples; edges are derived, never
//! stored independently. Validation covers the manifold conditions (edge
//! multiplicity, vertex links), global orientation consistency, connectivity,
//! and the sphere/disk classification through the Euler characteristic.

use crate::minkowski::{LineM, Vec3M, TAU_NULL};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Tolerance for metric checks on squared lengths (side equality, nullity).
pub const TAU_METRIC: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("non-manifold complex: {0}")]
    NonManifold(String),
    #[error("complex is not connected")]
    Disconnected,
    #[error("triangle orientations are not globally consistent")]
    NonOrientable,
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("triangle {0} has repeated vertices")]
    DegenerateTriangle(usize),
    #[error("realized triangle {0} has linearly dependent edge vectors")]
    DegenerateRealization(usize),
    #[error("coordinate count {got} does not match vertex count {want}")]
    CoordCountMismatch { got: usize, want: usize },
    #[error("edge ({0}, {1}) is not an interior edge of exactly two faces")]
    BadEdge(usize, usize),
    #[error("surface is not closed")]
    NotClosed,
    #[error("boundary is not a quadrilateral")]
    BoundaryNotQuad,
    #[error("quadrilateral violates reflection-symmetry condition {0}")]
    Lemma2Violation(u8),
}

/// Classification of a validated surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceClass {
    Sphere,
    Disk,
    Other,
}

/// Outcome of the combinatorial validation of a surface.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub class: SurfaceClass,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub euler_characteristic: i64,
    pub boundary_loops: usize,
    /// One representative boundary cycle per loop, in walk order.
    pub boundary_cycles: Vec<Vec<usize>>,
}

/// Abstract oriented triangulated surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplicialSurface {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    #[serde(skip)]
    edges: Vec<[usize; 2]>,
    #[serde(skip)]
    edge_index: BTreeMap<[usize; 2], usize>,
    #[serde(skip)]
    edge_triangles: Vec<Vec<usize>>,
}

impl PartialEq for SimplicialSurface {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.triangles == other.triangles
    }
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

impl SimplicialSurface {
    pub fn new(vertex_count: usize, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        for (ti, t) in triangles.iter().enumerate() {
            for &v in t {
                if v >= vertex_count {
                    return Err(MeshError::VertexOutOfRange(v));
                }
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(MeshError::DegenerateTriangle(ti));
            }
        }
        let mut edge_index = BTreeMap::new();
        for t in &triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edge_index.entry(sorted_pair(a, b)).or_insert(0usize);
            }
        }
        let edges: Vec<[usize; 2]> = edge_index.keys().copied().collect();
        for (i, e) in edges.iter().enumerate() {
            *edge_index.get_mut(e).unwrap() = i;
        }
        let mut edge_triangles = vec![Vec::new(); edges.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edge_triangles[edge_index[&sorted_pair(a, b)]].push(ti);
            }
        }
        Ok(Self {
            vertex_count,
            triangles,
            edges,
            edge_index,
            edge_triangles,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&sorted_pair(a, b)).copied()
    }

    pub fn triangles_of_edge(&self, edge: usize) -> &[usize] {
        &self.edge_triangles[edge]
    }

    /// Rebuild the derived edge tables (after deserialization).
    pub fn rederive(self) -> Result<Self, MeshError> {
        Self::new(self.vertex_count, self.triangles)
    }

    pub fn validate(&self) -> Result<ValidationReport, MeshError> {
        // Edge multiplicity and orientation consistency.
        let mut directed = BTreeSet::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if !directed.insert((a, b)) {
                    return Err(MeshError::NonOrientable);
                }
            }
        }
        for (ei, ts) in self.edge_triangles.iter().enumerate() {
            if ts.len() > 2 {
                let [a, b] = self.edges[ei];
                return Err(MeshError::NonManifold(format!(
                    "edge ({a}, {b}) belongs to {} triangles",
                    ts.len()
                )));
            }
        }

        // Vertex links: arcs a -> b from each incident triangle must chain
        // into a single cycle (interior vertex) or a single path (boundary).
        let mut used_vertices = vec![false; self.vertex_count];
        let mut link_next: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); self.vertex_count];
        let mut link_indeg: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); self.vertex_count];
        for t in &self.triangles {
            for (v, a, b) in [
                (t[0], t[1], t[2]),
                (t[1], t[2], t[0]),
                (t[2], t[0], t[1]),
            ] {
                used_vertices[v] = true;
                link_next[v].insert(a, b);
                *link_indeg[v].entry(b).or_insert(0) += 1;
            }
        }
        for v in 0..self.vertex_count {
            if !used_vertices[v] {
                return Err(MeshError::Disconnected);
            }
            let nodes: BTreeSet<usize> = link_next[v]
                .iter()
                .flat_map(|(&a, &b)| [a, b])
                .collect();
            // Walk from a source node (path case) or anywhere (cycle case).
            let start = nodes
                .iter()
                .copied()
                .find(|n| !link_indeg[v].contains_key(n))
                .or_else(|| nodes.iter().next().copied());
            let Some(start) = start else { continue };
            let mut visited = BTreeSet::new();
            let mut cur = start;
            visited.insert(cur);
            while let Some(&next) = link_next[v].get(&cur) {
                if next == start {
                    break;
                }
                if !visited.insert(next) {
                    return Err(MeshError::NonManifold(format!(
                        "link of vertex {v} is not a simple cycle or arc"
                    )));
                }
                cur = next;
            }
            if visited.len() != nodes.len() {
                return Err(MeshError::NonManifold(format!(
                    "link of vertex {v} has several components"
                )));
            }
        }

        // Connectivity across shared edges.
        if !self.triangles.is_empty() {
            let mut seen = vec![false; self.triangles.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(ti) = stack.pop() {
                let t = self.triangles[ti];
                for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                    for &tj in &self.edge_triangles[self.edge_index[&sorted_pair(a, b)]] {
                        if !seen[tj] {
                            seen[tj] = true;
                            stack.push(tj);
                        }
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(MeshError::Disconnected);
            }
        }

        // Boundary loops.
        let boundary_edges: Vec<usize> = (0..self.edges.len())
            .filter(|&e| self.edge_triangles[e].len() == 1)
            .collect();
        let mut boundary_cycles = Vec::new();
        if !boundary_edges.is_empty() {
            let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &e in &boundary_edges {
                let [a, b] = self.edges[e];
                adjacency.entry(a).or_default().push(b);
                adjacency.entry(b).or_default().push(a);
            }
            for neighbors in adjacency.values() {
                if neighbors.len() != 2 {
                    return Err(MeshError::NonManifold(
                        "boundary is not a disjoint union of cycles".into(),
                    ));
                }
            }
            let mut remaining: BTreeSet<usize> = adjacency.keys().copied().collect();
            while let Some(&start) = remaining.iter().next() {
                let mut cycle = vec![start];
                remaining.remove(&start);
                let mut prev = start;
                let mut cur = adjacency[&start][0];
                while cur != start {
                    cycle.push(cur);
                    remaining.remove(&cur);
                    let next = if adjacency[&cur][0] == prev {
                        adjacency[&cur][1]
                    } else {
                        adjacency[&cur][0]
                    };
                    prev = cur;
                    cur = next;
                }
                boundary_cycles.push(cycle);
            }
        }

        let v = self.vertex_count as i64;
        let e = self.edges.len() as i64;
        let f = self.triangles.len() as i64;
        let euler = v - e + f;
        let class = if boundary_cycles.is_empty() && euler == 2 {
            SurfaceClass::Sphere
        } else if boundary_cycles.len() == 1 && euler == 1 {
            SurfaceClass::Disk
        } else {
            SurfaceClass::Other
        };
        Ok(ValidationReport {
            class,
            vertex_count: self.vertex_count,
            edge_count: self.edges.len(),
            triangle_count: self.triangles.len(),
            euler_characteristic: euler,
            boundary_loops: boundary_cycles.len(),
            boundary_cycles,
        })
    }
}

/// Realization of a surface in R³₁.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    pub surface: SimplicialSurface,
    pub coords: Vec<Vec3M>,
}

impl Polyhedron {
    pub fn new(surface: SimplicialSurface, coords: Vec<Vec3M>) -> Result<Self, MeshError> {
        if coords.len() != surface.vertex_count() {
            return Err(MeshError::CoordCountMismatch {
                got: coords.len(),
                want: surface.vertex_count(),
            });
        }
        let p = Self { surface, coords };
        for (ti, t) in p.surface.triangles().iter().enumerate() {
            let u = p.coords[t[1]] - p.coords[t[0]];
            let w = p.coords[t[2]] - p.coords[t[0]];
            let scale = u.eu_norm() * w.eu_norm();
            if u.eu_cross(w).eu_norm() <= 1e-12 * scale.max(1e-300) {
                return Err(MeshError::DegenerateRealization(ti));
            }
        }
        Ok(p)
    }

    pub fn edge_vector(&self, edge: usize) -> Vec3M {
        let [a, b] = self.surface.edges()[edge];
        self.coords[b] - self.coords[a]
    }

    /// Squared Minkowski lengths of all edges, in edge order.
    pub fn edge_squared_lengths(&self) -> Vec<f64> {
        (0..self.surface.edges().len())
            .map(|e| self.edge_vector(e).norm_squared())
            .collect()
    }

    pub fn face_points(&self, face: usize) -> [Vec3M; 3] {
        let t = self.surface.triangles()[face];
        [self.coords[t[0]], self.coords[t[1]], self.coords[t[2]]]
    }
}

/// Remove a pair of faces sharing the given edge, producing a disk whose
/// boundary is the 4-cycle around the removed pair.
pub fn remove_adjacent_face_pair(
    p: &Polyhedron,
    shared_edge: [usize; 2],
) -> Result<Polyhedron, MeshError> {
    let edge = p
        .surface
        .edge_id(shared_edge[0], shared_edge[1])
        .ok_or(MeshError::BadEdge(shared_edge[0], shared_edge[1]))?;
    let incident = p.surface.triangles_of_edge(edge);
    if incident.len() != 2 {
        return Err(MeshError::BadEdge(shared_edge[0], shared_edge[1]));
    }
    let drop: BTreeSet<usize> = incident.iter().copied().collect();
    let triangles: Vec<[usize; 3]> = p
        .surface
        .triangles()
        .iter()
        .enumerate()
        .filter(|(ti, _)| !drop.contains(ti))
        .map(|(_, t)| *t)
        .collect();
    let surface = SimplicialSurface::new(p.surface.vertex_count(), triangles)?;
    Polyhedron::new(surface, p.coords.clone())
}

/// Report of the strict-convexity test on the eu image.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub convex: bool,
    pub reasons: Vec<String>,
}

/// True when the eu image is the boundary of its convex hull with every
/// vertex extreme and no flat dihedral angle along any interior edge.
pub fn strict_convexity_check(p: &Polyhedron) -> ConvexityReport {
    let mut reasons = Vec::new();
    match p.surface.validate() {
        Ok(report) if report.class == SurfaceClass::Sphere => {}
        Ok(report) => reasons.push(format!("surface class is {:?}, not Sphere", report.class)),
        Err(e) => reasons.push(format!("validation failed: {e}")),
    }

    let diameter = p
        .coords
        .iter()
        .flat_map(|a| p.coords.iter().map(move |b| (*a - *b).eu_norm()))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let margin = 1e-9 * diameter;

    if reasons.is_empty() {
        // Every face's plane must strictly support the vertex set on the
        // inner side of the outward (orientation-derived) Euclidean normal.
        for (ti, t) in p.surface.triangles().iter().enumerate() {
            let [a, b, c] = [p.coords[t[0]], p.coords[t[1]], p.coords[t[2]]];
            let n = (b - a).eu_cross(c - a);
            let n_len = n.eu_norm();
            for (vi, &q) in p.coords.iter().enumerate() {
                if t.contains(&vi) {
                    continue;
                }
                let side = eu_dot(q - a, n) / n_len;
                if side > -margin {
                    reasons.push(format!(
                        "vertex {vi} is not strictly inside the plane of face {ti} (signed distance {side:.3e})"
                    ));
                }
            }
        }

        // No straight dihedral angle: adjacent outward Euclidean normals may
        // not be (anti)parallel within the flatness tolerance.
        let tau_flat = 1e-8;
        for (ei, e) in p.surface.edges().iter().enumerate() {
            let ts = p.surface.triangles_of_edge(ei);
            if ts.len() != 2 {
                continue;
            }
            let normal = |ti: usize| {
                let [a, b, c] = p.face_points(ti);
                let n = (b - a).eu_cross(c - a);
                n * (1.0 / n.eu_norm())
            };
            let cosang = eu_dot(normal(ts[0]), normal(ts[1]));
            if cosang > 1.0 - tau_flat {
                reasons.push(format!(
                    "edge ({}, {}) has a flat Euclidean dihedral angle",
                    e[0], e[1]
                ));
            }
        }
    }

    ConvexityReport {
        convex: reasons.is_empty(),
        reasons,
    }
}

fn eu_dot(a: Vec3M, b: Vec3M) -> f64 {
    a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3
}

/// Spatial quadrilateral eligible for the reflection-symmetry construction:
/// opposite sides pairwise equal, both diagonals and the axis through the
/// diagonal midpoints non-null, midpoints distinct.
#[derive(Debug, Clone)]
pub struct BoundaryQuad {
    pub indices: [usize; 4],
    pub points: [Vec3M; 4],
    /// Midpoint of the diagonal q1q3.
    pub q5: Vec3M,
    /// Midpoint of the diagonal q2q4.
    pub q6: Vec3M,
}

impl BoundaryQuad {
    pub fn from_points(indices: [usize; 4], points: [Vec3M; 4]) -> Result<Self, MeshError> {
        let [q1, q2, q3, q4] = points;
        let side = |a: Vec3M, b: Vec3M| (a - b).norm_squared();
        // Condition 1: opposite sides pairwise equal.
        if (side(q1, q2) - side(q3, q4)).abs() > TAU_METRIC
            || (side(q2, q3) - side(q4, q1)).abs() > TAU_METRIC
        {
            return Err(MeshError::Lemma2Violation(1));
        }
        // Condition 2: diagonals off the nullcone.
        if side(q1, q3).abs() <= TAU_METRIC || side(q2, q4).abs() <= TAU_METRIC {
            return Err(MeshError::Lemma2Violation(2));
        }
        let q5 = (q1 + q3) * 0.5;
        let q6 = (q2 + q4) * 0.5;
        // Condition 3: distinct diagonal midpoints.
        if (q5 - q6).eu_norm() <= 1e-9 {
            return Err(MeshError::Lemma2Violation(3));
        }
        // Condition 4: the axis through the midpoints off the nullcone.
        if (q6 - q5).norm_squared().abs() <= TAU_METRIC {
            return Err(MeshError::Lemma2Violation(4));
        }
        Ok(Self {
            indices,
            points,
            q5,
            q6,
        })
    }

    /// Axis of symmetry through the diagonal midpoints.
    pub fn axis(&self) -> LineM {
        // Condition 4 guarantees a non-null direction.
        LineM::through(self.q5, self.q6).expect("axis direction checked non-null")
    }
}

/// Extract the boundary quadrilateral of a disk with four boundary vertices.
pub fn boundary_quad(q: &Polyhedron) -> Result<BoundaryQuad, MeshError> {
    let report = q.surface.validate()?;
    if report.class != SurfaceClass::Disk {
        return Err(MeshError::BoundaryNotQuad);
    }
    let cycle = &report.boundary_cycles[0];
    if cycle.len() != 4 {
        return Err(MeshError::BoundaryNotQuad);
    }
    // Normalize the cyclic order: start at the smallest index, walk toward
    // its smaller neighbor, so the output is deterministic.
    let pos = cycle
        .iter()
        .position(|&v| v == *cycle.iter().min().unwrap())
        .unwrap();
    let at = |i: usize| cycle[(pos + i) % 4];
    let indices = if at(1) < at(3) {
        [at(0), at(1), at(2), at(3)]
    } else {
        [at(0), at(3), at(2), at(1)]
    };
    let points = indices.map(|v| q.coords[v]);
    BoundaryQuad::from_points(indices, points)
}

/// Random spatial quadrilateral satisfying all four reflection-symmetry
/// conditions, for property tests.
///
/// The fourth vertex starts from the parallelogram completion (which meets
/// the side constraints exactly but violates condition 3), steps away along
/// the constraint-curve tangent, and is projected back by Gauss-Newton.
pub fn random_lemma2_quad<R: rand::Rng>(rng: &mut R) -> BoundaryQuad {
    use nalgebra::{Matrix2, Vector2};
    for _ in 0..200 {
        let mut pt = || Vec3M::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let q1 = pt();
        let q2 = pt();
        let q3 = pt();
        let l1 = (q1 - q2).norm_squared();
        let l2 = (q2 - q3).norm_squared();

        let start = q1 + q3 - q2;
        let grad1 = (start - q3).lower() * 2.0;
        let grad2 = (start - q1).lower() * 2.0;
        let tangent = grad1.eu_cross(grad2);
        if tangent.eu_norm() < 1e-9 {
            continue;
        }
        let step = rng.gen_range(0.3..1.2) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut q4 = start + tangent * (step / tangent.eu_norm());

        // Gauss-Newton projection onto the two side-length constraints.
        let mut converged = false;
        for _ in 0..60 {
            let r1 = (q4 - q3).norm_squared() - l1;
            let r2 = (q4 - q1).norm_squared() - l2;
            if r1.abs().max(r2.abs()) < 1e-13 {
                converged = true;
                break;
            }
            let g1 = (q4 - q3).lower() * 2.0;
            let g2 = (q4 - q1).lower() * 2.0;
            let jjt = Matrix2::new(
                eu_dot(g1, g1),
                eu_dot(g1, g2),
                eu_dot(g2, g1),
                eu_dot(g2, g2),
            );
            let Some(inv) = jjt.try_inverse() else { break };
            let lambda = inv * Vector2::new(-r1, -r2);
            q4 = q4 + g1 * lambda[0] + g2 * lambda[1];
        }
        if !converged {
            continue;
        }
        if let Ok(quad) = BoundaryQuad::from_points([0, 1, 2, 3], [q1, q2, q3, q4]) {
            return quad;
        }
    }
    panic!("failed to generate a symmetric quadrilateral in 200 attempts");
}

/// Closed octahedral test polyhedron: vertices near ±e₁, ±e₂, ±h·e₃ with
/// outward-oriented faces.
pub fn octahedron(height: f64) -> Polyhedron {
    let coords = vec![
        Vec3M::new(1.0, 0.0, 0.0),
        Vec3M::new(-1.0, 0.0, 0.0),
        Vec3M::new(0.0, 1.0, 0.0),
        Vec3M::new(0.0, -1.0, 0.0),
        Vec3M::new(0.0, 0.0, height),
        Vec3M::new(0.0, 0.0, -height),
    ];
    let triangles = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    let surface = SimplicialSurface::new(6, triangles).expect("octahedron combinatorics");
    Polyhedron::new(surface, coords).expect("octahedron realization")
}
