//! Dihedral angles and total mean curvature of polyhedra in R³₁.
//!
//! For a closed oriented polyhedron with non-null edges and nondegenerate
//! faces, every edge g carries the nonoriented angle θ(g) between the two
//! outward unit face normals, and
//!
//!   M(P) = ½ Σ_g θ(g) · ε(g) · ‖g‖.
//!
//! Outward normals follow the global orientation: the sign is fixed so the
//! bordered determinant with the face's oriented edge pair is positive.
//! Along a flex, dθ/dt at an edge equals (dm₁/dt, n₁) + (dm₂/dt, n₂) with
//! n_j the inward unit conormals, which the finite-difference checker below
//! verifies on solved samples.

use crate::angle::{nonoriented_angle_3d, right_normal, AngleError};
use crate::mesh::{Polyhedron, SimplicialSurface};
use crate::minkowski::{Vec2M, Vec3M, TAU_NULL};
use std::f64::consts::PI;
use thiserror::Error;

/// Angles within this distance of 0 or π are treated as flat for the
/// derivative identity, which excludes collinear normals.
pub const TAU_FLAT: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("edge {edge} (vertices {v0}, {v1}) lies on the nullcone")]
    NullEdge { edge: usize, v0: usize, v1: usize },
    #[error("face {face} carries a degenerate induced metric")]
    DegenerateFacePlane { face: usize },
    #[error("conormal of face {face} along edge {edge} is null")]
    NullConormal { face: usize, edge: usize },
    #[error("edge {0} is not interior to exactly two faces")]
    NotInteriorEdge(usize),
    #[error("total mean curvature requires a closed orientable surface")]
    NotClosed,
    #[error(transparent)]
    Angle(#[from] AngleError),
}

/// Outward unit normal of a face, |m| = 1 or i.
///
/// The direction solves (m,u) = (m,w) = 0 for the face's edge vectors; the
/// side is chosen so that det[u, w, m] > 0 in coordinates.
pub fn outward_unit_normal(p: &Polyhedron, face: usize) -> Result<Vec3M, CurvatureError> {
    let [a, b, c] = p.face_points(face);
    let cross = (b - a).eu_cross(c - a);
    let s = cross.norm_squared();
    let scale = cross.eu_norm();
    if s.abs() <= TAU_NULL * (scale * scale).max(1e-300) {
        return Err(CurvatureError::DegenerateFacePlane { face });
    }
    let eps = if s > 0.0 { 1.0 } else { -1.0 };
    Ok(cross.lower() * (eps / s.abs().sqrt()))
}

/// Outward normal plus the inward unit conormals along the three edges.
#[derive(Debug, Clone)]
pub struct FaceFrame {
    pub face: usize,
    pub normal: Vec3M,
    /// Conormal per face edge, keyed by the opposite-vertex position:
    /// entry i is perpendicular to the edge not containing vertex i.
    pub conormals: [Vec3M; 3],
}

pub fn face_frame(p: &Polyhedron, face: usize) -> Result<FaceFrame, CurvatureError> {
    let normal = outward_unit_normal(p, face)?;
    let t = p.surface.triangles()[face];
    let pts = p.face_points(face);
    let mut conormals = [Vec3M::default(); 3];
    for i in 0..3 {
        let a = pts[(i + 1) % 3];
        let b = pts[(i + 2) % 3];
        let r = pts[i];
        let g = b - a;
        let gs = g.norm_squared();
        if gs.abs() <= TAU_NULL {
            let edge = p
                .surface
                .edge_id(t[(i + 1) % 3], t[(i + 2) % 3])
                .expect("face edge");
            return Err(CurvatureError::NullEdge {
                edge,
                v0: t[(i + 1) % 3],
                v1: t[(i + 2) % 3],
            });
        }
        let v = (r - a) - g * ((r - a).dot(g) / gs);
        let vs = v.norm_squared();
        if vs.abs() <= TAU_NULL {
            let edge = p
                .surface
                .edge_id(t[(i + 1) % 3], t[(i + 2) % 3])
                .expect("face edge");
            return Err(CurvatureError::NullConormal { face, edge });
        }
        conormals[i] = v * (1.0 / vs.abs().sqrt());
    }
    Ok(FaceFrame {
        face,
        normal,
        conormals,
    })
}

/// Inward unit conormal of `face` along `edge`.
pub fn inward_conormal(p: &Polyhedron, face: usize, edge: usize) -> Result<Vec3M, CurvatureError> {
    let frame = face_frame(p, face)?;
    let t = p.surface.triangles()[face];
    let [ea, eb] = p.surface.edges()[edge];
    for i in 0..3 {
        if t[i] != ea && t[i] != eb {
            return Ok(frame.conormals[i]);
        }
    }
    Err(CurvatureError::NotInteriorEdge(edge))
}

/// Nonoriented dihedral angle θ(g) between the outward unit normals of the
/// two faces sharing the edge.
pub fn dihedral_angle(p: &Polyhedron, edge: usize) -> Result<f64, CurvatureError> {
    let [v0, v1] = p.surface.edges()[edge];
    let g = p.edge_vector(edge);
    if g.norm_squared().abs() <= TAU_NULL {
        return Err(CurvatureError::NullEdge { edge, v0, v1 });
    }
    let faces = p.surface.triangles_of_edge(edge);
    if faces.len() != 2 {
        return Err(CurvatureError::NotInteriorEdge(edge));
    }
    let m1 = outward_unit_normal(p, faces[0])?;
    let m2 = outward_unit_normal(p, faces[1])?;
    Ok(nonoriented_angle_3d(m1, m2)?)
}

/// Per-edge contribution to the total mean curvature.
#[derive(Debug, Clone)]
pub struct EdgeTerm {
    pub edge: usize,
    pub vertices: [usize; 2],
    pub theta: f64,
    pub epsilon: i32,
    pub norm: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone)]
pub struct MeanCurvatureReport {
    pub terms: Vec<EdgeTerm>,
    pub total: f64,
}

/// Total mean curvature M(P) = ½ Σ θ(g) ε(g) ‖g‖ over all edges.
pub fn total_mean_curvature(p: &Polyhedron) -> Result<MeanCurvatureReport, CurvatureError> {
    let report = p.surface.validate().map_err(|_| CurvatureError::NotClosed)?;
    if report.boundary_loops != 0 {
        return Err(CurvatureError::NotClosed);
    }
    let mut terms = Vec::with_capacity(p.surface.edges().len());
    let mut total = 0.0;
    for (ei, &[a, b]) in p.surface.edges().iter().enumerate() {
        let theta = dihedral_angle(p, ei)?;
        let (epsilon, norm) = p.edge_vector(ei).epsilon_norm();
        let contribution = theta * f64::from(epsilon) * norm;
        total += 0.5 * contribution;
        terms.push(EdgeTerm {
            edge: ei,
            vertices: [a, b],
            theta,
            epsilon,
            norm,
            contribution,
        });
    }
    Ok(MeanCurvatureReport { terms, total })
}

/// Classical total mean curvature of the eu image: ½ Σ |g|·θ_E(g) with θ_E
/// the Euclidean angle between the outward unit Euclidean normals. The
/// signed-metric definition reduces to this pattern in Euclidean space.
pub fn euclidean_total_mean_curvature(p: &Polyhedron) -> Result<f64, CurvatureError> {
    let report = p.surface.validate().map_err(|_| CurvatureError::NotClosed)?;
    if report.boundary_loops != 0 {
        return Err(CurvatureError::NotClosed);
    }
    let eu_normal = |face: usize| {
        let [a, b, c] = p.face_points(face);
        let n = (b - a).eu_cross(c - a);
        n * (1.0 / n.eu_norm())
    };
    let eu_dot = |a: Vec3M, b: Vec3M| a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
    let mut total = 0.0;
    for ei in 0..p.surface.edges().len() {
        let faces = p.surface.triangles_of_edge(ei);
        if faces.len() != 2 {
            return Err(CurvatureError::NotInteriorEdge(ei));
        }
        let theta = eu_dot(eu_normal(faces[0]), eu_normal(faces[1]))
            .clamp(-1.0, 1.0)
            .acos();
        total += 0.5 * theta * p.edge_vector(ei).eu_norm();
    }
    Ok(total)
}

/// Σ ε(g)‖g‖·(right normal of g) over a closed polygon of the plane; the
/// sum telescopes to (Σy, Σx) and vanishes when the edge vectors close up.
pub fn edge_normal_sum(edges: &[Vec2M]) -> Result<Vec2M, CurvatureError> {
    let mut sum = Vec2M::default();
    for &g in edges {
        let n = right_normal(g)?;
        let (eps, norm) = g.epsilon_norm();
        sum = sum + n * (f64::from(eps) * norm);
    }
    Ok(sum)
}

#[derive(Debug, Clone)]
pub struct CurvatureSeries {
    pub rows: Vec<(f64, f64)>,
    pub max_deviation: f64,
    /// (sample index, edge) pairs where θ was within TAU_FLAT of 0 or π.
    pub flat_edges: Vec<(usize, usize)>,
}

/// Total mean curvature per sample along a family of realizations, with the
/// deviation from the first sample and flat-edge occurrences.
pub fn mean_curvature_along_path(
    surface: &SimplicialSurface,
    samples: &[(f64, Vec<Vec3M>)],
) -> Result<CurvatureSeries, CurvatureError> {
    let mut rows = Vec::with_capacity(samples.len());
    let mut flat_edges = Vec::new();
    for (si, (t, coords)) in samples.iter().enumerate() {
        let p = Polyhedron::new(surface.clone(), coords.clone())
            .map_err(|_| CurvatureError::NotClosed)?;
        let report = total_mean_curvature(&p)?;
        for term in &report.terms {
            if term.theta < TAU_FLAT || (PI - term.theta).abs() < TAU_FLAT {
                flat_edges.push((si, term.edge));
            }
        }
        rows.push((*t, report.total));
    }
    let m0 = rows.first().map(|r| r.1).unwrap_or(0.0);
    let max_deviation = rows
        .iter()
        .map(|r| (r.1 - m0).abs())
        .fold(0.0f64, f64::max);
    Ok(CurvatureSeries {
        rows,
        max_deviation,
        flat_edges,
    })
}

/// Both sides of the dihedral-rate identity at one edge, from three solved
/// samples at t−h, t, t+h: centered dθ/dt against (dm₁/dt,n₁)+(dm₂/dt,n₂).
#[derive(Debug, Clone)]
pub struct DihedralRate {
    pub edge: usize,
    pub theta: f64,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn dihedral_rate_check(
    surface: &SimplicialSurface,
    coords_minus: &[Vec3M],
    coords_center: &[Vec3M],
    coords_plus: &[Vec3M],
    h: f64,
    edge: usize,
) -> Result<DihedralRate, CurvatureError> {
    let make = |coords: &[Vec3M]| {
        Polyhedron::new(surface.clone(), coords.to_vec()).map_err(|_| CurvatureError::NotClosed)
    };
    let pm = make(coords_minus)?;
    let p0 = make(coords_center)?;
    let pp = make(coords_plus)?;

    let faces = surface.triangles_of_edge(edge);
    if faces.len() != 2 {
        return Err(CurvatureError::NotInteriorEdge(edge));
    }

    let theta = dihedral_angle(&p0, edge)?;
    let lhs = (dihedral_angle(&pp, edge)? - dihedral_angle(&pm, edge)?) / (2.0 * h);

    let mut rhs = 0.0;
    for &face in faces {
        let dm = (outward_unit_normal(&pp, face)? - outward_unit_normal(&pm, face)?)
            * (1.0 / (2.0 * h));
        let n = inward_conormal(&p0, face, edge)?;
        rhs += dm.dot(n);
    }
    Ok(DihedralRate {
        edge,
        theta,
        lhs,
        rhs,
    })
}
