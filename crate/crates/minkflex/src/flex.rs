//! Flexing of disk-type polyhedra and the doubled flexible spheres.
//!
//! A strictly convex sphere-type polyhedron is first-order rigid: pinning
//! one face and writing half squared lengths f_m of the remaining edges as
//! functions of the free vertex coordinates gives a square system whose
//! Jacobian determinant is nonzero. Perturbing the single target belonging
//! to the common edge of a designated face pair and following the solution
//! by Newton continuation therefore produces, after removing that pair, an
//! isometric family of disks Q_t.
//!
//! When the boundary quadrilateral of Q satisfies the reflection-symmetry
//! conditions, each Q_t is glued with its reflection in the axis through
//! the diagonal midpoints; the doubled surfaces form a sphere-type family
//! with constant edge lengths and a nonconstant diagonal distance.

use crate::mesh::{
    boundary_quad, octahedron, remove_adjacent_face_pair, strict_convexity_check, BoundaryQuad,
    ConvexityReport, MeshError, Polyhedron, SimplicialSurface, SurfaceClass,
};
use crate::minkowski::{Vec3M, TAU_NULL};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Rigidity floor: |det J| must exceed TAU_RIGID · (max row norm)^rows.
pub const TAU_RIGID: f64 = 1e-10;
/// Minimum coordinate asymmetry of Q under the boundary reflection.
pub const ASYMMETRY_MARGIN: f64 = 1e-3;
/// Margin keeping seed edges and face normals clear of the nullcone.
pub const SEED_NULL_MARGIN: f64 = 1e-3;
/// Reflected boundary vertices must land on their partners within this.
pub const GLUE_TOL: f64 = 1e-8;

/// Acceptance thresholds shared by the reports and the test suite.
pub const THRESH_EDGE_DRIFT: f64 = 1e-9;
pub const THRESH_NONTRIVIAL: f64 = 1e-4;
pub const THRESH_VOL_REL: f64 = 1e-7;
pub const THRESH_MEAN_CURV_REL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum FlexError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("seed search exhausted {attempts} attempts")]
    SeedSearchFailed { attempts: usize },
    #[error("seed rejected: {0}")]
    SeedRejected(String),
    #[error("edge system is not square: {equations} equations, {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("perturbed edge must be a constrained edge outside the pinned face")]
    BadPerturbedEdge,
    #[error("Newton iteration diverged at t = {t}")]
    NewtonDiverged { t: f64 },
    #[error("rigidity lost at t = {t}: |det J| = {det:.3e}")]
    RigidityLost { t: f64, det: f64 },
    #[error("reflected boundary mismatch at t = {t}: defect {defect:.3e}")]
    GlueMismatch { t: f64, defect: f64 },
    #[error(transparent)]
    Curvature(#[from] crate::curvature::CurvatureError),
    #[error(transparent)]
    Volume(#[from] crate::volume::VolumeError),
}

/// Pinned-face edge-length system over a closed sphere-type surface.
///
/// Unknowns are the coordinates of the vertices outside the pinned face;
/// constraints are the half squared lengths of the edges outside it. For a
/// sphere, 3v − e = 6 makes this square.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    surface: SimplicialSurface,
    pinned: [usize; 3],
    free_vertices: Vec<usize>,
    col_of: BTreeMap<usize, usize>,
    constrained_edges: Vec<usize>,
    perturbed_row: usize,
    base_targets: Vec<f64>,
}

impl ConstraintSystem {
    pub fn new(
        seed: &Polyhedron,
        pinned_face: usize,
        perturbed_edge: [usize; 2],
    ) -> Result<Self, FlexError> {
        let report = seed.surface.validate()?;
        if report.class != SurfaceClass::Sphere {
            return Err(FlexError::SeedRejected(
                "constraint system requires a sphere-type surface".into(),
            ));
        }
        let pinned_tri = seed.surface.triangles()[pinned_face];
        let mut pinned = pinned_tri;
        pinned.sort_unstable();
        let pinned_edge_ids: Vec<usize> = [
            (pinned_tri[0], pinned_tri[1]),
            (pinned_tri[1], pinned_tri[2]),
            (pinned_tri[2], pinned_tri[0]),
        ]
        .iter()
        .map(|&(a, b)| seed.surface.edge_id(a, b).expect("face edge"))
        .collect();

        let free_vertices: Vec<usize> = (0..seed.surface.vertex_count())
            .filter(|v| !pinned.contains(v))
            .collect();
        let col_of: BTreeMap<usize, usize> = free_vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let constrained_edges: Vec<usize> = (0..seed.surface.edges().len())
            .filter(|e| !pinned_edge_ids.contains(e))
            .collect();

        let equations = constrained_edges.len();
        let unknowns = 3 * free_vertices.len();
        if equations != unknowns {
            return Err(FlexError::NotSquare {
                equations,
                unknowns,
            });
        }

        let perturbed_id = seed
            .surface
            .edge_id(perturbed_edge[0], perturbed_edge[1])
            .ok_or(FlexError::BadPerturbedEdge)?;
        let perturbed_row = constrained_edges
            .iter()
            .position(|&e| e == perturbed_id)
            .ok_or(FlexError::BadPerturbedEdge)?;

        let base_targets = constrained_edges
            .iter()
            .map(|&e| {
                let [a, b] = seed.surface.edges()[e];
                (seed.coords[a] - seed.coords[b]).norm_squared() / 2.0
            })
            .collect();

        Ok(Self {
            surface: seed.surface.clone(),
            pinned,
            free_vertices,
            col_of,
            constrained_edges,
            perturbed_row,
            base_targets,
        })
    }

    pub fn pinned_vertices(&self) -> [usize; 3] {
        self.pinned
    }

    pub fn constrained_edges(&self) -> &[usize] {
        &self.constrained_edges
    }

    pub fn perturbed_row(&self) -> usize {
        self.perturbed_row
    }

    pub fn base_targets(&self) -> &[f64] {
        &self.base_targets
    }

    /// Half squared lengths of the constrained edges.
    pub fn evaluate(&self, coords: &[Vec3M]) -> DVector<f64> {
        DVector::from_iterator(
            self.constrained_edges.len(),
            self.constrained_edges.iter().map(|&e| {
                let [a, b] = self.surface.edges()[e];
                (coords[a] - coords[b]).norm_squared() / 2.0
            }),
        )
    }

    /// Targets at parameter t: the base values with t added on the
    /// perturbed row, so the perturbed squared length is base + 2t.
    pub fn targets(&self, t: f64) -> DVector<f64> {
        let mut f = DVector::from_column_slice(&self.base_targets);
        f[self.perturbed_row] += t;
        f
    }

    fn jacobian_impl(&self, coords: &[Vec3M], z_sign: f64) -> DMatrix<f64> {
        let n = self.constrained_edges.len();
        let mut j = DMatrix::zeros(n, n);
        for (row, &e) in self.constrained_edges.iter().enumerate() {
            let [a, b] = self.surface.edges()[e];
            let d = coords[a] - coords[b];
            if let Some(&col) = self.col_of.get(&a) {
                j[(row, 3 * col)] = d.x1;
                j[(row, 3 * col + 1)] = d.x2;
                j[(row, 3 * col + 2)] = z_sign * d.x3;
            }
            if let Some(&col) = self.col_of.get(&b) {
                j[(row, 3 * col)] = -d.x1;
                j[(row, 3 * col + 1)] = -d.x2;
                j[(row, 3 * col + 2)] = -z_sign * d.x3;
            }
        }
        j
    }

    /// Jacobian of the half-squared-length map: row entries
    /// (xⱼ−xₖ, yⱼ−yₖ, zₖ−zⱼ) in vertex j's block and their negatives in k's.
    pub fn jacobian(&self, coords: &[Vec3M]) -> DMatrix<f64> {
        self.jacobian_impl(coords, -1.0)
    }

    /// Jacobian of the Euclidean half-squared-length map (all-plus rows);
    /// differs from the signed one by negating every z column.
    pub fn jacobian_euclidean(&self, coords: &[Vec3M]) -> DMatrix<f64> {
        self.jacobian_impl(coords, 1.0)
    }

    fn apply_update(&self, coords: &mut [Vec3M], delta: &DVector<f64>) {
        for (&v, &col) in &self.col_of {
            coords[v] = coords[v]
                + Vec3M::new(delta[3 * col], delta[3 * col + 1], delta[3 * col + 2]);
        }
    }

    fn rigidity_floor(&self, j: &DMatrix<f64>) -> f64 {
        let scale = (0..j.nrows())
            .map(|r| j.row(r).norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        TAU_RIGID * scale.powi(j.nrows() as i32)
    }

    /// Solve the edge system at parameter t by Newton iteration from a warm
    /// start. Returns the full coordinate vector (pinned entries untouched).
    pub fn solve_at(
        &self,
        warm: &[Vec3M],
        t: f64,
        tol: f64,
        max_iter: usize,
    ) -> Result<Vec<Vec3M>, FlexError> {
        let mut coords = warm.to_vec();
        let target = self.targets(t);
        let mut last_residual = f64::INFINITY;
        let mut growth = 0;
        for _ in 0..max_iter {
            let r = self.evaluate(&coords) - &target;
            let rmax = r.amax();
            if rmax <= tol {
                return Ok(coords);
            }
            if rmax > last_residual {
                growth += 1;
                if growth >= 2 {
                    return Err(FlexError::NewtonDiverged { t });
                }
            } else {
                growth = 0;
            }
            last_residual = rmax;
            let j = self.jacobian(&coords);
            let lu = j.lu();
            let Some(delta) = lu.solve(&(-r)) else {
                return Err(FlexError::NewtonDiverged { t });
            };
            self.apply_update(&mut coords, &delta);
        }
        Err(FlexError::NewtonDiverged { t })
    }
}

/// Result of the first-order rigidity test at a realization.
#[derive(Debug, Clone)]
pub struct RigidityReport {
    pub det_minkowski: f64,
    pub det_euclidean: f64,
    pub floor: f64,
    pub ok: bool,
}

pub fn rigidity_check(sys: &ConstraintSystem, coords: &[Vec3M]) -> RigidityReport {
    let j = sys.jacobian(coords);
    let je = sys.jacobian_euclidean(coords);
    let floor = sys.rigidity_floor(&j);
    let det_minkowski = j.lu().determinant();
    let det_euclidean = je.lu().determinant();
    RigidityReport {
        det_minkowski,
        det_euclidean,
        floor,
        ok: det_minkowski.abs() > floor,
    }
}

/// Sampled flex of the edge system.
#[derive(Debug, Clone)]
pub struct FlexPath {
    pub samples: Vec<(f64, Vec<Vec3M>)>,
    pub t_max: f64,
    pub steps: usize,
    pub newton_tol: f64,
}

/// Continue the solution over a uniform t grid with warm starts; between
/// grid points the step is halved up to eight times on divergence.
pub fn flex_disk(
    sys: &ConstraintSystem,
    seed_coords: &[Vec3M],
    t_max: f64,
    steps: usize,
    newton_tol: f64,
) -> Result<FlexPath, FlexError> {
    assert!(steps >= 1, "steps must be positive");
    let rigidity = rigidity_check(sys, seed_coords);
    if !rigidity.ok {
        return Err(FlexError::RigidityLost {
            t: 0.0,
            det: rigidity.det_minkowski,
        });
    }

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, seed_coords.to_vec()));
    let mut current = seed_coords.to_vec();
    let mut t_prev = 0.0;
    for i in 1..=steps {
        let t_i = t_max * i as f64 / steps as f64;
        current = advance(sys, &current, t_prev, t_i, newton_tol, 0)?;
        let rig = rigidity_check(sys, &current);
        if !rig.ok {
            return Err(FlexError::RigidityLost {
                t: t_i,
                det: rig.det_minkowski,
            });
        }
        samples.push((t_i, current.clone()));
        t_prev = t_i;
    }
    Ok(FlexPath {
        samples,
        t_max,
        steps,
        newton_tol,
    })
}

fn advance(
    sys: &ConstraintSystem,
    from: &[Vec3M],
    t_from: f64,
    t_to: f64,
    tol: f64,
    depth: usize,
) -> Result<Vec<Vec3M>, FlexError> {
    match sys.solve_at(from, t_to, tol, 50) {
        Ok(coords) => Ok(coords),
        Err(_) if depth < 8 => {
            let mid = 0.5 * (t_from + t_to);
            let half = advance(sys, from, t_from, mid, tol, depth + 1)?;
            advance(sys, &half, mid, t_to, tol, depth + 1)
        }
        Err(e) => Err(e),
    }
}

/// Seed polyhedron with a designated removable face pair, vetted for the
/// doubling construction.
#[derive(Debug, Clone)]
pub struct Seed {
    pub polyhedron: Polyhedron,
    pub shared_edge: [usize; 2],
    pub removed_faces: [usize; 2],
    /// Apexes of the removed faces: the vertices opposite the shared edge.
    pub apex_pair: [usize; 2],
    pub pinned_face: usize,
    pub quad: BoundaryQuad,
    pub report: SeedReport,
}

/// Diagnostics of the seed checks.
#[derive(Debug, Clone)]
pub struct SeedReport {
    pub convexity: ConvexityReport,
    pub asymmetry_defect: f64,
    pub det_minkowski: f64,
    pub det_euclidean: f64,
    pub min_abs_edge_sq: f64,
}

/// Vet a closed polyhedron with a designated shared edge as a flex seed:
/// built by face-pair removal, reflection-symmetric boundary, asymmetric
/// interior, non-null edges, nondegenerate faces, strict convexity, and
/// first-order rigidity.
pub fn seed_from_polyhedron(
    polyhedron: Polyhedron,
    shared_edge: [usize; 2],
) -> Result<Seed, FlexError> {
    let report = polyhedron.surface.validate()?;
    if report.class != SurfaceClass::Sphere {
        return Err(FlexError::SeedRejected("seed must be sphere-type".into()));
    }

    let mut min_abs_edge_sq = f64::INFINITY;
    for (ei, &[a, b]) in polyhedron.surface.edges().iter().enumerate() {
        let s = polyhedron.edge_vector(ei).norm_squared().abs();
        min_abs_edge_sq = min_abs_edge_sq.min(s);
        if s <= SEED_NULL_MARGIN {
            return Err(FlexError::SeedRejected(format!(
                "edge ({a}, {b}) is null or too close to the nullcone"
            )));
        }
    }
    for (ti, t) in polyhedron.surface.triangles().iter().enumerate() {
        let u = polyhedron.coords[t[1]] - polyhedron.coords[t[0]];
        let w = polyhedron.coords[t[2]] - polyhedron.coords[t[0]];
        let c = u.eu_cross(w);
        if c.norm_squared().abs() <= SEED_NULL_MARGIN * c.eu_norm() * c.eu_norm() {
            return Err(FlexError::SeedRejected(format!(
                "face {ti} carries a (nearly) degenerate metric"
            )));
        }
    }

    let convexity = strict_convexity_check(&polyhedron);
    if !convexity.convex {
        return Err(FlexError::SeedRejected(format!(
            "seed is not strictly convex: {}",
            convexity.reasons.join("; ")
        )));
    }

    let edge_id = polyhedron
        .surface
        .edge_id(shared_edge[0], shared_edge[1])
        .ok_or(MeshError::BadEdge(shared_edge[0], shared_edge[1]))?;
    let incident = polyhedron.surface.triangles_of_edge(edge_id);
    if incident.len() != 2 {
        return Err(FlexError::Mesh(MeshError::BadEdge(
            shared_edge[0],
            shared_edge[1],
        )));
    }
    let removed_faces = [incident[0], incident[1]];
    let apex_pair = removed_faces.map(|f| {
        polyhedron.surface.triangles()[f]
            .iter()
            .copied()
            .find(|v| *v != shared_edge[0] && *v != shared_edge[1])
            .expect("triangle has a vertex off its edge")
    });

    let disk = remove_adjacent_face_pair(&polyhedron, shared_edge)?;
    let quad = boundary_quad(&disk)?;

    // Condition C: the disk must not be symmetric under the boundary
    // reflection. Boundary vertices map onto each other by the lemma, so
    // asymmetry is measured on the interior vertices.
    let asymmetry_defect = interior_asymmetry_defect(&disk, &quad);
    if asymmetry_defect <= ASYMMETRY_MARGIN {
        return Err(FlexError::SeedRejected(format!(
            "disk is symmetric under the boundary reflection (defect {asymmetry_defect:.3e})"
        )));
    }

    let pinned_face = (0..polyhedron.surface.triangles().len())
        .find(|f| !removed_faces.contains(f))
        .expect("sphere has more than two faces");
    let sys = ConstraintSystem::new(&polyhedron, pinned_face, shared_edge)?;
    let rigidity = rigidity_check(&sys, &polyhedron.coords);
    if !rigidity.ok {
        return Err(FlexError::SeedRejected(format!(
            "seed is not first-order rigid (|det J| = {:.3e})",
            rigidity.det_minkowski.abs()
        )));
    }

    Ok(Seed {
        polyhedron,
        shared_edge,
        removed_faces,
        apex_pair,
        pinned_face,
        quad,
        report: SeedReport {
            convexity,
            asymmetry_defect,
            det_minkowski: rigidity.det_minkowski,
            det_euclidean: rigidity.det_euclidean,
            min_abs_edge_sq,
        },
    })
}

fn interior_asymmetry_defect(disk: &Polyhedron, quad: &BoundaryQuad) -> f64 {
    let axis = quad.axis();
    let interior: Vec<usize> = (0..disk.surface.vertex_count())
        .filter(|v| !quad.indices.contains(v))
        .collect();
    let mut defect = 0.0f64;
    for &v in &interior {
        let image = axis.reflect(disk.coords[v]);
        let nearest = interior
            .iter()
            .map(|&w| (image - disk.coords[w]).eu_norm())
            .fold(f64::INFINITY, f64::min);
        defect = defect.max(nearest);
    }
    defect
}

/// Randomized search for a seed: octahedra squashed along the timelike axis,
/// jittered vertex-wise, with the boundary side-length constraints restored
/// by a Gauss-Newton projection of one quad vertex.
pub fn make_seed(rng_seed: u64, jitter: f64) -> Result<Seed, FlexError> {
    const ATTEMPTS: usize = 64;
    // Shared edge in the x1x2 sector; faces [0,2,4] and [2,0,5] share it.
    let shared_edge = [0usize, 2];
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..ATTEMPTS {
        let base = octahedron(0.6);
        let mut coords = base.coords.clone();
        for c in &mut coords {
            *c = *c
                + Vec3M::new(
                    rng.gen_range(-jitter..=jitter),
                    rng.gen_range(-jitter..=jitter),
                    rng.gen_range(-jitter..=jitter),
                );
        }
        // Restore the two side-length equalities of the boundary quad
        // (v4 v0 v5 v2) by moving v5: |v2−v5|² = |v0−v4|², |v5−v0|² = |v4−v2|².
        if !project_quad_sides(&mut coords) {
            continue;
        }
        let Ok(polyhedron) = Polyhedron::new(base.surface.clone(), coords) else {
            continue;
        };
        match seed_from_polyhedron(polyhedron, shared_edge) {
            Ok(seed) => return Ok(seed),
            Err(_) => continue,
        }
    }
    Err(FlexError::SeedSearchFailed { attempts: ATTEMPTS })
}

fn project_quad_sides(coords: &mut [Vec3M]) -> bool {
    use nalgebra::{Matrix2, Vector2};
    let l1 = (coords[0] - coords[4]).norm_squared();
    let l2 = (coords[4] - coords[2]).norm_squared();
    let mut v5 = coords[5];
    for _ in 0..60 {
        let r1 = (coords[2] - v5).norm_squared() - l1;
        let r2 = (v5 - coords[0]).norm_squared() - l2;
        if r1.abs().max(r2.abs()) < 1e-13 {
            coords[5] = v5;
            return true;
        }
        let g1 = (v5 - coords[2]).lower() * 2.0;
        let g2 = (v5 - coords[0]).lower() * 2.0;
        let dot = |a: Vec3M, b: Vec3M| a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
        let jjt = Matrix2::new(dot(g1, g1), dot(g1, g2), dot(g2, g1), dot(g2, g2));
        let Some(inv) = jjt.try_inverse() else {
            return false;
        };
        let lambda = inv * Vector2::new(-r1, -r2);
        v5 = v5 + g1 * lambda[0] + g2 * lambda[1];
    }
    false
}

/// Combinatorial doubling of a disk across its boundary quadrilateral.
#[derive(Debug, Clone)]
pub struct Doubling {
    pub disk: SimplicialSurface,
    pub doubled: SimplicialSurface,
    pub quad: [usize; 4],
    /// Involution pairing each doubled vertex with its reflection partner.
    pub mirror_of: Vec<usize>,
    /// For mirrored vertices, the disk vertex they were copied from.
    pub copied_from: Vec<usize>,
}

impl Doubling {
    pub fn new(disk: &SimplicialSurface, quad: [usize; 4]) -> Result<Self, FlexError> {
        let n = disk.vertex_count();
        let mut mirror_of: Vec<usize> = (0..n).collect();
        // Boundary pairing q1 <-> q3, q2 <-> q4.
        mirror_of[quad[0]] = quad[2];
        mirror_of[quad[2]] = quad[0];
        mirror_of[quad[1]] = quad[3];
        mirror_of[quad[3]] = quad[1];
        let mut copied_from = Vec::new();
        let mut next = n;
        for v in 0..n {
            if !quad.contains(&v) {
                mirror_of[v] = next;
                copied_from.push(v);
                next += 1;
            }
        }
        let mut mirror_full = mirror_of.clone();
        for (i, &src) in copied_from.iter().enumerate() {
            mirror_full.push(src);
            debug_assert_eq!(mirror_of[src], n + i);
        }

        let mut triangles = disk.triangles().to_vec();
        for t in disk.triangles() {
            // Reflections in a line preserve the space orientation, so the
            // mirrored copy is glued with reversed triangle orientation.
            triangles.push([mirror_of[t[0]], mirror_of[t[2]], mirror_of[t[1]]]);
        }
        let doubled = SimplicialSurface::new(next, triangles)?;
        let report = doubled.validate()?;
        if report.class != SurfaceClass::Sphere {
            return Err(FlexError::SeedRejected(format!(
                "doubled complex is {:?}, not a sphere",
                report.class
            )));
        }
        Ok(Self {
            disk: disk.clone(),
            doubled,
            quad,
            mirror_of: mirror_full,
            copied_from,
        })
    }

    /// Coordinates of the doubled polyhedron at one sample: originals kept,
    /// mirrored interiors reflected in the axis of the sample's quad.
    pub fn doubled_coords(
        &self,
        disk_coords: &[Vec3M],
        quad: &BoundaryQuad,
        t: f64,
    ) -> Result<Vec<Vec3M>, FlexError> {
        let axis = quad.axis();
        let defect = (axis.reflect(quad.points[0]) - quad.points[2])
            .eu_norm()
            .max((axis.reflect(quad.points[1]) - quad.points[3]).eu_norm());
        if defect > GLUE_TOL {
            return Err(FlexError::GlueMismatch { t, defect });
        }
        let mut coords = disk_coords.to_vec();
        for &src in &self.copied_from {
            coords.push(axis.reflect(disk_coords[src]));
        }
        Ok(coords)
    }

    /// Largest distance between a reflected vertex and its partner.
    pub fn symmetry_defect(&self, doubled_coords: &[Vec3M], quad: &BoundaryQuad) -> f64 {
        let axis = quad.axis();
        doubled_coords
            .iter()
            .enumerate()
            .map(|(v, &c)| (axis.reflect(c) - doubled_coords[self.mirror_of[v]]).eu_norm())
            .fold(0.0f64, f64::max)
    }
}

/// One-shot doubling of a disk-type polyhedron across its boundary quad.
pub fn symmetrize(q: &Polyhedron) -> Result<Polyhedron, FlexError> {
    let quad = boundary_quad(q)?;
    let doubling = Doubling::new(&q.surface, quad.indices)?;
    let coords = doubling.doubled_coords(&q.coords, &quad, 0.0)?;
    Ok(Polyhedron::new(doubling.doubled, coords)?)
}

/// How t_max is chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TMax {
    /// Fixed value.
    Value(f64),
    /// Scale-derived start, halved until the whole path verifies.
    Auto(String),
}

impl TMax {
    pub fn auto() -> Self {
        TMax::Auto("auto".into())
    }
}

/// Run configuration; the JSON form uses "auto" or a number for t_max.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlexConfig {
    pub seed_rng: u64,
    #[serde(default = "default_jitter")]
    pub jitter: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_t_max")]
    pub t_max: TMax,
    #[serde(default = "default_newton_tol")]
    pub newton_tol: f64,
    #[serde(default)]
    pub output: Option<std::path::PathBuf>,
}

fn default_jitter() -> f64 {
    0.05
}
fn default_steps() -> usize {
    32
}
fn default_t_max() -> TMax {
    TMax::auto()
}
fn default_newton_tol() -> f64 {
    1e-11
}

impl Default for FlexConfig {
    fn default() -> Self {
        Self {
            seed_rng: 42,
            jitter: default_jitter(),
            steps: default_steps(),
            t_max: default_t_max(),
            newton_tol: default_newton_tol(),
            output: None,
        }
    }
}

/// Per-sample row of the invariant report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub t: f64,
    pub max_edge_drift: f64,
    pub vol: f64,
    pub mean_curvature: f64,
    /// Modulus of the complex distance between the removed-face apexes.
    pub pair_distance: f64,
}

/// Pass/fail verdicts of the invariant suite at the pinned thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdicts {
    pub edge_lengths_conserved: bool,
    pub nontrivial: bool,
    pub volume_constant: bool,
    pub mean_curvature_constant: bool,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.edge_lengths_conserved
            && self.nontrivial
            && self.volume_constant
            && self.mean_curvature_constant
    }
}

/// Full outcome of a flex experiment.
#[derive(Debug)]
pub struct FlexExperiment {
    pub seed: Seed,
    pub disk_path: FlexPath,
    pub doubling: Doubling,
    /// Doubled-polyhedron coordinates per sample.
    pub doubled_samples: Vec<(f64, Vec<Vec3M>)>,
    pub rows: Vec<ReportRow>,
    pub verdicts: Verdicts,
    /// Largest change of any vertex-pair distance across the path.
    pub nontriviality_margin: f64,
    /// Flat-edge observations (sample index, doubled edge id).
    pub flat_edges: Vec<(usize, usize)>,
    pub achieved_t_max: f64,
}

/// Build the seed, flex the disk, double every sample, and verify the
/// conserved quantities along the path.
pub fn run_flex_experiment(config: &FlexConfig) -> Result<FlexExperiment, FlexError> {
    let seed = make_seed(config.seed_rng, config.jitter)?;
    run_flex_experiment_on(seed, config)
}

pub fn run_flex_experiment_on(
    seed: Seed,
    config: &FlexConfig,
) -> Result<FlexExperiment, FlexError> {
    let sys = ConstraintSystem::new(&seed.polyhedron, seed.pinned_face, seed.shared_edge)?;
    let disk = remove_adjacent_face_pair(&seed.polyhedron, seed.shared_edge)?;
    let doubling = Doubling::new(&disk.surface, seed.quad.indices)?;

    let min_abs_edge_sq = seed.report.min_abs_edge_sq;
    let (mut t_max, auto) = match &config.t_max {
        TMax::Value(v) => (*v, false),
        TMax::Auto(_) => (0.01 * min_abs_edge_sq, true),
    };

    let mut last_err = None;
    for _ in 0..=6 {
        match try_path(&seed, &sys, &doubling, t_max, config) {
            Ok(experiment) => return Ok(experiment),
            Err(e) if auto => {
                last_err = Some(e);
                t_max *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn try_path(
    seed: &Seed,
    sys: &ConstraintSystem,
    doubling: &Doubling,
    t_max: f64,
    config: &FlexConfig,
) -> Result<FlexExperiment, FlexError> {
    let disk_path = flex_disk(
        sys,
        &seed.polyhedron.coords,
        t_max,
        config.steps,
        config.newton_tol,
    )?;

    // Double every sample, re-checking the quad conditions each time.
    let mut doubled_samples = Vec::with_capacity(disk_path.samples.len());
    for (t, coords) in &disk_path.samples {
        let points = seed.quad.indices.map(|v| coords[v]);
        let quad = BoundaryQuad::from_points(seed.quad.indices, points)?;
        let dc = doubling.doubled_coords(coords, &quad, *t)?;
        doubled_samples.push((*t, dc));
    }

    let apex = Vec3M::default();
    let volumes =
        crate::volume::volume_along_path(&doubling.doubled, &doubled_samples, apex)?;
    let curvatures =
        crate::curvature::mean_curvature_along_path(&doubling.doubled, &doubled_samples)?;

    // Edge drift on the doubled surface, against the first sample.
    let base_sq: Vec<f64> = {
        let (_, coords) = &doubled_samples[0];
        doubling
            .doubled
            .edges()
            .iter()
            .map(|&[a, b]| (coords[a] - coords[b]).norm_squared())
            .collect()
    };
    let mut rows = Vec::with_capacity(doubled_samples.len());
    let mut max_drift_overall = 0.0f64;
    for (i, (t, coords)) in doubled_samples.iter().enumerate() {
        let drift = doubling
            .doubled
            .edges()
            .iter()
            .zip(&base_sq)
            .map(|(&[a, b], &s0)| ((coords[a] - coords[b]).norm_squared() - s0).abs())
            .fold(0.0f64, f64::max);
        max_drift_overall = max_drift_overall.max(drift);
        let pair = (coords[seed.apex_pair[0]] - coords[seed.apex_pair[1]])
            .length()
            .modulus();
        rows.push(ReportRow {
            t: *t,
            max_edge_drift: drift,
            vol: volumes.rows[i].1,
            mean_curvature: curvatures.rows[i].1,
            pair_distance: pair,
        });
    }

    // Nontriviality over all vertex pairs of the doubled polyhedron.
    let n = doubled_samples[0].1.len();
    let mut nontriviality_margin = 0.0f64;
    for a in 0..n {
        for b in (a + 1)..n {
            let d0 = (doubled_samples[0].1[a] - doubled_samples[0].1[b])
                .length()
                .modulus();
            for (_, coords) in &doubled_samples[1..] {
                let d = (coords[a] - coords[b]).length().modulus();
                nontriviality_margin = nontriviality_margin.max((d - d0).abs());
            }
        }
    }

    let vol0 = rows.first().map(|r| r.vol).unwrap_or(0.0);
    let m0 = rows.first().map(|r| r.mean_curvature).unwrap_or(0.0);
    let verdicts = Verdicts {
        edge_lengths_conserved: max_drift_overall <= THRESH_EDGE_DRIFT,
        nontrivial: nontriviality_margin >= THRESH_NONTRIVIAL,
        volume_constant: volumes.max_deviation <= THRESH_VOL_REL * (1.0 + vol0.abs()),
        mean_curvature_constant: curvatures.max_deviation
            <= THRESH_MEAN_CURV_REL * (1.0 + m0.abs()),
    };

    Ok(FlexExperiment {
        seed: seed.clone(),
        disk_path,
        doubling: doubling.clone(),
        doubled_samples,
        rows,
        verdicts,
        nontriviality_margin,
        flat_edges: curvatures.flat_edges,
        achieved_t_max: t_max,
    })
}
