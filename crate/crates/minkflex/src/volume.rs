//! Simplex and polyhedron volumes in R³₁.
//!
//! The volume of a domain is the Euclidean volume of its eu image, so a
//! 3-simplex has the signed coordinate-determinant volume det[pⱼ | 1]/3!.
//! The same squared volume is recovered from squared Minkowski distances by
//! the signed distance-matrix determinant
//!
//!   vol² = (−1)ⁿ / (2ⁿ (n!)²) · det B(d²),
//!
//! where B is the usual bordered matrix of pairwise squared distances; the
//! prefactor differs from the Euclidean (Cayley-Menger) one exactly by the
//! sign (−1)ⁿ vs (−1)ⁿ⁺¹. The generalized volume of a closed oriented
//! polyhedron is the apex-independent sum of signed cone volumes.

use crate::mesh::{Polyhedron, SurfaceClass};
use crate::minkowski::Vec3M;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum VolumeError {
    #[error("generalized volume requires a closed oriented surface")]
    NotClosed,
}

/// Symmetric matrix of squared pairwise distances with zero diagonal;
/// entries may be negative.
#[derive(Debug, Clone)]
pub struct SquaredDistanceMatrix {
    n: usize,
    d2: Vec<f64>,
}

impl SquaredDistanceMatrix {
    /// Build from explicit entries for n+1 points ((n+1)² values, row-major).
    pub fn new(n: usize, d2: Vec<f64>) -> Self {
        assert_eq!(d2.len(), (n + 1) * (n + 1));
        Self { n, d2 }
    }

    /// Squared Minkowski distances of n+1 points of R³₁ (n = points − 1).
    pub fn from_points(points: &[Vec3M]) -> Self {
        let m = points.len();
        let mut d2 = vec![0.0; m * m];
        for j in 0..m {
            for k in 0..m {
                d2[j * m + k] = (points[j] - points[k]).norm_squared();
            }
        }
        Self { n: m - 1, d2 }
    }

    /// Squared Euclidean distances of the eu images of the same points.
    pub fn from_points_euclidean(points: &[Vec3M]) -> Self {
        let m = points.len();
        let mut d2 = vec![0.0; m * m];
        for j in 0..m {
            for k in 0..m {
                let d = points[j] - points[k];
                d2[j * m + k] = d.x1 * d.x1 + d.x2 * d.x2 + d.x3 * d.x3;
            }
        }
        Self { n: m - 1, d2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.d2[j * (self.n + 1) + k]
    }

    /// Determinant of the bordered (n+2)×(n+2) matrix with a 0-1 border row
    /// and column around the distance block.
    fn bordered_determinant(&self) -> f64 {
        let m = self.n + 2;
        let mut b = DMatrix::zeros(m, m);
        for j in 1..m {
            b[(0, j)] = 1.0;
            b[(j, 0)] = 1.0;
        }
        for j in 0..=self.n {
            for k in 0..=self.n {
                b[(j + 1, k + 1)] = self.get(j, k);
            }
        }
        b.lu().determinant()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Squared volume from squared Minkowski distances, with the Minkowski sign
/// (−1)ⁿ in the prefactor.
///
/// Negative results signal distance data not realizable in R³₁; callers
/// decide how to treat them.
pub fn simplex_volume_cm(d: &SquaredDistanceMatrix) -> f64 {
    let n = d.n();
    let nf = factorial(n);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / (2f64.powi(n as i32) * nf * nf) * d.bordered_determinant()
}

/// Squared volume from squared Euclidean distances with the classical
/// Cayley-Menger sign (−1)ⁿ⁺¹.
pub fn simplex_volume_cm_euclidean(d: &SquaredDistanceMatrix) -> f64 {
    -simplex_volume_cm(d)
}

/// Signed volume of the 3-simplex [p₀..p₃] from the bordered coordinate
/// determinant: det of rows (pⱼ, 1) divided by 3!.
pub fn simplex_volume_coords(p: &[Vec3M; 4]) -> f64 {
    let mut m = DMatrix::zeros(4, 4);
    for (j, q) in p.iter().enumerate() {
        m[(j, 0)] = q.x1;
        m[(j, 1)] = q.x2;
        m[(j, 2)] = q.x3;
        m[(j, 3)] = 1.0;
    }
    m.lu().determinant() / 6.0
}

/// Signed Euclidean area of the triangle [p₀..p₂] in the x₁x₂ plane of the
/// eu image (the x₃ coordinates must agree); desk-scale n = 2 oracle.
pub fn triangle_area_coords_2d(p: &[Vec3M; 3]) -> f64 {
    let u = p[1] - p[0];
    let w = p[2] - p[0];
    0.5 * (u.x1 * w.x2 - u.x2 * w.x1)
}

/// Generalized volume: sum of signed cone volumes over the oriented faces
/// from an arbitrary apex. Apex-independent for closed oriented surfaces.
pub fn generalized_volume(p: &Polyhedron, apex: Vec3M) -> Result<f64, VolumeError> {
    let report = p.surface.validate().map_err(|_| VolumeError::NotClosed)?;
    if report.boundary_loops != 0 {
        return Err(VolumeError::NotClosed);
    }
    // Fixed face order keeps the sum deterministic.
    let mut vol = 0.0;
    for t in p.surface.triangles() {
        vol += simplex_volume_coords(&[apex, p.coords[t[0]], p.coords[t[1]], p.coords[t[2]]]);
    }
    Ok(vol)
}

/// Per-sample generalized volume along a family of realizations of one
/// closed surface, with the maximum deviation from the first sample.
#[derive(Debug, Clone)]
pub struct VolumeSeries {
    pub rows: Vec<(f64, f64)>,
    pub max_deviation: f64,
}

pub fn volume_along_path(
    surface: &crate::mesh::SimplicialSurface,
    samples: &[(f64, Vec<Vec3M>)],
    apex: Vec3M,
) -> Result<VolumeSeries, VolumeError> {
    let mut rows = Vec::with_capacity(samples.len());
    for (t, coords) in samples {
        let p = Polyhedron::new(surface.clone(), coords.clone())
            .map_err(|_| VolumeError::NotClosed)?;
        rows.push((*t, generalized_volume(&p, apex)?));
    }
    let v0 = rows.first().map(|r| r.1).unwrap_or(0.0);
    let max_deviation = rows
        .iter()
        .map(|r| (r.1 - v0).abs())
        .fold(0.0f64, f64::max);
    Ok(VolumeSeries {
        rows,
        max_deviation,
    })
}
