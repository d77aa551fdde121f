//! Metric kernel for the Minkowski spaces R³₁ and R²₁.
//!
//! The scalar product is (x,y) = x₁y₁ + x₂y₂ − x₃y₃ in three dimensions and
//! (x,y) = x₁y₁ − x₂y₂ in the plane. Squared lengths may be negative, so the
//! length |x| = √(x,x) is a positive real, a positive multiple of i, or zero;
//! [`MLength`] keeps the squared value as the primary datum and derives the
//! complex root on demand.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Default tolerance on squared lengths for null classification.
///
/// Flex continuation produces coordinates accurate to ~1e-11, so squared
/// lengths are trusted to about 1e-10; anything within 1e-9 of zero is
/// treated as lying on the nullcone.
pub const TAU_NULL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    /// The requested axis direction lies on the nullcone, so the foot of the
    /// Minkowski perpendicular is not defined.
    #[error("reflection axis direction is null")]
    NullAxis,
}

/// Causal type of a vector: sign of its self-scalar-product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Null,
}

/// Vector of the Minkowski 3-space R³₁.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3M {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Vector of the Minkowski plane R²₁.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2M {
    pub x1: f64,
    pub x2: f64,
}

impl Vec3M {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    /// Scalar product x₁y₁ + x₂y₂ − x₃y₃.
    pub fn dot(self, other: Self) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 - self.x3 * other.x3
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn length(self) -> MLength {
        MLength::from_squared(self.norm_squared())
    }

    pub fn causal_class(self, tau_null: f64) -> CausalClass {
        causal_class_of(self.norm_squared(), tau_null)
    }

    /// (ε, ‖·‖) with ε = sgn (x,x) and ‖x‖ = √|(x,x)|.
    pub fn epsilon_norm(self) -> (i32, f64) {
        epsilon_norm_of(self.norm_squared())
    }

    /// The same coordinates reinterpreted in the Euclidean 3-space.
    pub fn eu(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Euclidean norm of the eu image; metric-free size of the coordinates.
    pub fn eu_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    /// Euclidean cross product of the coordinate triples.
    pub fn eu_cross(self, other: Self) -> Self {
        Self::new(
            self.x2 * other.x3 - self.x3 * other.x2,
            self.x3 * other.x1 - self.x1 * other.x3,
            self.x1 * other.x2 - self.x2 * other.x1,
        )
    }

    /// Index-lowering map: flips the sign of the third coordinate.
    ///
    /// For any u, (x, u) equals the Euclidean dot of x.lower() with u, which
    /// turns Minkowski orthogonality into Euclidean orthogonality.
    pub fn lower(self) -> Self {
        Self::new(self.x1, self.x2, -self.x3)
    }
}

impl Vec2M {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    /// Scalar product x₁y₁ − x₂y₂.
    pub fn dot(self, other: Self) -> f64 {
        self.x1 * other.x1 - self.x2 * other.x2
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn length(self) -> MLength {
        MLength::from_squared(self.norm_squared())
    }

    pub fn causal_class(self, tau_null: f64) -> CausalClass {
        causal_class_of(self.norm_squared(), tau_null)
    }

    pub fn epsilon_norm(self) -> (i32, f64) {
        epsilon_norm_of(self.norm_squared())
    }

    /// Determinant of the ordered pair (self, other); positive means
    /// positively oriented.
    pub fn det(self, other: Self) -> f64 {
        self.x1 * other.x2 - self.x2 * other.x1
    }
}

fn causal_class_of(squared: f64, tau_null: f64) -> CausalClass {
    if squared.abs() <= tau_null {
        CausalClass::Null
    } else if squared > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

fn epsilon_norm_of(squared: f64) -> (i32, f64) {
    let eps = if squared > 0.0 {
        1
    } else if squared < 0.0 {
        -1
    } else {
        0
    };
    (eps, squared.abs().sqrt())
}

/// Length in the Minkowski sense: stores (x,x), derives √(x,x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLength {
    squared: f64,
}

impl MLength {
    pub fn from_squared(squared: f64) -> Self {
        Self { squared }
    }

    pub fn squared(self) -> f64 {
        self.squared
    }

    /// √(x,x) as a complex number: positive real, positive-imaginary, or zero.
    pub fn value(self) -> Complex64 {
        if self.squared >= 0.0 {
            Complex64::new(self.squared.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-self.squared).sqrt())
        }
    }

    /// Modulus ‖·‖ of the complex length.
    pub fn modulus(self) -> f64 {
        self.squared.abs().sqrt()
    }

    pub fn is_real(self) -> bool {
        self.squared >= 0.0
    }
}

/// Non-null straight line in R³₁, stored as point + direction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LineM {
    point: Vec3M,
    direction: Vec3M,
}

impl LineM {
    pub fn new(point: Vec3M, direction: Vec3M) -> Result<Self, KernelError> {
        if direction.norm_squared().abs() <= TAU_NULL {
            return Err(KernelError::NullAxis);
        }
        Ok(Self { point, direction })
    }

    pub fn through(a: Vec3M, b: Vec3M) -> Result<Self, KernelError> {
        Self::new(a, b - a)
    }

    pub fn point(&self) -> Vec3M {
        self.point
    }

    pub fn direction(&self) -> Vec3M {
        self.direction
    }

    /// Foot of the Minkowski perpendicular dropped from x onto the line.
    pub fn foot(&self, x: Vec3M) -> Vec3M {
        let d = self.direction;
        let lambda = (x - self.point).dot(d) / d.dot(d);
        self.point + d * lambda
    }

    /// Reflection in the line: x ↦ 2y − x with y the perpendicular foot.
    ///
    /// An involutive isometry of R³₁; on the axis-aligned cases it reproduces
    /// the matrices fixing the axis coordinate and negating the other two.
    pub fn reflect(&self, x: Vec3M) -> Vec3M {
        self.foot(x) * 2.0 - x
    }
}

impl Add for Vec3M {
    type Output = Vec3M;
    fn add(self, o: Vec3M) -> Vec3M {
        Vec3M::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for Vec3M {
    type Output = Vec3M;
    fn sub(self, o: Vec3M) -> Vec3M {
        Vec3M::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for Vec3M {
    type Output = Vec3M;
    fn neg(self) -> Vec3M {
        Vec3M::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for Vec3M {
    type Output = Vec3M;
    fn mul(self, s: f64) -> Vec3M {
        Vec3M::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Add for Vec2M {
    type Output = Vec2M;
    fn add(self, o: Vec2M) -> Vec2M {
        Vec2M::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for Vec2M {
    type Output = Vec2M;
    fn sub(self, o: Vec2M) -> Vec2M {
        Vec2M::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Neg for Vec2M {
    type Output = Vec2M;
    fn neg(self) -> Vec2M {
        Vec2M::new(-self.x1, -self.x2)
    }
}

impl Mul<f64> for Vec2M {
    type Output = Vec2M;
    fn mul(self, s: f64) -> Vec2M {
        Vec2M::new(self.x1 * s, self.x2 * s)
    }
}

impl From<[f64; 3]> for Vec3M {
    fn from(c: [f64; 3]) -> Self {
        Vec3M::new(c[0], c[1], c[2])
    }
}

impl From<Vec3M> for [f64; 3] {
    fn from(v: Vec3M) -> Self {
        [v.x1, v.x2, v.x3]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn dot_on_basis_vectors() {
        let e1 = Vec3M::new(1.0, 0.0, 0.0);
        let e3 = Vec3M::new(0.0, 0.0, 1.0);
        let null = Vec3M::new(1.0, 1.0, SQRT2);
        assert_eq!(e1.dot(e1), 1.0);
        assert_eq!(e3.dot(e3), -1.0);
        assert!(null.dot(null).abs() < 1e-15);
    }

    #[test]
    fn length_branches() {
        let v = Vec3M::new(3.0, 4.0, 0.0).length().value();
        assert_eq!(v, Complex64::new(5.0, 0.0));
        let v = Vec3M::new(0.0, 0.0, 2.0).length().value();
        assert_eq!(v, Complex64::new(0.0, 2.0));
        let v = Vec3M::new(1.0, 1.0, SQRT2).length().value();
        assert!(v.norm() < 1e-7);
    }

    #[test]
    fn causal_classification() {
        assert_eq!(
            Vec3M::new(1.0, 0.0, 0.0).causal_class(1e-12),
            CausalClass::Spacelike
        );
        assert_eq!(
            Vec3M::new(0.0, 0.0, 1.0).causal_class(1e-12),
            CausalClass::Timelike
        );
        assert_eq!(
            Vec3M::new(1.0, 1.0, SQRT2).causal_class(1e-9),
            CausalClass::Null
        );
    }

    #[test]
    fn epsilon_norm_values() {
        assert_eq!(Vec3M::new(3.0, 4.0, 0.0).epsilon_norm(), (1, 5.0));
        assert_eq!(Vec3M::new(0.0, 0.0, 2.0).epsilon_norm(), (-1, 2.0));
        let (eps, norm) = Vec3M::new(1.0, 1.0, SQRT2).epsilon_norm();
        // 1 + 1 - 2 is exactly zero only in exact arithmetic; accept the
        // rounded-to-zero neighborhood.
        assert!(eps == 0 || norm < 1e-7);
    }

    #[test]
    fn reflect_in_x1_axis_matches_axis_fixing_matrix() {
        let axis = LineM::new(Vec3M::default(), Vec3M::new(1.0, 0.0, 0.0)).unwrap();
        let x = Vec3M::new(0.3, -1.2, 2.5);
        let r = axis.reflect(x);
        assert!((r - Vec3M::new(0.3, 1.2, -2.5)).eu_norm() < 1e-14);
    }

    #[test]
    fn reflect_in_x3_axis_matches_axis_fixing_matrix() {
        let axis = LineM::new(Vec3M::default(), Vec3M::new(0.0, 0.0, 1.0)).unwrap();
        let x = Vec3M::new(0.3, -1.2, 2.5);
        let r = axis.reflect(x);
        assert!((r - Vec3M::new(-0.3, 1.2, 2.5)).eu_norm() < 1e-14);
    }

    #[test]
    fn reflect_fixes_points_on_axis() {
        let axis = LineM::new(Vec3M::new(1.0, 2.0, 0.5), Vec3M::new(0.5, -0.3, 0.2)).unwrap();
        let x = axis.point() + axis.direction() * 3.7;
        assert!((axis.reflect(x) - x).eu_norm() < 1e-12);
    }

    #[test]
    fn null_axis_rejected() {
        let err = LineM::new(Vec3M::default(), Vec3M::new(1.0, 0.0, 1.0)).unwrap_err();
        assert_eq!(err, KernelError::NullAxis);
    }

    #[test]
    fn eu_is_identity_on_coordinates() {
        let v = Vec3M::new(1.0, 2.0, 3.0);
        assert_eq!(v.eu(), [1.0, 2.0, 3.0]);
        assert_eq!(Vec3M::new(0.0, 0.0, 1.0).eu_norm(), 1.0);
        let n = Vec3M::new(1.0, 1.0, SQRT2);
        let e = n.eu();
        let eu_dot: f64 = e.iter().map(|c| c * c).sum();
        assert!((eu_dot - 4.0).abs() < 1e-15);
    }

    fn vec3(range: f64) -> impl Strategy<Value = Vec3M> {
        (
            -range..range,
            -range..range,
            -range..range,
        )
            .prop_map(|(a, b, c)| Vec3M::new(a, b, c))
    }

    proptest! {
        #[test]
        fn dot_is_bilinear_and_symmetric(
            x in vec3(2.0), y in vec3(2.0), z in vec3(2.0),
            a in -2.0..2.0f64, b in -2.0..2.0f64,
        ) {
            let lhs = (x * a + y * b).dot(z);
            let rhs = a * x.dot(z) + b * y.dot(z);
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert!((x.dot(y) - y.dot(x)).abs() < 1e-12);
        }

        #[test]
        fn parallelogram_identity(x in vec3(2.0), y in vec3(2.0)) {
            let lhs = (x + y).norm_squared() + (x - y).norm_squared();
            let rhs = 2.0 * x.norm_squared() + 2.0 * y.norm_squared();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn isosceles_median_orthogonality(x in vec3(2.0), s in 0.1..2.0f64) {
            // Build y with |y|² = |x|² by rescaling a rotated copy along the
            // same causal class when possible; fall back to swapping x1/x2
            // which preserves the squared length exactly.
            let y = Vec3M::new(x.x2 * s.signum(), x.x1 * s.signum(), x.x3);
            prop_assert!((y.norm_squared() - x.norm_squared()).abs() < 1e-12);
            prop_assert!((x + y).dot(x - y).abs() < 1e-12);
        }

        #[test]
        fn reflection_is_isometric_involution(
            p in vec3(2.0), d in vec3(2.0), x in vec3(2.0), y in vec3(2.0),
        ) {
            prop_assume!(d.norm_squared().abs() > 1e-3);
            let axis = LineM::new(p, d).unwrap();
            let rx = axis.reflect(x);
            let ry = axis.reflect(y);
            prop_assert!(((rx - ry).norm_squared() - (x - y).norm_squared()).abs() < 1e-12);
            prop_assert!((axis.reflect(rx) - x).eu_norm() < 1e-12);
        }

        #[test]
        fn epsilon_norm_reconstructs_squared_length(x in vec3(10.0)) {
            let (eps, norm) = x.epsilon_norm();
            let s = x.norm_squared();
            // ε·|s| = s holds exactly; the sqrt/square round trip only to ulps.
            prop_assert_eq!(f64::from(eps) * s.abs(), s);
            prop_assert!((norm * norm - s.abs()).abs() <= 4.0 * f64::EPSILON * s.abs());
        }
    }
}
