//! Rotation conventions and the shell geometry of a prolate ellipsoid of
//! revolution.
//!
//! The shell's symmetry (long) axis is the local `z'` axis. Surface points
//! are addressed by a polar angle `beta` measured from that axis and an
//! azimuth `alpha` around it. The contact point with a flat ground is
//! characterised by its axial coordinate `z_p` and the contact angle `beta_p`
//! between the long axis and the center-to-contact direction.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Vector3 = nalgebra::Vector3<f64>;

/// A 3x3 proper rotation (orthonormal, det = +1). Built only by the
/// constructors in this module and products of them.
pub type RotationMatrix3 = nalgebra::Matrix3<f64>;

pub type Matrix3 = nalgebra::Matrix3<f64>;

/// Active rotation by `a` about the x axis.
pub fn rot_x(a: f64) -> RotationMatrix3 {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Active rotation by `b` about the z axis.
pub fn rot_z(b: f64) -> RotationMatrix3 {
    let (s, c) = b.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// `Rz(alpha) * Rx(beta) * Rz(gamma)`.
pub fn local_from_global(alpha: f64, beta: f64, gamma: f64) -> RotationMatrix3 {
    rot_z(alpha) * rot_x(beta) * rot_z(gamma)
}

/// Inverse of [`local_from_global`]: `Rz(-gamma) * Rx(-beta) * Rz(-alpha)`.
pub fn global_from_local(alpha: f64, beta: f64, gamma: f64) -> RotationMatrix3 {
    rot_z(-gamma) * rot_x(-beta) * rot_z(-alpha)
}

/// Cross-product matrix: `skew(a) * b == a.cross(&b)`.
pub fn skew(v: &Vector3) -> Matrix3 {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`skew`] on the antisymmetric part of `m`.
pub fn vee(m: &Matrix3) -> Vector3 {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Semi-axes of the shell. `r_long` lies along the local `z'` axis, the two
/// equatorial semi-axes both equal `r_short`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidShape {
    r_long: f64,
    r_short: f64,
}

/// Where the shell touches the ground for a given inclination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPoint {
    /// Axial coordinate of the contact point (m).
    pub z_p: f64,
    /// Angle between the long axis and the center-to-contact direction (rad).
    pub beta_p: f64,
    /// Center-to-contact distance `|r(beta_p)|` (m).
    pub radial_distance: f64,
    /// Radius of the circle of latitude through the contact point (m).
    pub ring_radius: f64,
}

/// Derivatives of the contact quantities with respect to the inclination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSlope {
    pub dz_p: f64,
    pub dbeta_p: f64,
    pub dradial: f64,
}

impl EllipsoidShape {
    pub fn new(r_long: f64, r_short: f64) -> Result<Self> {
        if !(r_short.is_finite() && r_long.is_finite()) {
            return Err(Error::InvalidShape("semi-axes must be finite".into()));
        }
        if r_short <= 0.0 {
            return Err(Error::InvalidShape(format!("r_short must be positive, got {r_short}")));
        }
        if r_long < r_short {
            return Err(Error::InvalidShape(format!(
                "r_long ({r_long}) must not be smaller than r_short ({r_short})"
            )));
        }
        Ok(Self { r_long, r_short })
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        Self::new(radius, radius)
    }

    pub fn r_long(&self) -> f64 {
        self.r_long
    }

    pub fn r_short(&self) -> f64 {
        self.r_short
    }

    /// Distance from the center to the surface at polar angle `beta` from the
    /// long axis; `r_long` at the poles, `r_short` on the equator.
    pub fn radial_distance(&self, beta: f64) -> f64 {
        let (s, c) = beta.sin_cos();
        let (r1, r2) = (self.r_long, self.r_short);
        r1 * r2 / (r1 * r1 * s * s + r2 * r2 * c * c).sqrt()
    }

    /// Radius of the circle of latitude centered at `(0, 0, z)`.
    pub fn ring_radius_of_z(&self, z: f64) -> Result<f64> {
        let (r1, r2) = (self.r_long, self.r_short);
        if z.is_nan() || z.abs() > r1 * (1.0 + 1e-12) {
            return Err(Error::OutsideShell { z, r_long: r1 });
        }
        let u = (z / r1).clamp(-1.0, 1.0);
        Ok(r2 * ((1.0 - u) * (1.0 + u)).sqrt())
    }

    /// Same circle radius as [`ring_radius_of_z`](Self::ring_radius_of_z),
    /// parameterised by the polar angle.
    pub fn ring_radius_of_beta(&self, beta: f64) -> f64 {
        let (r1, r2) = (self.r_long, self.r_short);
        let z = self.radial_distance(beta) * beta.cos();
        let u = (z / r1).clamp(-1.0, 1.0);
        r2 * ((1.0 - u) * (1.0 + u)).sqrt()
    }

    /// Local coordinates of the surface point at azimuth `alpha_s` and polar
    /// angle `beta_s`.
    pub fn surface_point(&self, alpha_s: f64, beta_s: f64) -> Vector3 {
        let r = self.radial_distance(beta_s);
        let (sb, cb) = beta_s.sin_cos();
        let (sa, ca) = alpha_s.sin_cos();
        r * Vector3::new(sb * ca, sb * sa, cb)
    }

    /// Implicit-equation residual `x²/r2² + y²/r2² + z²/r1² - 1`.
    pub fn implicit_residual(&self, p: &Vector3) -> f64 {
        let (r1, r2) = (self.r_long, self.r_short);
        (p.x * p.x + p.y * p.y) / (r2 * r2) + p.z * p.z / (r1 * r1) - 1.0
    }

    fn support(&self, beta_v: f64) -> f64 {
        let (s, c) = beta_v.sin_cos();
        let (r1, r2) = (self.r_long, self.r_short);
        (r1 * r1 * c * c + r2 * r2 * s * s).sqrt()
    }

    /// Contact point for inclination `beta_v in [0, pi]`: the point of the
    /// shell furthest along the vertical.
    pub fn contact_point(&self, beta_v: f64) -> ContactPoint {
        let (s, c) = beta_v.sin_cos();
        let (r1, r2) = (self.r_long, self.r_short);
        let q = r2 / r1;
        let z_p = r1 * c / (c * c + q * q * s * s).sqrt();
        let u = (z_p / r1).clamp(-1.0, 1.0);
        let ring_radius = r2 * ((1.0 - u) * (1.0 + u)).sqrt();
        let beta_p = ring_radius.atan2(z_p);
        ContactPoint {
            z_p,
            beta_p,
            radial_distance: self.radial_distance(beta_p),
            ring_radius,
        }
    }

    /// Analytic derivatives of `z_p`, `beta_p` and `|r(beta_p)|` with respect
    /// to `beta_v`.
    pub fn contact_slope(&self, beta_v: f64) -> ContactSlope {
        let (s, c) = beta_v.sin_cos();
        let (r1, r2) = (self.r_long, self.r_short);
        let big_s = self.support(beta_v);
        let ds = (r2 * r2 - r1 * r1) * s * c / big_s;
        // z_p = r1² c / S, r_alpha = r2² s / S
        let z_p = r1 * r1 * c / big_s;
        let ring = r2 * r2 * s / big_s;
        let dz_p = r1 * r1 * (-s * big_s - c * ds) / (big_s * big_s);
        let dring = r2 * r2 * (c * big_s - s * ds) / (big_s * big_s);
        let rho2 = z_p * z_p + ring * ring;
        let dbeta_p = (z_p * dring - ring * dz_p) / rho2;
        let dradial = (z_p * dz_p + ring * dring) / rho2.sqrt();
        ContactSlope { dz_p, dbeta_p, dradial }
    }

    /// Height of the center above the ground at inclination `beta_v`.
    pub fn center_height(&self, beta_v: f64) -> f64 {
        let cp = self.contact_point(beta_v);
        cp.radial_distance * (beta_v - cp.beta_p).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn assert_rotation(r: &RotationMatrix3) {
        assert_abs_diff_eq!(r.transpose() * r, Matrix3::identity(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn elementary_rotations() {
        assert_eq!(rot_x(0.0), Matrix3::identity());
        assert_eq!(rot_z(0.0), Matrix3::identity());
        assert_abs_diff_eq!(rot_x(FRAC_PI_2) * Vector3::y(), Vector3::z(), epsilon = 1e-15);
        assert_abs_diff_eq!(rot_z(FRAC_PI_2) * Vector3::x(), Vector3::y(), epsilon = 1e-15);
        assert_abs_diff_eq!(rot_z(-0.7), rot_z(0.7).transpose(), epsilon = 1e-15);
    }

    #[test]
    fn euler_pair() {
        assert_abs_diff_eq!(local_from_global(0.0, 0.0, 0.0), Matrix3::identity(), epsilon = 1e-15);
        assert_abs_diff_eq!(local_from_global(0.4, 0.0, -1.1), rot_z(0.4 - 1.1), epsilon = 1e-15);
    }

    #[test]
    fn radial_distance_poles_and_equator() {
        let shape = EllipsoidShape::new(2.0, 1.0).unwrap();
        assert_abs_diff_eq!(shape.radial_distance(0.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(shape.radial_distance(FRAC_PI_2), 1.0, epsilon = 1e-15);
        let ball = EllipsoidShape::sphere(1.0).unwrap();
        for b in [0.0, 0.3, 1.2, 2.9] {
            assert_abs_diff_eq!(ball.radial_distance(b), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn ring_radius_values() {
        let shape = EllipsoidShape::new(2.0, 1.0).unwrap();
        assert_abs_diff_eq!(shape.ring_radius_of_z(0.0).unwrap(), 1.0);
        assert_eq!(shape.ring_radius_of_z(2.0).unwrap(), 0.0);
        assert_eq!(shape.ring_radius_of_z(-2.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            shape.ring_radius_of_z(1.0).unwrap(),
            0.8660254037844386,
            epsilon = 1e-15
        );
        assert!(matches!(shape.ring_radius_of_z(2.5), Err(Error::OutsideShell { .. })));
    }

    #[test]
    fn shape_validation() {
        assert!(EllipsoidShape::new(1.0, 2.0).is_err());
        assert!(EllipsoidShape::new(1.0, 0.0).is_err());
        assert!(EllipsoidShape::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn surface_point_on_shell() {
        let shape = EllipsoidShape::new(2.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            shape.surface_point(0.3, 0.0),
            Vector3::new(0.0, 0.0, 2.0),
            epsilon = 1e-15
        );
        for (a, b) in [(0.0, 0.4), (1.0, 1.3), (-2.0, 2.7), (3.0, FRAC_PI_2)] {
            let p = shape.surface_point(a, b);
            assert!(shape.implicit_residual(&p).abs() < 1e-9);
        }
    }

    #[test]
    fn contact_point_examples() {
        let shape = EllipsoidShape::new(2.0, 1.0).unwrap();
        let up = shape.contact_point(0.0);
        assert_abs_diff_eq!(up.z_p, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(up.beta_p, 0.0, epsilon = 1e-15);

        let side = shape.contact_point(FRAC_PI_2);
        assert_abs_diff_eq!(side.z_p, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(side.beta_p, FRAC_PI_2, epsilon = 1e-15);

        // Values computed independently by direct evaluation and a
        // 1e6-point lowest-point search.
        let cp = shape.contact_point(45f64.to_radians());
        assert_abs_diff_eq!(cp.z_p, 1.7888543819998317, epsilon = 1e-12);
        assert_abs_diff_eq!(cp.ring_radius, 0.44721359549995804, epsilon = 1e-12);
        assert_abs_diff_eq!(cp.beta_p, 0.2449786631268642, epsilon = 1e-12);
        assert_abs_diff_eq!(cp.radial_distance, 1.8439088914585775, epsilon = 1e-12);
        assert!(
            shape
                .implicit_residual(&Vector3::new(cp.ring_radius, 0.0, cp.z_p))
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn contact_slope_matches_finite_differences() {
        let shape = EllipsoidShape::new(1.7, 0.9).unwrap();
        let h = 1e-6;
        for i in 1..40 {
            let b = i as f64 * PI / 40.0;
            let sl = shape.contact_slope(b);
            let (p, m) = (shape.contact_point(b + h), shape.contact_point(b - h));
            assert_abs_diff_eq!(sl.dz_p, (p.z_p - m.z_p) / (2.0 * h), epsilon = 1e-7);
            assert_abs_diff_eq!(sl.dbeta_p, (p.beta_p - m.beta_p) / (2.0 * h), epsilon = 1e-7);
            assert_abs_diff_eq!(
                sl.dradial,
                (p.radial_distance - m.radial_distance) / (2.0 * h),
                epsilon = 1e-7
            );
        }
    }

    #[test]
    fn center_height_is_support_function() {
        let shape = EllipsoidShape::new(2.0, 1.0).unwrap();
        assert_abs_diff_eq!(shape.center_height(0.0), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(shape.center_height(FRAC_PI_2), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            shape.center_height(45f64.to_radians()),
            1.5811388300841898,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wrap_angle_range() {
        assert_abs_diff_eq!(wrap_angle(PI), PI);
        assert_abs_diff_eq!(wrap_angle(-PI), PI);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI + 0.5), -PI + 0.5, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn rotations_are_proper(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
            assert_rotation(&rot_x(a));
            assert_rotation(&rot_z(a));
            assert_rotation(&local_from_global(a, b, c));
            assert_abs_diff_eq!(rot_x(a) * rot_x(b), rot_x(a + b), epsilon = 1e-12);
            assert_abs_diff_eq!(
                local_from_global(a, b, c) * global_from_local(a, b, c),
                Matrix3::identity(),
                epsilon = 1e-12
            );
        }

        #[test]
        fn ring_radius_routes_agree(r2 in 0.1..2.0f64, k in 1.0..3.0f64, b in 0.0..PI) {
            let shape = EllipsoidShape::new(r2 * k, r2).unwrap();
            let z = shape.radial_distance(b) * b.cos();
            let lhs = shape.ring_radius_of_z(z).unwrap();
            prop_assert!((lhs - shape.ring_radius_of_beta(b)).abs() < 1e-12);
        }

        #[test]
        fn sphere_contact_is_inclination(r in 0.1..3.0f64, b in 0.0..PI) {
            let shape = EllipsoidShape::sphere(r).unwrap();
            prop_assert!((shape.contact_point(b).beta_p - b).abs() < 1e-12);
        }

        #[test]
        fn prolate_contact_lags_inclination(r2 in 0.1..2.0f64, k in 1.01..3.0f64, b in 0.001..(FRAC_PI_2 - 0.001)) {
            let shape = EllipsoidShape::new(r2 * k, r2).unwrap();
            let cp = shape.contact_point(b);
            prop_assert!(cp.beta_p < b);
            prop_assert!(cp.beta_p >= 0.0);
            prop_assert!(shape.contact_point(b + 1e-4).beta_p > cp.beta_p);
        }
    }
}
