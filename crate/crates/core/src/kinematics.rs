//! Rolling-contact velocity maps, motion of the shell center and the gimbal
//! motor mixing.

use crate::geometry::{rot_z, skew, EllipsoidShape, RotationMatrix3, Vector3};

/// Shell attitude relative to the world and its time rates.
///
/// `gamma_v` is the heading (rotation about the world vertical), `beta_v` the
/// inclination of the long axis and `alpha_v` the rotation of the shell about
/// its own long axis. See [`AttitudeState::shell_to_world`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AttitudeState {
    pub alpha_v: f64,
    pub beta_v: f64,
    pub gamma_v: f64,
    pub alpha_rate: f64,
    pub beta_rate: f64,
    pub gamma_rate: f64,
}

impl AttitudeState {
    pub fn at_rest(alpha_v: f64, beta_v: f64, gamma_v: f64) -> Self {
        Self {
            alpha_v,
            beta_v,
            gamma_v,
            ..Default::default()
        }
    }

    /// `Rz(gamma_v) * Rx(beta_v) * Rz(alpha_v)`; maps shell coordinates to
    /// world coordinates (world z up). The body angular velocity `omega`
    /// satisfies `d/dt A = A * skew(omega)`.
    pub fn shell_to_world(&self) -> RotationMatrix3 {
        crate::geometry::rot_z(self.gamma_v)
            * crate::geometry::rot_x(self.beta_v)
            * crate::geometry::rot_z(self.alpha_v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlipState {
    /// Twist slip rate about the world vertical (rad/s).
    pub gamma_slip_rate: f64,
}

/// Contact-point and center positions on the ground plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroundTrack {
    pub x_p: f64,
    pub y_p: f64,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl GroundTrack {
    /// Track with the contact point at `(x_p, y_p)` and the center placed
    /// consistently above it.
    pub fn above_contact(att: &AttitudeState, shape: &EllipsoidShape, x_p: f64, y_p: f64) -> Self {
        let o = center_offset(att, shape);
        Self {
            x_p,
            y_p,
            cx: x_p + o.x,
            cy: y_p + o.y,
            cz: o.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContactRates {
    pub gamma_v_rate: f64,
    pub x_p_rate: f64,
    pub y_p_rate: f64,
}

/// Rolling rates of the contact point. Uses `alpha_rate`, `beta_rate` and
/// `gamma_v` from `att`; the returned heading rate is the no-twist value plus
/// the slip rate.
pub fn rolling_rates(att: &AttitudeState, slip: &SlipState, shape: &EllipsoidShape) -> ContactRates {
    let cp = shape.contact_point(att.beta_v);
    let (sg, cg) = att.gamma_v.sin_cos();
    ContactRates {
        gamma_v_rate: att.alpha_rate * att.beta_v.cos() + slip.gamma_slip_rate,
        x_p_rate: cp.radial_distance * cg * att.beta_rate + cp.ring_radius * att.alpha_rate * sg,
        y_p_rate: -cp.radial_distance * sg * att.beta_rate + cp.ring_radius * att.alpha_rate * cg,
    }
}

// (|r| sin(theta), 0, |r| cos(theta)) with theta = beta_v - beta_p, in the
// heading-aligned ground frame.
fn offset_in_tilt_plane(shape: &EllipsoidShape, beta_v: f64) -> (Vector3, Vector3) {
    let cp = shape.contact_point(beta_v);
    let slope = shape.contact_slope(beta_v);
    let theta = beta_v - cp.beta_p;
    let dtheta = 1.0 - slope.dbeta_p;
    let (st, ct) = theta.sin_cos();
    let r = cp.radial_distance;
    let value = Vector3::new(r * st, 0.0, r * ct);
    let slope = Vector3::new(
        slope.dradial * st + r * ct * dtheta,
        0.0,
        slope.dradial * ct - r * st * dtheta,
    );
    (value, slope)
}

/// Vector from the contact point to the shell center.
pub fn center_offset(att: &AttitudeState, shape: &EllipsoidShape) -> Vector3 {
    rot_z(-att.gamma_v) * offset_in_tilt_plane(shape, att.beta_v).0
}

/// Velocity of the shell center: contact velocity plus the analytic time
/// derivative of [`center_offset`].
pub fn center_velocity(att: &AttitudeState, rates: &ContactRates, shape: &EllipsoidShape) -> Vector3 {
    let (v, dv) = offset_in_tilt_plane(shape, att.beta_v);
    let heading = rot_z(-att.gamma_v);
    let turn = -att.gamma_rate * skew(&Vector3::z()) * heading * v;
    Vector3::new(rates.x_p_rate, rates.y_p_rate, 0.0) + turn + heading * dv * att.beta_rate
}

/// Gimbal angles `(phi, psi)` from the two servo angles.
pub fn gimbal_angles(mu1: f64, mu2: f64) -> (f64, f64) {
    (mu1 + mu2, mu1 - mu2)
}

/// Inverse of [`gimbal_angles`].
pub fn motor_angles(phi: f64, psi: f64) -> (f64, f64) {
    (0.5 * (phi + psi), 0.5 * (phi - psi))
}
