//! Torque models acting on the shell and the Euler-angle rate map.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{rot_z, EllipsoidShape, Vector3};
use crate::kinematics::{AttitudeState, SlipState};

use super::RobotParams;

/// Gravitational acceleration (m/s²).
pub const GRAVITY: f64 = 9.81;

/// Below this `|sin(beta)|` the Euler rate map is singular.
pub const GIMBAL_LOCK_SIN: f64 = 1e-6;

/// Slip rates below this magnitude allow the contact to re-enter stiction.
pub const STICTION_REENTRY_SLIP: f64 = 1e-8;

/// Gravity torque on the shell, shell frame. It points along the
/// inclination axis `Rz(-alpha_v) * x`, with magnitude
/// `mass * g * sin(beta_v) * |r(beta_p)|`.
pub fn gravity_torque(att: &AttitudeState, shape: &EllipsoidShape, mass: f64) -> Vector3 {
    let lever = shape.contact_point(att.beta_v).radial_distance;
    let magnitude = mass * GRAVITY * att.beta_v.sin() * lever;
    magnitude * (rot_z(-att.alpha_v) * Vector3::x())
}

/// `omega x L`.
pub fn virtual_torque(omega: &Vector3, l: &Vector3) -> Vector3 {
    omega.cross(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrictionMode {
    #[default]
    Stiction,
    Stokes,
}

impl FrictionMode {
    /// Stateless classification: stiction iff the twist torque is within the
    /// threshold and the contact is not slipping.
    pub fn classify(t_f: f64, slip_rate: f64, tau_fcrit: f64) -> Self {
        if t_f.abs() <= tau_fcrit && slip_rate == 0.0 {
            FrictionMode::Stiction
        } else {
            FrictionMode::Stokes
        }
    }

    /// Mode transition with hysteresis: break away once the twist torque
    /// exceeds the threshold, stick again only when it is back within the
    /// threshold and the slip has died out.
    pub fn next(self, t_f: f64, slip_rate: f64, tau_fcrit: f64) -> Self {
        match self {
            FrictionMode::Stiction if t_f.abs() > tau_fcrit => FrictionMode::Stokes,
            FrictionMode::Stokes if t_f.abs() <= tau_fcrit && slip_rate.abs() < STICTION_REENTRY_SLIP => {
                FrictionMode::Stiction
            }
            m => m,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FrictionMode::Stiction => "stiction",
            FrictionMode::Stokes => "stokes",
        }
    }
}

impl fmt::Display for FrictionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// World-vertical component of a shell-frame torque.
pub fn twist_component(total_local: &Vector3, att: &AttitudeState) -> f64 {
    (att.shell_to_world() * total_local).z
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionTorque {
    /// Shell frame.
    pub torque: Vector3,
    pub t_f: f64,
    pub mode: FrictionMode,
}

/// Friction torque for a given mode. `total_local` is the shell-frame torque
/// the ground has to react; stiction cancels its vertical component, Stokes
/// friction opposes the slip rate.
pub fn friction_torque_in_mode(
    total_local: &Vector3,
    att: &AttitudeState,
    slip: &SlipState,
    params: &RobotParams,
    mode: FrictionMode,
) -> FrictionTorque {
    let a = att.shell_to_world();
    let t_f = (a * total_local).z;
    let world = match mode {
        FrictionMode::Stiction => Vector3::new(0.0, 0.0, -t_f),
        FrictionMode::Stokes => Vector3::new(0.0, 0.0, -params.rho_f * slip.gamma_slip_rate),
    };
    FrictionTorque {
        torque: a.transpose() * world,
        t_f,
        mode,
    }
}

/// Friction torque with the mode chosen by [`FrictionMode::classify`].
pub fn friction_torque(
    total_local: &Vector3,
    att: &AttitudeState,
    slip: &SlipState,
    params: &RobotParams,
) -> FrictionTorque {
    let t_f = twist_component(total_local, att);
    let mode = FrictionMode::classify(t_f, slip.gamma_slip_rate, params.tau_fcrit);
    friction_torque_in_mode(total_local, att, slip, params, mode)
}

fn zxz_inverse(omega: &Vector3, sin_beta: f64, cos_beta: f64, last: f64) -> (f64, f64, f64) {
    let (sg, cg) = last.sin_cos();
    let first = (omega.x * sg + omega.y * cg) / sin_beta;
    let mid = omega.x * cg - omega.y * sg;
    let third = omega.z - first * cos_beta;
    (first, mid, third)
}

/// Angle rates of `R = Rz(alpha) Rx(beta) Rz(gamma)` for the body rate
/// `omega` defined by `dR/dt = R * skew(omega)`.
pub fn euler_rates(omega: &Vector3, beta: f64, gamma: f64) -> Result<(f64, f64, f64)> {
    let (sb, cb) = beta.sin_cos();
    if sb.abs() < GIMBAL_LOCK_SIN {
        return Err(Error::GimbalLock { sin_beta: sb.abs() });
    }
    Ok(zxz_inverse(omega, sb, cb, gamma))
}

/// [`euler_rates`] with `sin(beta)` clamped away from zero to
/// `±GIMBAL_LOCK_SIN`, so the rates stay finite at the poles.
pub fn euler_rates_regularized(omega: &Vector3, beta: f64, gamma: f64) -> (f64, f64, f64) {
    let (mut sb, cb) = beta.sin_cos();
    if sb.abs() < GIMBAL_LOCK_SIN {
        sb = if sb < 0.0 { -GIMBAL_LOCK_SIN } else { GIMBAL_LOCK_SIN };
    }
    zxz_inverse(omega, sb, cb, gamma)
}

/// The rate matrix in its originally printed form (no `1/sin(beta)`),
/// kept for comparison only. It agrees with [`euler_rates`] at
/// `beta = pi/2, gamma = 0`.
pub fn euler_rates_printed(omega: &Vector3, beta: f64, gamma: f64) -> (f64, f64, f64) {
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    (
        sb * sg * omega.x + sb * cg * omega.y + cb * omega.z,
        cg * omega.x - sg * omega.y,
        omega.z,
    )
}
