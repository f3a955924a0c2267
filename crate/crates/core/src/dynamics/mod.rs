//! Angular-momentum chain, torque models and the assembled equations of
//! motion for the shell.

pub mod chain;
mod plant;
mod torques;

pub use chain::{AngleSource, Axis, ChainState, Frame, FrameChain, JointState, RelativeMotion};
pub use plant::{Evaluation, ExternalTorque, Plant, TorqueBreakdown};
pub use torques::{
    euler_rates, euler_rates_printed, euler_rates_regularized, friction_torque, friction_torque_in_mode,
    gravity_torque, twist_component, virtual_torque, FrictionMode, FrictionTorque, GIMBAL_LOCK_SIN, GRAVITY,
    STICTION_REENTRY_SLIP,
};

use crate::error::{Error, Result};
use crate::geometry::EllipsoidShape;

/// Physical parameters of the robot. Inertias are principal moments in each
/// body's own frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotParams {
    pub theta_xy: f64,
    pub theta_z: f64,
    pub mass: f64,
    pub r_long: f64,
    pub r_short: f64,
    pub theta_phi_x: f64,
    pub theta_phi_y: f64,
    pub theta_phi_z: f64,
    pub theta_psi_x: f64,
    pub theta_psi_z: f64,
    pub theta_g_x: f64,
    pub theta_g_z: f64,
    /// Stiction threshold for the twist torque (N·m).
    pub tau_fcrit: f64,
    /// Stokes twist-friction coefficient (N·m·s).
    pub rho_f: f64,
}

impl RobotParams {
    /// A desk-sized egg: 12 cm by 8 cm shell with a small gimballed rotor.
    pub fn example() -> Self {
        Self {
            theta_xy: 4.0e-3,
            theta_z: 2.5e-3,
            mass: 0.8,
            r_long: 0.12,
            r_short: 0.08,
            theta_phi_x: 2.0e-4,
            theta_phi_y: 2.0e-4,
            theta_phi_z: 2.0e-4,
            theta_psi_x: 6.0e-4,
            theta_psi_z: 1.0e-4,
            theta_g_x: 0.5e-3,
            theta_g_z: 1.0e-3,
            tau_fcrit: 0.01,
            rho_f: 0.02,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("theta_xy", self.theta_xy),
            ("theta_z", self.theta_z),
            ("theta_phi_x", self.theta_phi_x),
            ("theta_phi_y", self.theta_phi_y),
            ("theta_phi_z", self.theta_phi_z),
            ("theta_psi_x", self.theta_psi_x),
            ("theta_psi_z", self.theta_psi_z),
            ("theta_g_x", self.theta_g_x),
            ("theta_g_z", self.theta_g_z),
            ("mass", self.mass),
            ("r_long", self.r_long),
            ("r_short", self.r_short),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        for (field, v) in [("tau_fcrit", self.tau_fcrit), ("rho_f", self.rho_f)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite and >= 0, got {v}"),
                });
            }
        }
        if self.r_long < self.r_short {
            return Err(Error::InvalidParam {
                field: "r_long",
                reason: format!("must not be shorter than r_short ({} < {})", self.r_long, self.r_short),
            });
        }
        Ok(())
    }

    pub fn shape(&self) -> Result<EllipsoidShape> {
        EllipsoidShape::new(self.r_long, self.r_short)
    }

    /// Whether the combined inertia is independent of the gimbal pose.
    pub fn is_pose_invariant(&self, tol: f64) -> bool {
        (self.theta_phi_x - self.theta_phi_y).abs() <= tol
            && (self.theta_psi_x + self.theta_g_x - self.theta_psi_z - self.theta_g_z).abs() <= tol
    }
}
