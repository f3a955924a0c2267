//! The four-frame chain shell -> outer gimbal -> inner gimbal -> gyro.
//!
//! Every frame shares the common center of mass, so the chain is a pure
//! sequence of rotations. Angular velocities are propagated outward
//! (`w_n = w_n^r + R_n w_{n-1}`), angular momentum is accumulated inward
//! (`L_{n-1} = R_n^- L_n + Th_{n-1} w_{n-1}`) and the time derivative of both
//! passes gives the mechanical torque on the shell.

use crate::error::{Error, Result};
use crate::geometry::{rot_x, rot_z, skew, Matrix3, RotationMatrix3, Vector3};

use super::RobotParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    pub fn unit(self) -> Vector3 {
        match self {
            Axis::X => Vector3::x(),
            Axis::Z => Vector3::z(),
        }
    }

    pub fn rotation(self, angle: f64) -> RotationMatrix3 {
        match self {
            Axis::X => rot_x(angle),
            Axis::Z => rot_z(angle),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleSource {
    Phi,
    Psi,
    Rho,
}

/// Angle, rate and acceleration of one joint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointState {
    pub angle: f64,
    pub rate: f64,
    pub accel: f64,
}

impl JointState {
    pub fn new(angle: f64, rate: f64, accel: f64) -> Self {
        Self { angle, rate, accel }
    }
}

/// Joint motion of the actuator plus the shell's angular velocity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChainState {
    pub phi: JointState,
    pub psi: JointState,
    pub rho: JointState,
    /// Shell angular velocity, shell frame.
    pub omega: Vector3,
    /// Shell angular acceleration; only [`FrameChain::mechanical_torque`]
    /// reads it.
    pub omega_dot: Vector3,
}

impl ChainState {
    pub fn joint(&self, source: AngleSource) -> JointState {
        match source {
            AngleSource::Phi => self.phi,
            AngleSource::Psi => self.psi,
            AngleSource::Rho => self.rho,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Joint {
    pub axis: Axis,
    pub source: AngleSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    /// `None` for the shell, which is the root of the chain.
    pub joint: Option<Joint>,
    /// Principal inertia (diagonal of the tensor in the frame's own axes).
    pub inertia: Vector3,
}

/// Relative rotation of a frame with respect to its parent and its rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeMotion {
    pub rot: RotationMatrix3,
    pub rot_inv: RotationMatrix3,
    pub rot_dot: Matrix3,
    pub rot_inv_dot: Matrix3,
    pub rate: Vector3,
    pub rate_dot: Vector3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameChain {
    frames: [Frame; 4],
}

impl Frame {
    pub fn inertia_tensor(&self) -> Matrix3 {
        Matrix3::from_diagonal(&self.inertia)
    }

    /// `None` for the root frame.
    pub fn relative_motion(&self, state: &ChainState) -> Option<RelativeMotion> {
        let joint = self.joint?;
        let q = state.joint(joint.source);
        let e = joint.axis.unit();
        let gen = skew(&e);
        let rot = joint.axis.rotation(q.angle);
        let rot_inv = joint.axis.rotation(-q.angle);
        Some(RelativeMotion {
            rot,
            rot_inv,
            rot_dot: q.rate * gen * rot,
            rot_inv_dot: -q.rate * gen * rot_inv,
            rate: e * q.rate,
            rate_dot: e * q.accel,
        })
    }
}

impl FrameChain {
    /// Shell, outer ring (`Rz(phi)`), inner ring (`Rx(psi)`), gyro
    /// (`Rz(rho)`).
    pub fn from_params(p: &RobotParams) -> Self {
        let joint = |axis, source| Some(Joint { axis, source });
        Self {
            frames: [
                Frame {
                    joint: None,
                    inertia: Vector3::new(p.theta_xy, p.theta_xy, p.theta_z),
                },
                Frame {
                    joint: joint(Axis::Z, AngleSource::Phi),
                    inertia: Vector3::new(p.theta_phi_x, p.theta_phi_y, p.theta_phi_z),
                },
                Frame {
                    joint: joint(Axis::X, AngleSource::Psi),
                    inertia: Vector3::new(p.theta_psi_x, p.theta_psi_x, p.theta_psi_z),
                },
                Frame {
                    joint: joint(Axis::Z, AngleSource::Rho),
                    inertia: Vector3::new(p.theta_g_x, p.theta_g_x, p.theta_g_z),
                },
            ],
        }
    }

    pub fn frames(&self) -> &[Frame; 4] {
        &self.frames
    }

    fn motions(&self, state: &ChainState) -> [Option<RelativeMotion>; 4] {
        self.frames.map(|f| f.relative_motion(state))
    }

    /// Absolute angular velocity of every frame, each in its own coordinates.
    pub fn chain_omegas(&self, state: &ChainState) -> [Vector3; 4] {
        let motions = self.motions(state);
        let mut out = [state.omega; 4];
        for n in 1..4 {
            let m = motions[n].expect("non-root frame has a joint");
            out[n] = m.rate + m.rot * out[n - 1];
        }
        out
    }

    /// Total angular momentum about the common center, shell frame.
    pub fn total_angular_momentum(&self, state: &ChainState) -> Vector3 {
        let motions = self.motions(state);
        let omegas = self.chain_omegas(state);
        let mut l = self.frames[3].inertia_tensor() * omegas[3];
        for n in (1..4).rev() {
            let m = motions[n].expect("non-root frame has a joint");
            l = m.rot_inv * l + self.frames[n - 1].inertia_tensor() * omegas[n - 1];
        }
        l
    }

    /// Time derivative of the shell-frame angular momentum, using
    /// `state.omega_dot` for the shell's angular acceleration.
    pub fn mechanical_torque(&self, state: &ChainState) -> Vector3 {
        let motions = self.motions(state);
        let omegas = self.chain_omegas(state);

        let mut omega_dots = [state.omega_dot; 4];
        for n in 1..4 {
            let m = motions[n].expect("non-root frame has a joint");
            omega_dots[n] = m.rate_dot + m.rot_dot * omegas[n - 1] + m.rot * omega_dots[n - 1];
        }

        let mut l = self.frames[3].inertia_tensor() * omegas[3];
        let mut l_dot = self.frames[3].inertia_tensor() * omega_dots[3];
        for n in (1..4).rev() {
            let m = motions[n].expect("non-root frame has a joint");
            let th = self.frames[n - 1].inertia_tensor();
            l_dot = m.rot_inv_dot * l + m.rot_inv * l_dot + th * omega_dots[n - 1];
            l = m.rot_inv * l + th * omegas[n - 1];
        }
        l_dot
    }

    /// Combined inertia tensor multiplying the shell's angular acceleration:
    /// `R2^-(R3^-(R4^- Th4 R4 + Th3) R3 + Th2) R2 + Th1`.
    pub fn combined_inertia(&self, state: &ChainState) -> Matrix3 {
        let motions = self.motions(state);
        let mut acc = self.frames[3].inertia_tensor();
        for n in (1..4).rev() {
            let m = motions[n].expect("non-root frame has a joint");
            acc = m.rot_inv * acc * m.rot + self.frames[n - 1].inertia_tensor();
        }
        acc
    }

    /// Splits the mechanical torque as `T_mec = theta_com * omega_dot + b`.
    pub fn factorize_tmec(&self, state: &ChainState) -> Result<(Matrix3, Vector3)> {
        let theta_com = self.combined_inertia(state);
        check_invertible(&theta_com)?;
        let b = self.mechanical_torque(&ChainState {
            omega_dot: Vector3::zeros(),
            ..*state
        });
        Ok((theta_com, b))
    }
}

pub(crate) fn check_invertible(m: &Matrix3) -> Result<()> {
    let det = m.determinant();
    let scale = m.norm() / 3f64.sqrt();
    if !det.is_finite() || det.abs() <= 1e-12 * scale.powi(3) {
        return Err(Error::DegenerateInertia { det });
    }
    Ok(())
}
