use crate::error::Result;
use crate::geometry::{EllipsoidShape, Matrix3, Vector3};
use crate::kinematics::{center_offset, AttitudeState, SlipState};

use super::chain::{ChainState, FrameChain};
use super::torques::{friction_torque_in_mode, gravity_torque, virtual_torque, FrictionMode};
use super::RobotParams;

/// Torques applied from outside the model (test rigs, disturbances).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExternalTorque {
    /// Shell frame.
    pub shell: Vector3,
    /// About the world vertical.
    pub world_twist: f64,
}

/// All torques acting on the shell at one instant, shell frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueBreakdown {
    pub t_mec: Vector3,
    pub t_gravity: Vector3,
    pub t_virtual: Vector3,
    pub t_friction: Vector3,
    pub t_applied: Vector3,
    /// World-vertical component of the torque the contact has to react.
    pub t_f: f64,
    pub friction_mode: FrictionMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub omega_dot: Vector3,
    /// Time derivative of the twist slip rate.
    pub slip_accel: f64,
    pub theta_com: Matrix3,
    pub b: Vector3,
    pub angular_momentum: Vector3,
    pub torques: TorqueBreakdown,
}

/// Robot model with switchable gravity and twist friction.
///
/// Balance of angular momentum in the shell frame:
/// `theta_com * w' + b = T_G + T_applied + T_friction - w x L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plant {
    pub chain: FrameChain,
    pub params: RobotParams,
    pub shape: EllipsoidShape,
    pub gravity: bool,
    pub friction: bool,
}

impl Plant {
    pub fn new(params: RobotParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            chain: FrameChain::from_params(&params),
            shape: params.shape()?,
            params,
            gravity: true,
            friction: true,
        })
    }

    pub fn with_gravity(mut self, on: bool) -> Self {
        self.gravity = on;
        self
    }

    pub fn with_friction(mut self, on: bool) -> Self {
        self.friction = on;
        self
    }

    /// Moment of inertia of the whole robot about the vertical through the
    /// contact point.
    pub fn twist_inertia(&self, att: &AttitudeState, theta_com: &Matrix3) -> f64 {
        let up = att.shell_to_world().transpose() * Vector3::z();
        let offset = center_offset(att, &self.shape);
        let d2 = offset.x * offset.x + offset.y * offset.y;
        up.dot(&(theta_com * up)) + self.params.mass * d2
    }

    /// Angular acceleration, slip acceleration and torque breakdown. The
    /// friction torque follows `mode`; with friction disabled no friction
    /// torque acts and the slip rate is free.
    pub fn evaluate(
        &self,
        att: &AttitudeState,
        slip: &SlipState,
        state: &ChainState,
        applied: &ExternalTorque,
        mode: FrictionMode,
    ) -> Result<Evaluation> {
        let (theta_com, b) = self.chain.factorize_tmec(state)?;
        let l = self.chain.total_angular_momentum(state);
        let a = att.shell_to_world();

        let t_gravity = if self.gravity {
            gravity_torque(att, &self.shape, self.params.mass)
        } else {
            Vector3::zeros()
        };
        let t_applied = applied.shell + a.transpose() * Vector3::new(0.0, 0.0, applied.world_twist);
        let t_virtual = virtual_torque(&state.omega, &l);
        let drive = t_gravity + t_applied - b - t_virtual;

        let (t_friction, t_f, friction_mode, rho) = if self.friction {
            let f = friction_torque_in_mode(&drive, att, slip, &self.params, mode);
            (f.torque, f.t_f, f.mode, self.params.rho_f)
        } else {
            (Vector3::zeros(), (a * drive).z, FrictionMode::Stokes, 0.0)
        };

        let omega_dot = theta_com
            .lu()
            .solve(&(drive + t_friction))
            .expect("inertia checked invertible");

        let slip_accel = match friction_mode {
            FrictionMode::Stiction => 0.0,
            FrictionMode::Stokes => (t_f - rho * slip.gamma_slip_rate) / self.twist_inertia(att, &theta_com),
        };

        Ok(Evaluation {
            omega_dot,
            slip_accel,
            theta_com,
            b,
            angular_momentum: l,
            torques: TorqueBreakdown {
                t_mec: theta_com * omega_dot + b,
                t_gravity,
                t_virtual,
                t_friction,
                t_applied,
                t_f,
                friction_mode,
            },
        })
    }

    /// Shell angular acceleration with the friction mode classified from the
    /// current state.
    pub fn angular_acceleration(
        &self,
        att: &AttitudeState,
        slip: &SlipState,
        state: &ChainState,
        applied: &ExternalTorque,
    ) -> Result<Vector3> {
        let mode = if slip.gamma_slip_rate == 0.0 {
            // probe the twist torque to decide whether the contact holds
            let probe = self.evaluate(att, slip, state, applied, FrictionMode::Stiction)?;
            FrictionMode::classify(probe.torques.t_f, 0.0, self.params.tau_fcrit)
        } else {
            FrictionMode::Stokes
        };
        Ok(self.evaluate(att, slip, state, applied, mode)?.omega_dot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::chain::JointState;
    use crate::dynamics::torques::twist_component;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn plant() -> Plant {
        Plant::new(RobotParams::example()).unwrap()
    }

    fn random_inputs(rng: &mut ChaCha8Rng) -> (AttitudeState, SlipState, ChainState, ExternalTorque) {
        let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
        let att = AttitudeState::at_rest(u(-3.0, 3.0), u(0.1, 3.0), u(-3.0, 3.0));
        let slip = SlipState {
            gamma_slip_rate: u(-1.0, 1.0),
        };
        let state = ChainState {
            phi: JointState::new(u(-3.0, 3.0), u(-2.0, 2.0), u(-2.0, 2.0)),
            psi: JointState::new(u(-3.0, 3.0), u(-2.0, 2.0), u(-2.0, 2.0)),
            rho: JointState::new(u(-3.0, 3.0), u(-300.0, 300.0), u(-50.0, 50.0)),
            omega: Vector3::new(u(-2.0, 2.0), u(-2.0, 2.0), u(-2.0, 2.0)),
            omega_dot: Vector3::zeros(),
        };
        let applied = ExternalTorque {
            shell: Vector3::new(u(-0.1, 0.1), u(-0.1, 0.1), u(-0.1, 0.1)),
            world_twist: u(-0.05, 0.05),
        };
        (att, slip, state, applied)
    }

    #[test]
    fn quiet_state_has_no_acceleration() {
        let p = plant();
        let att = AttitudeState::at_rest(0.4, 0.0, 1.0);
        let a = p
            .angular_acceleration(
                &att,
                &SlipState::default(),
                &ChainState::default(),
                &ExternalTorque::default(),
            )
            .unwrap();
        assert_eq!(a, Vector3::zeros());
    }

    #[test]
    fn balance_residual_vanishes() {
        let p = plant();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..200 {
            let (att, slip, state, applied) = random_inputs(&mut rng);
            let mode = if i % 2 == 0 {
                FrictionMode::Stiction
            } else {
                FrictionMode::Stokes
            };
            let e = p.evaluate(&att, &slip, &state, &applied, mode).unwrap();
            let t = e.torques;
            let rhs = t.t_gravity + t.t_applied + t.t_friction - t.t_virtual;
            let residual = e.theta_com * e.omega_dot + e.b - rhs;
            assert!(residual.norm() < 1e-10 * (1.0 + rhs.norm()));
            // the reported mechanical torque is the recursive one at this w'
            let tmec = p.chain.mechanical_torque(&ChainState {
                omega_dot: e.omega_dot,
                ..state
            });
            assert!((tmec - t.t_mec).norm() < 1e-10 * (1.0 + tmec.norm()));
        }
    }

    #[test]
    fn stiction_removes_vertical_torque() {
        let p = plant();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let (att, _, state, applied) = random_inputs(&mut rng);
            let e = p
                .evaluate(&att, &SlipState::default(), &state, &applied, FrictionMode::Stiction)
                .unwrap();
            let t = e.torques;
            let net = t.t_gravity + t.t_applied + t.t_friction - t.t_virtual - e.b;
            assert!(twist_component(&net, &att).abs() < 1e-12);
            assert_eq!(e.slip_accel, 0.0);
        }
    }

    #[test]
    fn stokes_slip_relaxes() {
        let p = plant().with_gravity(false);
        let att = AttitudeState::at_rest(0.0, FRAC_PI_2, 0.0);
        let slip = SlipState { gamma_slip_rate: 1.0 };
        let e = p
            .evaluate(
                &att,
                &slip,
                &ChainState::default(),
                &ExternalTorque::default(),
                FrictionMode::Stokes,
            )
            .unwrap();
        assert!(e.slip_accel < 0.0);
        let theta = p.twist_inertia(&att, &e.theta_com);
        assert_abs_diff_eq!(e.slip_accel, -p.params.rho_f / theta, epsilon = 1e-12);
    }

    #[test]
    fn twist_inertia_upright_is_axial() {
        let p = plant();
        let att = AttitudeState::at_rest(0.3, 0.0, 0.2);
        let (theta, _) = p.chain.factorize_tmec(&ChainState::default()).unwrap();
        assert_abs_diff_eq!(p.twist_inertia(&att, &theta), theta[(2, 2)], epsilon = 1e-15);
    }

    #[test]
    fn gyroscopic_precession_balances_torque() {
        // A rotor spinning with momentum H about shell z, loaded by T about x,
        // is in steady precession at w = T/H about y.
        let mut params = RobotParams::example();
        params.theta_g_z = 1e-3;
        params.theta_psi_z = params.theta_psi_x + params.theta_g_x - params.theta_g_z;
        let p = Plant::new(params).unwrap().with_gravity(false).with_friction(false);
        let att = AttitudeState::at_rest(0.0, FRAC_PI_2, 0.0);
        let spin = 500.0;
        let torque = 0.01;
        let h = params.theta_g_z * spin;
        let applied = ExternalTorque {
            shell: Vector3::new(torque, 0.0, 0.0),
            world_twist: 0.0,
        };
        let still = ChainState {
            rho: JointState::new(0.0, spin, 0.0),
            ..Default::default()
        };
        let at_rest = p
            .evaluate(&att, &SlipState::default(), &still, &applied, FrictionMode::Stokes)
            .unwrap();
        let best = (0..=400)
            .map(|k| 0.01 + 1e-4 * k as f64)
            .min_by(|a, b| {
                let acc = |w: f64| {
                    let s = ChainState {
                        omega: Vector3::new(0.0, w, 0.0),
                        ..still
                    };
                    p.evaluate(&att, &SlipState::default(), &s, &applied, FrictionMode::Stokes)
                        .unwrap()
                        .omega_dot
                        .norm()
                };
                acc(*a).total_cmp(&acc(*b))
            })
            .unwrap();
        let expected = torque / h;
        assert!((best - expected).abs() / expected < 0.05, "{best} vs {expected}");
        assert!(at_rest.omega_dot.norm() > 1.0);
    }
}
