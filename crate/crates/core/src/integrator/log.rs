use std::io::{self, Write};

use super::{derivative, ActuatorProfile, SimState};
use crate::dynamics::{Plant, TorqueBreakdown};
use crate::error::Result;
use crate::geometry::Vector3;

/// Column names of the trajectory CSV, in order. Angles in radians, rates in
/// rad/s, lengths in m, torques in N·m (shell frame).
pub const CSV_COLUMNS: [&str; 36] = [
    "time",
    "alpha_v",
    "beta_v",
    "gamma_v",
    "alpha_rate",
    "beta_rate",
    "gamma_rate",
    "omega_x",
    "omega_y",
    "omega_z",
    "phi",
    "psi",
    "rho",
    "slip_rate",
    "x_p",
    "y_p",
    "cx",
    "cy",
    "cz",
    "t_mec_x",
    "t_mec_y",
    "t_mec_z",
    "t_gravity_x",
    "t_gravity_y",
    "t_gravity_z",
    "t_virtual_x",
    "t_virtual_y",
    "t_virtual_z",
    "t_friction_x",
    "t_friction_y",
    "t_friction_z",
    "t_applied_x",
    "t_applied_y",
    "t_applied_z",
    "t_f",
    "friction_mode",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// State with attitude rates filled in.
    pub state: SimState,
    pub torques: TorqueBreakdown,
    pub angular_momentum: Vector3,
}

impl Sample {
    pub fn record(state: &SimState, profile: &ActuatorProfile, plant: &Plant) -> Result<Self> {
        let d = derivative(state, profile, plant)?;
        Ok(Self {
            state: d.state,
            torques: d.evaluation.torques,
            angular_momentum: d.evaluation.angular_momentum,
        })
    }

    /// Angular momentum in world coordinates.
    pub fn world_momentum(&self) -> Vector3 {
        self.state.attitude.shell_to_world() * self.angular_momentum
    }

    fn numbers(&self) -> Vec<f64> {
        let s = &self.state;
        let a = &s.attitude;
        let t = &self.torques;
        let mut v = vec![
            s.time,
            a.alpha_v,
            a.beta_v,
            a.gamma_v,
            a.alpha_rate,
            a.beta_rate,
            a.gamma_rate,
            s.omega.x,
            s.omega.y,
            s.omega.z,
            s.phi,
            s.psi,
            s.rho,
            s.slip.gamma_slip_rate,
            s.track.x_p,
            s.track.y_p,
            s.track.cx,
            s.track.cy,
            s.track.cz,
        ];
        for vec in [t.t_mec, t.t_gravity, t.t_virtual, t.t_friction, t.t_applied] {
            v.extend(vec.iter());
        }
        v.push(t.t_f);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", CSV_COLUMNS.join(","))?;
        for s in &self.samples {
            let mut line = String::new();
            for x in s.numbers() {
                line.push_str(&format!("{x:.16e},"));
            }
            line.push_str(s.torques.friction_mode.as_str());
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}
