//! A spinning rotor held by frozen gimbals turns a steady torque on the shell
//! into precession at T / (theta_g_z * rho_rate).

use std::f64::consts::FRAC_PI_2;

use egg_sim::dynamics::{Plant, RobotParams};
use egg_sim::geometry::Vector3;
use egg_sim::integrator::{simulate, ActuatorProfile, RunOptions, ScalarProfile, SimState};
use egg_sim::kinematics::{AttitudeState, SlipState};

fn main() -> egg_sim::Result<()> {
    let params = RobotParams::example();
    let plant = Plant::new(params)?.with_gravity(false).with_friction(false);
    let torque = 0.01;
    println!("{:>10} {:>14} {:>14}", "rho_rate", "measured", "T/H");
    for spin in [200.0, 500.0, 1000.0] {
        let profile = ActuatorProfile {
            rho_rate: ScalarProfile::constant(spin),
            torque_x: ScalarProfile::constant(torque),
            ..Default::default()
        };
        let start = SimState::new(
            &plant,
            &profile,
            0.0,
            AttitudeState::at_rest(0.0, FRAC_PI_2, 0.0),
            Vector3::zeros(),
            SlipState::default(),
            0.0,
        )?;
        let opts = RunOptions {
            t_end: 5.0,
            dt: 1e-4,
            sample_every: 50_000,
        };
        let traj = simulate(&start, &profile, &plant, &opts)?;
        let heading = |i: usize| {
            let axis = traj.samples[i].state.attitude.shell_to_world() * Vector3::z();
            axis.y.atan2(axis.x)
        };
        let last = traj.samples.len() - 1;
        let rate = (heading(last) - heading(0)).abs() / traj.samples[last].state.time;
        println!("{spin:>10.0} {rate:>14.6} {:>14.6}", torque / (params.theta_g_z * spin));
    }
    Ok(())
}
