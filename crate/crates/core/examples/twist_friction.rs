//! A twist torque pulse about the vertical: the contact sticks below the
//! threshold, slips while the pulse exceeds it and the slip dies out under
//! viscous friction afterwards.

use std::f64::consts::FRAC_PI_2;

use egg_sim::dynamics::{Plant, RobotParams};
use egg_sim::geometry::Vector3;
use egg_sim::integrator::{simulate, ActuatorProfile, RunOptions, ScalarProfile, SimState};
use egg_sim::kinematics::{AttitudeState, SlipState};

fn main() -> egg_sim::Result<()> {
    let params = RobotParams::example();
    let plant = Plant::new(params)?.with_gravity(false);
    let profile = ActuatorProfile {
        twist: ScalarProfile::spline(vec![0.0, 1.0, 1.5, 1.6, 4.0], vec![0.0, 0.02, 0.02, 0.0, 0.0])?,
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
        t_end: 4.0,
        dt: 1e-4,
        sample_every: 2000,
    };
    println!(
        "threshold {} N*m, viscous coefficient {}",
        params.tau_fcrit, params.rho_f
    );
    println!("{:>5} {:>10} {:>10} {:>12}", "t", "twist", "mode", "slip rate");
    for s in simulate(&start, &profile, &plant, &opts)?.samples {
        println!(
            "{:>5.2} {:>10.5} {:>10} {:>12.4e}",
            s.state.time, s.torques.t_f, s.torques.friction_mode, s.state.slip.gamma_slip_rate
        );
    }
    Ok(())
}
