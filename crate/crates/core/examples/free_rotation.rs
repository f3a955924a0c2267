//! Torque-free tumbling with gravity and friction switched off. The world
//! frame angular momentum stays put while the body rate wanders.

use egg_sim::dynamics::Plant;
use egg_sim::geometry::Vector3;
use egg_sim::integrator::{simulate, ActuatorProfile, RunOptions, SimState};
use egg_sim::kinematics::{AttitudeState, SlipState};
use egg_sim::validation::generic_params;

fn main() -> egg_sim::Result<()> {
    let plant = Plant::new(generic_params())?.with_gravity(false).with_friction(false);
    let profile = ActuatorProfile::default();
    let start = SimState::new(
        &plant,
        &profile,
        0.0,
        AttitudeState::at_rest(0.3, 1.2, -0.2),
        Vector3::new(0.4, -0.3, 2.0),
        SlipState::default(),
        0.0,
    )?;
    let opts = RunOptions {
        t_end: 10.0,
        dt: 1e-4,
        sample_every: 10_000,
    };
    let traj = simulate(&start, &profile, &plant, &opts)?;
    let l0 = traj.samples[0].world_momentum();
    println!("{:>5} {:>30} {:>30} {:>10}", "t", "omega (shell)", "L (world)", "drift");
    for s in &traj.samples {
        let w = s.state.omega;
        let l = s.world_momentum();
        println!(
            "{:>5.1} {:>9.5} {:>9.5} {:>9.5}  {:>9.6} {:>9.6} {:>9.6} {:>10.2e}",
            s.state.time,
            w.x,
            w.y,
            w.z,
            l.x,
            l.y,
            l.z,
            (l - l0).norm() / l0.norm()
        );
    }
    Ok(())
}
