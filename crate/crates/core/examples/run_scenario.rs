//! Loads a scenario file, integrates it and prints a few trajectory rows
//! instead of writing the CSV.
//!
//! ```text
//! cargo run --example run_scenario -- crates/core/scenarios/gimbal_sweep.cfg
//! ```

use std::path::PathBuf;

use egg_sim::cli::ScenarioConfig;
use egg_sim::integrator::simulate;

fn main() -> egg_sim::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/gimbal_sweep.cfg"));
    let cfg = ScenarioConfig::load(&path)?;
    let sc = cfg.build()?;
    let traj = simulate(&sc.initial, &sc.profile, &sc.plant, &sc.run)?;
    println!("{}: {} samples", path.display(), traj.samples.len());
    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9} {:>9} {:>8}",
        "t", "beta_v", "gamma_v", "x_p", "y_p", "t_f", "mode"
    );
    let stride = (traj.samples.len() / 15).max(1);
    for s in traj.samples.iter().step_by(stride) {
        let st = &s.state;
        println!(
            "{:>6.3} {:>9.3} {:>9.3} {:>9.4} {:>9.4} {:>9.4} {:>8}",
            st.time,
            st.attitude.beta_v.to_degrees(),
            st.attitude.gamma_v.to_degrees(),
            st.track.x_p,
            st.track.y_p,
            s.torques.t_f,
            s.torques.friction_mode
        );
    }
    Ok(())
}
