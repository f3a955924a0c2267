//! Acceptance checks. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use egg_sim::dynamics::{
    euler_rates, euler_rates_regularized, FrameChain, FrictionMode, Plant, RobotParams, GIMBAL_LOCK_SIN,
};
use egg_sim::geometry::{rot_x, rot_z, vee, EllipsoidShape, Matrix3, Vector3};
use egg_sim::integrator::{derivative, simulate, ActuatorProfile, RunOptions, ScalarProfile, SimState, Trajectory};
use egg_sim::kinematics::{AttitudeState, SlipState};
use egg_sim::symbolic::{evaluate, expand_b, expand_l, Bindings, SymbolicSum, GOLDEN_B, GOLDEN_L};
use egg_sim::validation::{
    affine_residual, brute_force_contact_angle, contact_curve, euler_rate_error, free_rotation_drift, generic_params,
    inertia_invariance_error, random_chain_state,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: &Vector3, b: &Vector3) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn expansion_check(name: &str, expanded: &SymbolicSum, golden: &str, momentum: bool, budget: Duration) -> Outcome {
    let start = Instant::now();
    let listed = SymbolicSum::parse(golden).expect("golden listing parses");
    let structural = *expanded == listed;
    let params = generic_params();
    let chain = FrameChain::from_params(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut s = random_chain_state(&mut rng);
        if !momentum {
            s.omega_dot = Vector3::zeros();
        }
        let bind = Bindings::from_chain(&chain, &s);
        let reference = if momentum {
            chain.total_angular_momentum(&s)
        } else {
            chain.mechanical_torque(&s)
        };
        worst = worst.max(rel(&evaluate(expanded, &bind).unwrap(), &reference));
    }
    let elapsed = start.elapsed();
    outcome(
        structural && worst <= 1e-12 && elapsed < budget,
        format!(
            "{name}: {} terms, structural match {structural}, max rel err {worst:.2e}, {:.2} s",
            expanded.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let l = expand_l();
    let mut o = expansion_check("L", &l, GOLDEN_L, true, Duration::from_secs(5));
    o.passed &= l.len() == 10 && start.elapsed() < Duration::from_secs(5);
    o
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let b = expand_b().unwrap();
    let mut o = expansion_check("B", &b, GOLDEN_B, false, Duration::from_secs(10));
    o.passed &= start.elapsed() < Duration::from_secs(10);
    o
}

fn criterion_3() -> Outcome {
    let params = generic_params();
    let affine = affine_residual(&params, 1000, 21).unwrap();
    let mut symmetric = params;
    symmetric.theta_phi_y = symmetric.theta_phi_x;
    symmetric.theta_psi_z = symmetric.theta_psi_x + symmetric.theta_g_x - symmetric.theta_g_z;
    let invariance = inertia_invariance_error(&symmetric, 100, 22);
    // without the symmetry condition the combined inertia must move
    let asymmetric = inertia_invariance_error(&params, 100, 22);
    outcome(
        affine < 1e-12 && invariance < 1e-12 && asymmetric > 1e-6,
        format!("affine residual {affine:.2e}, symmetric pose variation {invariance:.2e}, generic {asymmetric:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_oracle = 0.0f64;
    let mut notes = Vec::new();
    for ratio in [1.0, 1.25, 1.5, 2.0] {
        let curve = contact_curve(ratio, 181).unwrap();
        let shape = EllipsoidShape::new(ratio, 1.0).unwrap();
        let (first, last) = (curve[0], curve[curve.len() - 1]);
        let endpoints = first.0 == 0.0 && first.1.abs() < 1e-9 && last.0 == 90.0 && (last.1 - 90.0).abs() < 1e-9;
        let monotone = curve.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 >= w[0].1);
        let below = curve.iter().all(|&(bv, bp)| bp <= bv + 1e-12);
        for &(bv, bp) in &curve {
            let oracle = brute_force_contact_angle(&shape, bv.to_radians());
            worst_oracle = worst_oracle.max((bp.to_radians() - oracle).abs());
        }
        if !(curve.len() == 181 && endpoints && monotone && below) {
            ok = false;
            notes.push(format!(
                "ratio {ratio}: endpoints {endpoints} monotone {monotone} below {below}"
            ));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        ok && worst_oracle <= 1e-6 && elapsed < 5.0,
        format!(
            "4 ratios x 181 inclinations, max |beta_p - oracle| {worst_oracle:.2e} rad, {elapsed:.2} s{}",
            notes.iter().map(|n| format!("; {n}")).collect::<String>()
        ),
    )
}

/// Final shell attitude matrix and body rate of a free rotation.
fn free_rotation_end(dt: f64, t_end: f64) -> (Matrix3, Vector3) {
    let plant = Plant::new(generic_params())
        .unwrap()
        .with_gravity(false)
        .with_friction(false);
    let profile = ActuatorProfile::default();
    let s0 = SimState::new(
        &plant,
        &profile,
        0.0,
        AttitudeState::at_rest(0.3, FRAC_PI_2, -0.2),
        Vector3::new(4.0, -3.0, 12.0),
        SlipState::default(),
        0.0,
    )
    .unwrap();
    let opts = RunOptions {
        t_end,
        dt,
        sample_every: usize::MAX,
    };
    let end = simulate(&s0, &profile, &plant, &opts).unwrap().samples.pop().unwrap();
    (end.state.attitude.shell_to_world(), end.state.omega)
}

fn criterion_5() -> Outcome {
    let drift = free_rotation_drift(10.0, 1e-4).unwrap();
    let runs: Vec<_> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| free_rotation_end(dt, 1.0))
        .collect();
    let diff = |a: &(Matrix3, Vector3), b: &(Matrix3, Vector3)| (a.0 - b.0).norm() + (a.1 - b.1).norm();
    let (e1, e2) = (diff(&runs[0], &runs[1]), diff(&runs[1], &runs[2]));
    let order = (e1 / e2).log2();
    outcome(
        drift < 1e-6 && (order - 4.0).abs() <= 0.2,
        format!("10 s world |L| drift {drift:.2e}, self-convergence order {order:.3} (differences {e1:.2e}, {e2:.2e})"),
    )
}

fn criterion_6() -> Outcome {
    let params = RobotParams::example();
    let plant = Plant::new(params).unwrap().with_gravity(false).with_friction(false);
    let spin = 500.0;
    let torque = 0.01;
    let profile = ActuatorProfile {
        rho_rate: ScalarProfile::constant(spin),
        torque_x: ScalarProfile::constant(torque),
        ..Default::default()
    };
    let s0 = SimState::new(
        &plant,
        &profile,
        0.0,
        AttitudeState::at_rest(0.0, FRAC_PI_2, 0.0),
        Vector3::zeros(),
        SlipState::default(),
        0.0,
    )
    .unwrap();
    let opts = RunOptions {
        t_end: 5.0,
        dt: 1e-4,
        sample_every: 10,
    };
    let traj = simulate(&s0, &profile, &plant, &opts).unwrap();
    // heading of the rotor axis (shell z) in the ground plane, unwrapped
    let mut heading = Vec::with_capacity(traj.samples.len());
    let mut prev: Option<f64> = None;
    for s in &traj.samples {
        let axis = s.state.attitude.shell_to_world() * Vector3::z();
        let mut h = axis.y.atan2(axis.x);
        if let Some(p) = prev {
            h = p + egg_sim::geometry::wrap_angle(h - p);
        }
        prev = Some(h);
        heading.push((s.state.time, h));
    }
    let rate = least_squares_slope(&heading).abs();
    let expected = torque / (params.theta_g_z * spin);
    let err = (rate - expected).abs() / expected;
    outcome(
        err <= 0.05,
        format!(
            "precession {rate:.5} rad/s vs {expected:.5} rad/s, relative error {:.2}%",
            err * 100.0
        ),
    )
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn twist_pulse_run() -> (Plant, ActuatorProfile, Trajectory) {
    let params = RobotParams::example();
    let plant = Plant::new(params).unwrap().with_gravity(false);
    let profile = ActuatorProfile {
        twist: ScalarProfile::spline(vec![0.0, 1.0, 1.5, 1.6, 4.0], vec![0.0, 0.02, 0.02, 0.0, 0.0]).unwrap(),
        ..Default::default()
    };
    let s0 = SimState::new(
        &plant,
        &profile,
        0.0,
        AttitudeState::at_rest(0.0, FRAC_PI_2, 0.0),
        Vector3::zeros(),
        SlipState::default(),
        0.0,
    )
    .unwrap();
    let opts = RunOptions {
        t_end: 4.0,
        dt: 1e-4,
        sample_every: 10,
    };
    let traj = simulate(&s0, &profile, &plant, &opts).unwrap();
    (plant, profile, traj)
}

fn criterion_7() -> Outcome {
    let (plant, profile, traj) = twist_pulse_run();
    let tau = plant.params.tau_fcrit;
    let samples = &traj.samples;
    let Some(cross) = samples.iter().position(|s| s.torques.t_f.abs() > tau) else {
        return outcome(false, "twist torque never exceeded the threshold".into());
    };
    let before = &samples[..cross];
    let stuck = before
        .iter()
        .all(|s| s.torques.friction_mode == FrictionMode::Stiction && s.state.slip.gamma_slip_rate == 0.0);

    let mut cancel = 0.0f64;
    for s in before {
        let e = derivative(&s.state, &profile, &plant).unwrap().evaluation;
        let t = &e.torques;
        let net = t.t_gravity + t.t_applied + t.t_friction - t.t_virtual - e.b;
        cancel = cancel.max((s.state.attitude.shell_to_world() * net).z.abs());
    }

    let after = &samples[cross + 1..];
    let slipping = after
        .iter()
        .all(|s| s.torques.friction_mode == FrictionMode::Stokes && s.state.slip.gamma_slip_rate != 0.0);
    let tail: Vec<f64> = after
        .iter()
        .filter(|s| s.state.time > 1.6)
        .map(|s| s.state.slip.gamma_slip_rate.abs())
        .collect();
    let decaying = tail.len() > 2 && tail.windows(2).all(|w| w[1] < w[0]);
    let peak = after
        .iter()
        .map(|s| s.state.slip.gamma_slip_rate.abs())
        .fold(0.0, f64::max);
    let end = tail.last().copied().unwrap_or(f64::NAN);
    outcome(
        stuck && slipping && decaying && cancel <= 1e-12,
        format!(
            "stiction until t = {:.3} s with zero slip {stuck}, world-z residual {cancel:.1e}; Stokes afterwards {slipping}, slip peak {peak:.3e} -> {end:.3e} rad/s, decaying {decaying}",
            samples[cross].state.time
        ),
    )
}

fn angles(c: &[[f64; 3]; 3], t: f64) -> ([f64; 3], [f64; 3]) {
    let mut v = [0.0; 3];
    let mut d = [0.0; 3];
    for i in 0..3 {
        let [amp, freq, phase] = c[i];
        v[i] = amp * (freq * t + phase).sin();
        d[i] = amp * freq * (freq * t + phase).cos();
    }
    v[1] += FRAC_PI_2;
    (v, d)
}

fn criterion_8() -> Outcome {
    let fd_forward = euler_rate_error(1000, 31).unwrap();

    // recover the angle rates of random smooth angle histories from the body
    // rate measured by differencing the attitude matrix
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut inverse = 0.0f64;
    let h = 1e-5;
    for _ in 0..1000 {
        let mut c = [[0.0; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            let amp = if i == 1 {
                rng.gen_range(0.0..1.2)
            } else {
                rng.gen_range(0.0..PI)
            };
            *row = [amp, rng.gen_range(0.2..3.0), rng.gen_range(-PI..PI)];
        }
        let attitude = |t: f64| {
            let (v, _) = angles(&c, t);
            rot_z(v[0]) * rot_x(v[1]) * rot_z(v[2])
        };
        for k in 0..5 {
            let t = rng.gen_range(0.0..5.0) + k as f64;
            let (v, d) = angles(&c, t);
            let a_dot = (attitude(t + h) - attitude(t - h)) / (2.0 * h);
            let w = vee(&(attitude(t).transpose() * a_dot));
            let (dg, db, da) = euler_rates(&w, v[1], v[2]).unwrap();
            inverse = inverse.max((dg - d[0]).abs().max((db - d[1]).abs()).max((da - d[2]).abs()));
        }
    }

    // near the poles: the exact map refuses, the regularized one stays finite
    let mut lock_ok = true;
    let mut largest = 0.0f64;
    for beta in [0.0, 1e-12, 1e-9, 1e-7, PI - 1e-9, PI] {
        let w = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let (a, b, c) = euler_rates_regularized(&w, beta, rng.gen_range(-PI..PI));
        let bound = 2.0 * w.norm() / GIMBAL_LOCK_SIN;
        lock_ok &= [a, b, c].iter().all(|r| r.is_finite() && r.abs() <= bound);
        lock_ok &= euler_rates(&w, beta, 0.3).is_err();
        largest = largest.max(a.abs().max(b.abs()).max(c.abs()));
    }
    // and a free rotation that passes the upright pose integrates cleanly
    let plant = Plant::new(RobotParams::example())
        .unwrap()
        .with_gravity(false)
        .with_friction(false);
    let profile = ActuatorProfile::default();
    for tilt_rate in [0.05, -0.05] {
        let s0 = SimState::new(
            &plant,
            &profile,
            0.0,
            AttitudeState::at_rest(0.0, 1e-7, 0.0),
            Vector3::new(tilt_rate, 0.0, 2.0),
            SlipState::default(),
            0.0,
        )
        .unwrap();
        let opts = RunOptions {
            t_end: 1.0,
            dt: 1e-4,
            sample_every: 1,
        };
        match simulate(&s0, &profile, &plant, &opts) {
            Ok(traj) => {
                for s in &traj.samples {
                    let a = &s.state.attitude;
                    let rates = [a.alpha_rate, a.beta_rate, a.gamma_rate];
                    lock_ok &= rates.iter().all(|r| r.is_finite() && r.abs() <= 4.0 / GIMBAL_LOCK_SIN);
                    lock_ok &= s.state.omega.iter().all(|x| x.is_finite());
                }
            }
            Err(_) => lock_ok = false,
        }
    }
    outcome(
        fd_forward <= 1e-6 && inverse <= 1e-6 && lock_ok,
        format!(
            "forward FD {fd_forward:.2e}, recovered rates {inverse:.2e}, near-lock finite and bounded {lock_ok} (largest {largest:.2e})"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("expanded angular momentum", criterion_1),
        ("expanded rate torque", criterion_2),
        ("affine torque and inertia invariance", criterion_3),
        ("contact curves", criterion_4),
        ("conservation and convergence", criterion_5),
        ("gyroscopic precession", criterion_6),
        ("friction modes", criterion_7),
        ("euler rates", criterion_8),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        all &= o.passed;
        println!(
            "criterion {} {} [{name}] {} ({:.1} s)",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
