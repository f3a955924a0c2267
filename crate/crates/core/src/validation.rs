//! Self-checks of the model against independent computations: brute-force
//! contact search, recursion versus expanded sums, finite differences and
//! conservation of angular momentum.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::dynamics::{euler_rates, ChainState, FrameChain, JointState, Plant, RobotParams};
use crate::error::Result;
use crate::geometry::{rot_x, rot_z, skew, EllipsoidShape, Vector3};
use crate::integrator::{simulate, ActuatorProfile, RunOptions, SimState};
use crate::kinematics::{AttitudeState, SlipState};
use crate::symbolic::{evaluate, expand_b, expand_l, Bindings, SymbolicSum, GOLDEN_B, GOLDEN_L};

/// Inclination-to-contact-angle map found by searching the surface: the
/// polar angle of the point with the greatest height when the shell is
/// tilted by `rot_x(beta_v)`. By central symmetry the lowest point has the
/// same angle from the opposite pole.
pub fn brute_force_contact_angle(shape: &EllipsoidShape, beta_v: f64) -> f64 {
    let height = |b: f64| (rot_x(beta_v) * shape.surface_point(FRAC_PI_2, b)).z;
    const GRID: usize = 10_000;
    let step = PI / GRID as f64;
    let best = (0..=GRID)
        .max_by(|&i, &j| height(i as f64 * step).total_cmp(&height(j as f64 * step)))
        .unwrap();
    let mut lo = (best as f64 - 1.0).max(0.0) * step;
    let mut hi = (best as f64 + 1.0).min(GRID as f64) * step;
    // golden-section refinement of the bracketing cells
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (height(x1), height(x2));
    for _ in 0..80 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = height(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = height(x2);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `(beta_v, beta_p)` pairs in degrees over `[0, 90]` for a shell with axis
/// ratio `ratio` (short semi-axis 1).
pub fn contact_curve(ratio: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    let shape = EllipsoidShape::new(ratio, 1.0)?;
    let n = samples.max(2);
    Ok((0..n)
        .map(|k| {
            let deg = 90.0 * k as f64 / (n - 1) as f64;
            (deg, shape.contact_point(deg.to_radians()).beta_p.to_degrees())
        })
        .collect())
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

impl CheckReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "check": self.name,
            "passed": self.passed,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "detail": self.detail,
            "seconds": self.seconds,
        })
    }
}

/// Parameters with generic (pose-dependent) inertias.
pub fn generic_params() -> RobotParams {
    RobotParams {
        theta_xy: 4.0e-3,
        theta_z: 2.5e-3,
        mass: 0.8,
        r_long: 0.12,
        r_short: 0.08,
        theta_phi_x: 2.0e-4,
        theta_phi_y: 3.1e-4,
        theta_phi_z: 2.6e-4,
        theta_psi_x: 1.5e-4,
        theta_psi_z: 2.2e-4,
        theta_g_x: 0.5e-3,
        theta_g_z: 1.0e-3,
        tau_fcrit: 0.01,
        rho_f: 0.02,
    }
}

/// Random joint motion and shell rates for checks.
pub fn random_chain_state(rng: &mut impl Rng) -> ChainState {
    let mut joint = |rate: f64| {
        JointState::new(
            rng.gen_range(-PI..PI),
            rng.gen_range(-rate..rate),
            rng.gen_range(-rate..rate),
        )
    };
    let phi = joint(5.0);
    let psi = joint(5.0);
    let rho = joint(500.0);
    let mut v = || {
        Vector3::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        )
    };
    ChainState {
        phi,
        psi,
        rho,
        omega: v(),
        omega_dot: v(),
    }
}

fn rel_err(a: &Vector3, b: &Vector3) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn structure_report(name: &'static str, expected_text: &str, actual: &SymbolicSum) -> CheckReport {
    let start = Instant::now();
    let (passed, errors, detail) = match SymbolicSum::parse(expected_text) {
        Ok(expected) => {
            let (extra, missing) = actual.difference(&expected);
            let detail = format!(
                "{} terms expanded, {} listed; {} missing, {} extra",
                actual.len(),
                expected.len(),
                missing.len(),
                extra.len()
            );
            let mismatches = missing.len() + extra.len();
            (mismatches == 0, mismatches as f64, detail)
        }
        Err(e) => (false, f64::INFINITY, format!("unreadable listing: {e}")),
    };
    CheckReport {
        name,
        passed,
        max_error: errors,
        tolerance: 0.0,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Expanded angular momentum versus the listed terms.
pub fn check_l_structure(listing: &str) -> CheckReport {
    structure_report("appendix_a_structure", listing, &expand_l())
}

/// Expanded rate-dependent torque versus the listed terms.
pub fn check_b_structure(listing: &str) -> Result<CheckReport> {
    Ok(structure_report("appendix_b_structure", listing, &expand_b()?))
}

/// Largest relative differences `(L, B)` between the expanded sums and the
/// recursive evaluation over `count` random states.
pub fn expansion_errors(params: &RobotParams, count: usize, seed: u64) -> Result<(f64, f64)> {
    let chain = FrameChain::from_params(params);
    let (l_sum, b_sum) = (expand_l(), expand_b()?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut el, mut eb) = (0.0f64, 0.0f64);
    for _ in 0..count {
        let s = random_chain_state(&mut rng);
        let bind = Bindings::from_chain(&chain, &s);
        let l = chain.total_angular_momentum(&s);
        el = el.max(rel_err(&evaluate(&l_sum, &bind)?, &l));
        let b = chain.mechanical_torque(&ChainState {
            omega_dot: Vector3::zeros(),
            ..s
        });
        eb = eb.max(rel_err(&evaluate(&b_sum, &bind)?, &b));
    }
    Ok((el, eb))
}

/// Largest residual of `T_mec(w') = theta_com w' + b` relative to `|T_mec|`.
pub fn affine_residual(params: &RobotParams, count: usize, seed: u64) -> Result<f64> {
    let chain = FrameChain::from_params(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let s = random_chain_state(&mut rng);
        let (theta, b) = chain.factorize_tmec(&s)?;
        let t = chain.mechanical_torque(&s);
        worst = worst.max(rel_err(&(theta * s.omega_dot + b), &t));
    }
    Ok(worst)
}

/// Largest deviation of the combined inertia from the plain tensor sum over
/// random gimbal poses, relative to the norm of the sum.
pub fn inertia_invariance_error(params: &RobotParams, count: usize, seed: u64) -> f64 {
    let chain = FrameChain::from_params(params);
    let sum: crate::geometry::Matrix3 = chain.frames().iter().map(|f| f.inertia_tensor()).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let s = random_chain_state(&mut rng);
        worst = worst.max((chain.combined_inertia(&s) - sum).norm() / sum.norm());
    }
    worst
}

/// Largest `|beta_p - oracle|` (rad) over `count` random shapes and
/// inclinations in `[0, pi/2]`.
pub fn contact_oracle_error(count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let r2 = rng.gen_range(0.05..1.0);
        let shape = EllipsoidShape::new(r2 * rng.gen_range(1.0..3.0), r2)?;
        let bv = rng.gen_range(0.0..FRAC_PI_2);
        let err = (shape.contact_point(bv).beta_p - brute_force_contact_angle(&shape, bv)).abs();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Largest entrywise difference between `A * skew(w)` rebuilt from the
/// Euler rates and a central difference of the attitude matrix.
pub fn euler_rate_error(count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (g, b, a) = (
            rng.gen_range(-PI..PI),
            rng.gen_range(0.05..PI - 0.05),
            rng.gen_range(-PI..PI),
        );
        let w = Vector3::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let (dg, db, da) = euler_rates(&w, b, a)?;
        let m = |t: f64| rot_z(g + dg * t) * rot_x(b + db * t) * rot_z(a + da * t);
        let fd = (m(h) - m(-h)) / (2.0 * h);
        worst = worst.max((fd - m(0.0) * skew(&w)).amax());
    }
    Ok(worst)
}

/// Relative drift of the world-frame angular momentum during a free,
/// torque-free rotation with frozen actuators.
pub fn free_rotation_drift(t_end: f64, dt: f64) -> Result<f64> {
    let plant = Plant::new(generic_params())?.with_gravity(false).with_friction(false);
    let profile = ActuatorProfile::default();
    let s0 = SimState::new(
        &plant,
        &profile,
        0.0,
        AttitudeState::at_rest(0.3, FRAC_PI_2, -0.2),
        Vector3::new(0.4, -0.3, 2.0),
        SlipState::default(),
        0.0,
    )?;
    let traj = simulate(
        &s0,
        &profile,
        &plant,
        &RunOptions {
            t_end,
            dt,
            sample_every: 100,
        },
    )?;
    let l0 = traj.samples[0].world_momentum();
    Ok(traj
        .samples
        .iter()
        .map(|s| (s.world_momentum() - l0).norm() / l0.norm())
        .fold(0.0, f64::max))
}

/// Where the reference listings come from.
#[derive(Debug, Clone)]
pub struct Listings {
    pub l: String,
    pub b: String,
}

impl Default for Listings {
    fn default() -> Self {
        Self {
            l: GOLDEN_L.to_string(),
            b: GOLDEN_B.to_string(),
        }
    }
}

fn timed(name: &'static str, tolerance: f64, detail: String, f: impl FnOnce() -> Result<f64>) -> CheckReport {
    let start = Instant::now();
    let (max_error, detail) = match f() {
        Ok(e) => (e, detail),
        Err(e) => (f64::INFINITY, format!("{detail}; error: {e}")),
    };
    CheckReport {
        name,
        passed: max_error <= tolerance,
        max_error,
        tolerance,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs every check.
pub fn run_all(listings: &Listings) -> Vec<CheckReport> {
    let mut out = vec![check_l_structure(&listings.l)];
    out.push(check_b_structure(&listings.b).unwrap_or_else(|e| CheckReport {
        name: "appendix_b_structure",
        passed: false,
        max_error: f64::INFINITY,
        tolerance: 0.0,
        detail: e.to_string(),
        seconds: 0.0,
    }));
    let params = generic_params();
    let mut expansion = None;
    out.push(timed(
        "appendix_a_numeric",
        1e-12,
        "1000 random states, relative error of L".into(),
        || {
            let e = expansion_errors(&params, 1000, 1)?;
            expansion = Some(e.1);
            Ok(e.0)
        },
    ));
    out.push(timed(
        "appendix_b_numeric",
        1e-12,
        "1000 random states, relative error of B".into(),
        || Ok(expansion.unwrap_or(f64::INFINITY)),
    ));
    out.push(timed(
        "tmec_affine",
        1e-12,
        "1000 random states, relative residual of theta_com w' + b".into(),
        || affine_residual(&params, 1000, 2),
    ));
    let mut symmetric = params;
    symmetric.theta_phi_y = symmetric.theta_phi_x;
    symmetric.theta_psi_z = symmetric.theta_psi_x + symmetric.theta_g_x - symmetric.theta_g_z;
    out.push(timed(
        "theta_com_invariance",
        1e-12,
        "100 random gimbal poses under the symmetry condition".into(),
        || Ok(inertia_invariance_error(&symmetric, 100, 3)),
    ));
    out.push(timed(
        "contact_oracle",
        1e-6,
        "200 random shapes, |beta_p - brute force| in rad".into(),
        || contact_oracle_error(200, 4),
    ));
    out.push(timed(
        "euler_rates_fd",
        1e-6,
        "1000 random attitudes, finite-difference attitude matrix".into(),
        || euler_rate_error(1000, 5),
    ));
    out.push(timed(
        "conservation",
        1e-6,
        "free rotation 10 s at dt = 1e-4, world angular momentum drift".into(),
        || free_rotation_drift(10.0, 1e-4),
    ));
    out
}
